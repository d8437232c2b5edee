#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <numbers>

#include "hoising/optimizer.hpp"
#include "test_oracles.hpp"

using namespace hoising;

namespace {

std::vector<Literal> positive_literals(int d) {
  std::vector<Literal> lits;
  for (int i = 1; i <= d; ++i) lits.push_back({i, 1});
  return lits;
}

HyperIsingModel xor2_model() {
  HyperIsingModel m;
  m.n = 2;
  m.edges.push_back(make_edge(make_xor(positive_literals(2)), 1.0));
  return m;
}

}  // namespace

TEST_CASE("adam step basics") {
  const AdamConfig cfg;
  AdamMoments moments;
  std::vector<double> a{0.5, -0.25};

  adam_step(cfg, 1, std::vector<double>{0.0, 0.0}, a, moments);
  CHECK(a == std::vector<double>{0.5, -0.25});

  // first step with unit gradient: bias-corrected m-hat = v-hat = 1
  std::vector<double> b{1.0};
  AdamMoments mb;
  adam_step(cfg, 1, std::vector<double>{1.0}, b, mb);
  CHECK(b[0] == doctest::Approx(1.0 - 0.05).epsilon(1e-6));

  // constant gradient keeps moving against it
  adam_step(cfg, 2, std::vector<double>{1.0}, b, mb);
  CHECK(b[0] < 1.0 - 0.05);
}

TEST_CASE("projection clamps per relaxation") {
  std::vector<double> a{1.2, -0.5};
  project(a, Relaxation::TypeI, 1.0);
  CHECK(a == std::vector<double>{1.0, -0.5});

  std::vector<double> b{3.0, 0.0};
  project(b, Relaxation::TypeII, 4.0);
  CHECK(b == std::vector<double>{2.0, 0.0});

  std::vector<double> c{17.0, -9.5};
  project(c, Relaxation::TypeIII, 1.0);
  CHECK(c == std::vector<double>{17.0, -9.5});
}

TEST_CASE("trial succeeds immediately when the init already rounds well") {
  const HyperIsingModel m = xor2_model();
  TrialOptions opts;
  opts.init = std::vector<double>{0.5, -0.5};
  const TrialResult r =
      run_trial(m, Relaxation::TypeI, 1.0, GradientProvider{}, AdamConfig{}, 1, opts);
  CHECK(r.success);
  CHECK(*r.first_success_step == 1);
  CHECK(r.final_assignment == std::vector<int>{1, -1});
  CHECK(r.final_energy == doctest::Approx(-1.0));
}

TEST_CASE("diagonal inits stall at the saddle and never satisfy") {
  const HyperIsingModel m = xor2_model();
  TrialOptions opts;
  opts.init = std::vector<double>{0.4, 0.4};
  opts.record_trajectory = true;
  const TrialResult r =
      run_trial(m, Relaxation::TypeI, 1.0, GradientProvider{}, AdamConfig{}, 1, opts);
  CHECK(!r.success);
  CHECK(!r.first_success_step.has_value());
  CHECK(std::abs(r.final_state[0]) < 1e-2);
  CHECK(std::abs(r.final_state[1]) < 1e-2);
  REQUIRE(r.trajectory.has_value());
  CHECK(r.trajectory->size() == 501);  // init plus every step
  CHECK(r.trajectory->front().step == 0);
  CHECK(r.trajectory->back().step == 500);
}

TEST_CASE("type III trials end on the +-pi/2 grid") {
  const HyperIsingModel m = xor2_model();
  for (std::uint64_t seed : {11u, 22u, 33u, 44u}) {
    const TrialResult r =
        run_trial(m, Relaxation::TypeIII, 1.0, GradientProvider{}, AdamConfig{}, seed);
    for (double ai : r.final_state) CHECK(std::abs(std::cos(2.0 * ai) + 1.0) < 1e-3);
  }
}

TEST_CASE("early stop cuts the trial at first success") {
  const HyperIsingModel m = xor2_model();
  TrialOptions opts;
  opts.init = std::vector<double>{0.5, -0.5};
  opts.early_stop = true;
  opts.record_trajectory = true;
  const TrialResult r =
      run_trial(m, Relaxation::TypeI, 1.0, GradientProvider{}, AdamConfig{}, 1, opts);
  CHECK(r.success);
  CHECK(r.trajectory->back().step == 1);
}

TEST_CASE("states stay inside their domains after every step") {
  std::mt19937_64 rng(808);
  const HyperIsingModel m = oracle::random_model(rng, 5, 6, 4);
  for (const Relaxation r : {Relaxation::TypeI, Relaxation::TypeII}) {
    TrialOptions opts;
    opts.record_trajectory = true;
    AdamConfig cfg;
    cfg.lr = 0.8;  // strides big enough to hit the walls
    cfg.steps = 60;
    const double p = 2.0;
    const TrialResult res = run_trial(m, r, p, GradientProvider{}, cfg, 99, opts);
    const double bound = r == Relaxation::TypeI ? 1.0 : std::sqrt(p);
    for (const TrajectoryPoint& pt : *res.trajectory)
      for (double ai : pt.a) CHECK(std::abs(ai) <= bound);
  }
}

TEST_CASE("objective is non-increasing at a vanishing learning rate") {
  std::mt19937_64 rng(909);
  AdamConfig cfg;
  cfg.lr = 1e-3;
  cfg.steps = 100;
  for (int trial = 0; trial < 8; ++trial) {
    const HyperIsingModel m = oracle::random_model(rng, 5, 6, 4);
    for (const Relaxation r : {Relaxation::TypeI, Relaxation::TypeII, Relaxation::TypeIII}) {
      TrialOptions opts;
      opts.record_trajectory = true;
      const TrialResult res = run_trial(m, r, 1.0, GradientProvider{}, cfg, 1234 + trial, opts);
      for (std::size_t i = 1; i < res.trajectory->size(); ++i)
        CHECK((*res.trajectory)[i].objective <=
              (*res.trajectory)[i - 1].objective + 1e-6);
    }
  }
}

TEST_CASE("identical seeds reproduce trials bit for bit") {
  std::mt19937_64 rng(1010);
  const HyperIsingModel m = oracle::random_model(rng, 6, 6, 4);
  GradientProvider gp;
  gp.kind = GradientKind::Moreau;
  gp.moreau.samples = 100;
  AdamConfig cfg;
  cfg.steps = 40;
  const TrialResult a = run_trial(m, Relaxation::TypeII, 1.0, gp, cfg, 777);
  const TrialResult b = run_trial(m, Relaxation::TypeII, 1.0, gp, cfg, 777);
  CHECK(a.success == b.success);
  CHECK(a.first_success_step == b.first_success_step);
  CHECK(a.final_state == b.final_state);
  CHECK(a.final_energy == b.final_energy);
  CHECK(a.final_assignment == b.final_assignment);
}

TEST_CASE("single-clause batch reaches full success within five steps") {
  HyperIsingModel m;
  m.n = 2;
  m.edges.push_back(make_edge(make_clause(positive_literals(2)), 1.0));

  BatchConfig bc;
  bc.relaxation = Relaxation::TypeI;
  AdamConfig cfg;
  cfg.lr = 0.5;  // crosses the box in a few strides
  cfg.steps = 5;
  const BatchResult table = run_batch({m}, {bc}, cfg, 40, 4242);
  CHECK(table.pooled_rate(0, 5) == 1.0);
}

TEST_CASE("batches are deterministic and job-count independent") {
  std::mt19937_64 rng(2020);
  const std::vector<HyperIsingModel> models{oracle::random_model(rng, 5, 6, 4),
                                            oracle::random_model(rng, 5, 6, 4)};
  std::vector<BatchConfig> configs(2);
  configs[0].relaxation = Relaxation::TypeI;
  configs[1].relaxation = Relaxation::TypeIII;
  AdamConfig cfg;
  cfg.steps = 30;
  const BatchResult a = run_batch(models, configs, cfg, 10, 99, 1);
  const BatchResult b = run_batch(models, configs, cfg, 10, 99, 4);
  CHECK(a.first_success == b.first_success);
}

TEST_CASE("quantiles interpolate linearly") {
  const std::vector<double> v{4, 1, 3, 2};
  CHECK(quantile(v, 0.0) == 1.0);
  CHECK(quantile(v, 1.0) == 4.0);
  CHECK(quantile(v, 0.5) == 2.5);
  CHECK(quantile(v, 0.25) == 1.75);
  CHECK_THROWS_AS(quantile({}, 0.5), std::invalid_argument);
}
