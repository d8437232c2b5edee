#include "hoising/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace hoising {

void validate_adam(const AdamConfig& cfg) {
  if (!(cfg.lr > 0.0)) throw std::invalid_argument("learning rate must be positive");
  if (cfg.beta1 < 0.0 || cfg.beta1 >= 1.0) throw std::invalid_argument("beta1 must be in [0,1)");
  if (cfg.beta2 < 0.0 || cfg.beta2 >= 1.0) throw std::invalid_argument("beta2 must be in [0,1)");
  if (!(cfg.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (cfg.steps < 1) throw std::invalid_argument("step budget must be positive");
}

void adam_step(const AdamConfig& cfg, int t, std::span<const double> grad,
               std::vector<double>& a, AdamMoments& moments) {
  if (grad.size() != a.size()) throw std::invalid_argument("adam_step: dimension mismatch");
  if (moments.m.empty()) moments.m.assign(a.size(), 0.0);
  if (moments.v.empty()) moments.v.assign(a.size(), 0.0);
  const double c1 = 1.0 - std::pow(cfg.beta1, t);
  const double c2 = 1.0 - std::pow(cfg.beta2, t);
  for (std::size_t i = 0; i < a.size(); ++i) {
    moments.m[i] = cfg.beta1 * moments.m[i] + (1.0 - cfg.beta1) * grad[i];
    moments.v[i] = cfg.beta2 * moments.v[i] + (1.0 - cfg.beta2) * grad[i] * grad[i];
    const double mhat = moments.m[i] / c1;
    const double vhat = moments.v[i] / c2;
    a[i] -= cfg.lr * mhat / (std::sqrt(vhat) + cfg.epsilon);
  }
}

void project(std::vector<double>& a, Relaxation r, double p) {
  if (r == Relaxation::TypeIII) return;
  const double bound = r == Relaxation::TypeI ? 1.0 : std::sqrt(p);
  for (double& ai : a) ai = std::clamp(ai, -bound, bound);
}

TrialResult run_trial(const HyperIsingModel& m, Relaxation r, double p,
                      const GradientProvider& gp, const AdamConfig& cfg, std::uint64_t seed,
                      const TrialOptions& options) {
  validate_model(m);
  validate_adam(cfg);
  validate_provider(gp);

  Rng rng(seed);
  SpinState state{std::vector<double>(m.n), r, p};
  if (options.init) {
    if (static_cast<int>(options.init->size()) != m.n)
      throw std::invalid_argument("run_trial: init dimension mismatch");
    state.a = *options.init;
  } else {
    double box;
    switch (r) {
      case Relaxation::TypeI: box = 1.0; break;
      case Relaxation::TypeII: box = std::sqrt(p); break;
      case Relaxation::TypeIII: box = std::acos(-1.0); break;
      default: throw std::logic_error("unknown relaxation");
    }
    std::uniform_real_distribution<double> uniform(-box, box);
    for (double& ai : state.a) ai = uniform(rng);
  }

  TrialResult result;
  if (options.record_trajectory) {
    result.trajectory.emplace();
    result.trajectory->push_back({0, state.a, relaxed_value_at(m, r, p, state.a)});
  }
  result.best_energy = std::numeric_limits<double>::infinity();

  AdamMoments moments;
  for (int t = 1; t <= cfg.steps; ++t) {
    const std::vector<double> grad = estimate_gradient(gp, m, state, rng);
    adam_step(cfg, t, grad, state.a, moments);
    project(state.a, r, p);

    const std::vector<int> assignment = round_to_assignment(state);
    const AssignmentEval eval = evaluate_assignment(m, assignment);
    if (eval.energy < result.best_energy) {
      result.best_energy = eval.energy;
      result.best_assignment = assignment;
    }
    if (eval.satisfied && !result.first_success_step) result.first_success_step = t;

    if (t == cfg.steps || (options.early_stop && result.first_success_step)) {
      result.final_energy = eval.energy;
      result.final_assignment = assignment;
      if (options.record_trajectory)
        result.trajectory->push_back({t, state.a, relaxed_value_at(m, r, p, state.a)});
      break;
    }
    if (options.record_trajectory)
      result.trajectory->push_back({t, state.a, relaxed_value_at(m, r, p, state.a)});
  }
  result.success = result.first_success_step.has_value();
  result.final_state = state.a;
  return result;
}

double BatchResult::pooled_rate(std::size_t config, int step) const {
  long long hits = 0, total = 0;
  for (const std::vector<int>& per_instance : first_success[config]) {
    for (int fss : per_instance) {
      total += 1;
      hits += (fss >= 0 && fss <= step);
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(total);
}

std::vector<double> BatchResult::instance_rates(std::size_t config, int step) const {
  std::vector<double> rates;
  rates.reserve(first_success[config].size());
  for (const std::vector<int>& per_instance : first_success[config]) {
    long long hits = 0;
    for (int fss : per_instance) hits += (fss >= 0 && fss <= step);
    rates.push_back(per_instance.empty()
                        ? 0.0
                        : static_cast<double>(hits) / static_cast<double>(per_instance.size()));
  }
  return rates;
}

BatchResult run_batch(const std::vector<HyperIsingModel>& models,
                      const std::vector<BatchConfig>& configs, const AdamConfig& cfg,
                      int trials_per_instance, std::uint64_t master_seed, int jobs) {
  if (trials_per_instance < 1) throw std::invalid_argument("run_batch: trials must be >= 1");
  if (jobs < 1) jobs = 1;

  BatchResult result;
  result.steps = cfg.steps;
  result.trials_per_instance = trials_per_instance;
  result.configs = configs;
  result.first_success.assign(
      configs.size(), std::vector<std::vector<int>>(
                          models.size(), std::vector<int>(trials_per_instance, -1)));

  const std::size_t total_tasks = configs.size() * models.size() *
                                  static_cast<std::size_t>(trials_per_instance);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::string error_message;
  std::mutex error_mutex;

  auto worker = [&]() {
    for (;;) {
      const std::size_t task = next.fetch_add(1);
      if (task >= total_tasks || failed.load()) return;
      const std::size_t trial = task % trials_per_instance;
      const std::size_t inst = (task / trials_per_instance) % models.size();
      const std::size_t conf = task / (trials_per_instance * models.size());
      try {
        const BatchConfig& bc = configs[conf];
        const TrialResult tr = run_trial(models[inst], bc.relaxation, bc.p, bc.provider, cfg,
                                         derive_seed(master_seed, task));
        result.first_success[conf][inst][trial] =
            tr.first_success_step ? *tr.first_success_step : -1;
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        error_message = e.what();
        failed.store(true);
        return;
      }
    }
  };

  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    const std::size_t count = std::min<std::size_t>(jobs, total_tasks);
    pool.reserve(count);
    for (std::size_t i = 0; i < count; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  if (failed.load()) throw std::runtime_error("run_batch: trial failed: " + error_message);
  return result;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = static_cast<std::size_t>(std::ceil(pos));
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

}  // namespace hoising
