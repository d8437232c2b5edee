// hoising: simulate and solve higher-order Ising encodings of hybrid SAT.
#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "hoising/gradients.hpp"
#include "hoising/instances.hpp"
#include "hoising/model.hpp"
#include "hoising/optimizer.hpp"
#include "hoising/rng.hpp"

using json = nlohmann::ordered_json;
using namespace hoising;

namespace {

std::string fmt_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// Exact dyadic form "p/q" of a coefficient with denominator 2^d, when the
// numerator is exactly representable; empty string otherwise.
std::string dyadic_string(double value, int d) {
  if (d > 40) return {};
  const double scaled = std::ldexp(value, d);
  const long long num = std::llround(scaled);
  if (static_cast<double>(num) != scaled) return {};
  long long p = num, q = 1ll << d;
  while (p != 0 && p % 2 == 0 && q > 1) {
    p /= 2;
    q /= 2;
  }
  if (p == 0) return "0";
  if (q == 1) return std::to_string(p);
  return std::to_string(p) + "/" + std::to_string(q);
}

std::string coefficient_line(double value, int d) {
  const std::string frac = dyadic_string(value, d);
  if (frac.empty()) return fmt_double(value);
  return frac + " = " + fmt_double(value);
}

int default_jobs() {
  if (const char* env = std::getenv("HOISING_JOBS")) {
    int v = 0;
    const auto res = std::from_chars(env, env + std::string(env).size(), v);
    if (res.ec == std::errc{} && v >= 1) return v;
  }
  return 1;
}

std::uint64_t resolve_seed(CLI::Option* opt, std::uint64_t seed) {
  if (opt->count() > 0) return seed;
  const std::uint64_t drawn =
      (static_cast<std::uint64_t>(std::random_device{}()) << 32) ^ std::random_device{}();
  std::cerr << "seed " << drawn << "\n";
  return drawn;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
}

// --- shared option bundles -------------------------------------------------

struct ConstraintFlags {
  bool use_xor = false;
  bool use_clause = false;
  int card_threshold = -1;
  int arity = 2;

  Constraint build() const {
    std::vector<Literal> lits;
    for (int i = 1; i <= arity; ++i) lits.push_back({i, 1});
    const int kinds = int(use_xor) + int(use_clause) + int(card_threshold >= 0);
    if (kinds != 1)
      throw CLI::ValidationError("constraint", "pick exactly one of --xor, --card, --clause");
    if (use_xor) return make_xor(std::move(lits));
    if (use_clause) return make_clause(std::move(lits));
    return make_card_ge(card_threshold, std::move(lits));
  }

  void attach(CLI::App* cmd) {
    cmd->add_flag("--xor", use_xor, "XOR constraint over positive literals");
    cmd->add_option("--card", card_threshold, "cardinality constraint: at least K literals true")
        ->check(CLI::NonNegativeNumber);
    cmd->add_flag("--clause", use_clause, "clause: at least one literal true");
    cmd->add_option("--arity", arity, "number of variables")->check(CLI::PositiveNumber);
  }
};

struct RunFlags {
  std::string type = "I";
  double p = 1.0;
  std::string grad = "exact";
  double two_point_delta = 1e-3;
  MoreauParams moreau;
  AdamConfig adam;
  CLI::Option* lr_opt = nullptr;
  CLI::Option* steps_opt = nullptr;

  void attach(CLI::App* cmd) {
    cmd->add_option("--type", type, "relaxation: I, II, or III")
        ->check(CLI::IsMember({"I", "II", "III"}));
    cmd->add_option("--p", p, "TypeII domain parameter (box [-sqrt(p), sqrt(p)])")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--grad", grad, "gradient provider: exact, two-point, moreau")
        ->check(CLI::IsMember({"exact", "two-point", "moreau"}));
    cmd->add_option("--delta", two_point_delta, "two-point probe step")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--moreau-t", moreau.t, "Moreau envelope scale t")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--moreau-alpha", moreau.alpha, "Moreau sampling alpha")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--moreau-delta", moreau.delta, "Moreau softmax temperature delta")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--moreau-samples", moreau.samples, "samples per Moreau estimate")
        ->check(CLI::Range(2, 1000000));
    lr_opt = cmd->add_option("--lr", adam.lr, "ADAM learning rate")->check(CLI::PositiveNumber);
    cmd->add_option("--beta1", adam.beta1, "ADAM beta1");
    cmd->add_option("--beta2", adam.beta2, "ADAM beta2");
    cmd->add_option("--epsilon", adam.epsilon, "ADAM epsilon")->check(CLI::PositiveNumber);
    steps_opt = cmd->add_option("--steps", adam.steps, "gradient steps per trial")
                    ->check(CLI::PositiveNumber);
  }

  Relaxation relaxation() const {
    if (type == "I") return Relaxation::TypeI;
    if (type == "II") return Relaxation::TypeII;
    return Relaxation::TypeIII;
  }

  GradientProvider provider() const {
    GradientProvider gp;
    gp.kind = grad == "exact" ? GradientKind::Exact
                              : (grad == "two-point" ? GradientKind::TwoPoint
                                                     : GradientKind::Moreau);
    gp.two_point_delta = two_point_delta;
    gp.moreau = moreau;
    return gp;
  }

  // Moreau runs default to lr=1 and a 10000-step budget unless overridden.
  AdamConfig adam_config() const {
    AdamConfig cfg = adam;
    if (grad == "moreau") {
      if (lr_opt->count() == 0) cfg.lr = 1.0;
      if (steps_opt->count() == 0) cfg.steps = 10000;
    }
    return cfg;
  }

  json config_json(std::uint64_t seed) const {
    const AdamConfig cfg = adam_config();
    json j;
    j["relaxation"] = type;
    j["p"] = p;
    j["gradient"] = grad;
    if (grad == "two-point") j["delta"] = two_point_delta;
    if (grad == "moreau")
      j["moreau"] = {{"t", moreau.t},
                     {"alpha", moreau.alpha},
                     {"delta", moreau.delta},
                     {"samples", moreau.samples}};
    j["adam"] = {{"lr", cfg.lr},
                 {"beta1", cfg.beta1},
                 {"beta2", cfg.beta2},
                 {"epsilon", cfg.epsilon},
                 {"steps", cfg.steps}};
    j["seed"] = seed;
    return j;
  }
};

// Deterministic parallel map over trial indices.
std::vector<TrialResult> run_trials(const HyperIsingModel& m, Relaxation r, double p,
                                    const GradientProvider& gp, const AdamConfig& cfg,
                                    std::uint64_t master_seed, int trials, int jobs,
                                    const TrialOptions& options = {}) {
  std::vector<TrialResult> results(trials);
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::string message;
  std::mutex message_mutex;
  auto worker = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= trials || failed.load()) return;
      try {
        results[i] = run_trial(m, r, p, gp, cfg, derive_seed(master_seed, i), options);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(message_mutex);
        message = e.what();
        failed.store(true);
        return;
      }
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < std::min(jobs, trials); ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  if (failed.load()) throw std::runtime_error(message);
  return results;
}

// --- subcommands -------------------------------------------------------------

int cmd_expand(const ConstraintFlags& flags, bool general) {
  const Constraint c = flags.build();
  std::ostringstream out;
  const char* kind = flags.use_xor ? "xor" : (flags.use_clause ? "clause" : "card");
  out << "constraint: " << kind;
  if (!flags.use_xor && !flags.use_clause) out << " >= " << flags.card_threshold;
  out << " over " << flags.arity << " variables\n";
  if (general) {
    const FourierTable t = compile_general(c);
    for (const auto& [mask, coeff] : t.subsets) {
      out << "subset {";
      bool first = true;
      for (int i = 0; i < t.arity; ++i)
        if ((mask >> i) & 1) {
          if (!first) out << ",";
          out << (i + 1);
          first = false;
        }
      out << "}: " << coefficient_line(coeff, t.arity) << "\n";
    }
  } else {
    const FourierTable t = compile_symmetric(c);
    for (int k = 0; k <= t.arity; ++k)
      out << "degree " << k << ": " << coefficient_line(t.coeffs[k], t.arity) << "\n";
  }
  std::cout << out.str();
  return 0;
}

int cmd_solve(const std::string& path, RunFlags& run, int trials, std::uint64_t seed, int jobs,
              const std::string& weights, bool early_stop, const std::string& out_path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  const HybridFormula f = parse_formula(in);
  const HyperIsingModel m =
      to_model(f, weights == "unit" ? WeightRule::Unit : WeightRule::Arity);

  const AdamConfig cfg = run.adam_config();
  const GradientProvider gp = run.provider();
  const Relaxation r = run.relaxation();

  TrialOptions options;
  options.early_stop = early_stop;
  const std::vector<TrialResult> results =
      run_trials(m, r, run.p, gp, cfg, seed, trials, jobs, options);

  int successes = 0;
  std::optional<int> earliest;
  int best_index = 0;
  for (int i = 0; i < trials; ++i) {
    const TrialResult& t = results[i];
    successes += t.success;
    if (t.first_success_step && (!earliest || *t.first_success_step < *earliest))
      earliest = *t.first_success_step;
    if (t.best_energy < results[best_index].best_energy) best_index = i;
  }
  const TrialResult& best = results[best_index];

  json j;
  j["schema"] = "hoising-solve-v1";
  j["instance"] = path;
  j["n"] = m.n;
  j["edges"] = static_cast<int>(m.edges.size());
  j["weight_rule"] = weights;
  j["ground_energy"] = ground_energy(m);
  if (r == Relaxation::TypeII && run.p != 1.0) {
    // the locking term reaches -p^2 per spin at +-sqrt(p); the n-shifted
    // target printed alongside assumes p = 1
    j["type_ii_target"] = ground_energy(m) - m.n * run.p * run.p;
    j["type_ii_target_at_p1"] = ground_energy(m) - m.n;
  }
  j["rho"] = {{"type_i", weak_convexity_bound(m, Relaxation::TypeI)},
              {"type_ii", weak_convexity_bound(m, Relaxation::TypeII)},
              {"type_iii", weak_convexity_bound(m, Relaxation::TypeIII)}};
  j["config"] = run.config_json(seed);
  j["trials"] = trials;
  j["successes"] = successes;
  j["success_rate"] = static_cast<double>(successes) / trials;
  j["first_success_step"] = earliest ? json(*earliest) : json(nullptr);
  j["best_energy"] = best.best_energy;
  j["best_assignment"] = best.best_assignment;
  j["satisfied"] = successes > 0;
  json per_trial = json::array();
  for (const TrialResult& t : results)
    per_trial.push_back({{"success", t.success},
                         {"first_success_step",
                          t.first_success_step ? json(*t.first_success_step) : json(nullptr)},
                         {"final_energy", t.final_energy}});
  j["per_trial"] = per_trial;

  write_output(out_path, j.dump(2) + "\n");
  return successes > 0 ? 0 : 1;
}

int cmd_trace(const ConstraintFlags& cflags, RunFlags& run, std::vector<double> init,
              double weight, std::uint64_t seed, const std::string& out_path) {
  const Constraint c = cflags.build();
  if (c.arity() != 2)
    throw CLI::ValidationError("trace", "trace is defined for 2-variable constraints");
  if (init.size() != 2) throw CLI::ValidationError("trace", "--init needs exactly 2 values");

  HyperIsingModel m;
  m.n = 2;
  m.edges.push_back(make_edge(c, weight));

  const AdamConfig cfg = run.adam_config();
  const GradientProvider gp = run.provider();
  const Relaxation r = run.relaxation();

  Rng rng(seed);
  SpinState state{init, r, run.p};
  AdamMoments moments;
  std::ostringstream csv;
  csv << "# hoising-trace-v1\n";
  csv << "step,a1,a2,objective,grad1,grad2\n";
  auto row = [&](int step, const std::vector<double>& g) {
    csv << step << ',' << fmt_double(state.a[0]) << ',' << fmt_double(state.a[1]) << ','
        << fmt_double(relaxed_value_at(m, r, run.p, state.a)) << ',' << fmt_double(g[0]) << ','
        << fmt_double(g[1]) << "\n";
  };
  for (int t = 1; t <= cfg.steps; ++t) {
    const std::vector<double> g = estimate_gradient(gp, m, state, rng);
    row(t - 1, g);
    adam_step(cfg, t, g, state.a, moments);
    project(state.a, r, run.p);
  }
  row(cfg.steps, estimate_gradient(gp, m, state, rng));

  write_output(out_path, csv.str());
  return 0;
}

int cmd_generate(int n, std::uint64_t seed, const std::string& out_path) {
  const PleInstance inst = generate_ple(make_ple_spec(n, seed));
  write_output(out_path, serialize_formula(inst.formula));
  return 0;
}

int cmd_bench(std::vector<int> sizes, bool stats_only, int instances, int trials,
              std::vector<std::string> types, std::vector<std::string> grads, RunFlags& run,
              std::uint64_t seed, int jobs, bool force, const std::string& out_path) {
  std::ostringstream csv;
  if (stats_only) {
    csv << "# hoising-ple-stats-v1\n";
    csv << "n,vars,edges,max_arity,fourier_terms\n";
    for (std::size_t si = 0; si < sizes.size(); ++si) {
      const int n = sizes[si];
      const PleInstance inst = generate_ple(make_ple_spec(n, derive_seed(seed, si)));
      const EncodingStats st = encoding_stats(inst.formula);
      csv << n << ',' << st.vars << ',' << st.edges << ','
          << st.arity_histogram.rbegin()->first << ',' << st.fourier_terms << "\n";
    }
    write_output(out_path, csv.str());
    return 0;
  }

  const bool wants_moreau =
      std::find(grads.begin(), grads.end(), "moreau") != grads.end();
  const int max_n = *std::max_element(sizes.begin(), sizes.end());
  if (wants_moreau && max_n > 8 && !force)
    throw CLI::ValidationError(
        "bench", "the Moreau provider is restricted to n = 8 by default: every gradient "
                 "estimate costs --moreau-samples objective sweeps and larger instances "
                 "need far more samples per step; pass --force to override");

  std::vector<BatchConfig> configs;
  for (const std::string& ty : types) {
    for (const std::string& gr : grads) {
      BatchConfig bc;
      bc.relaxation = ty == "I" ? Relaxation::TypeI
                                : (ty == "II" ? Relaxation::TypeII : Relaxation::TypeIII);
      bc.provider = run.provider();
      bc.provider.kind = gr == "exact" ? GradientKind::Exact
                                       : (gr == "two-point" ? GradientKind::TwoPoint
                                                            : GradientKind::Moreau);
      bc.p = run.p;
      bc.label = ty + "/" + gr;
      configs.push_back(bc);
    }
  }

  AdamConfig cfg = run.adam_config();
  if (wants_moreau && run.lr_opt->count() == 0) cfg.lr = 1.0;
  if (wants_moreau && run.steps_opt->count() == 0) cfg.steps = 10000;

  csv << "# hoising-bench-v1\n";
  csv << "n,relaxation,gradient,step,pooled_rate,median_rate,q1_rate,q3_rate\n";
  std::ostringstream summary;
  summary << "final success rates (step " << cfg.steps << ")\n";

  for (std::size_t si = 0; si < sizes.size(); ++si) {
    const int n = sizes[si];
    std::vector<HyperIsingModel> models;
    models.reserve(instances);
    for (int i = 0; i < instances; ++i) {
      const PleInstance inst =
          generate_ple(make_ple_spec(n, derive_seed(seed, si * instances + i)));
      models.push_back(to_model(inst.formula, WeightRule::Arity));
    }
    const BatchResult batch =
        run_batch(models, configs, cfg, trials, derive_seed(seed, 0x10000 + si), jobs);

    for (std::size_t ci = 0; ci < configs.size(); ++ci) {
      const auto [ty, gr] = [&]() -> std::pair<std::string, std::string> {
        const auto cut = configs[ci].label.find('/');
        return {configs[ci].label.substr(0, cut), configs[ci].label.substr(cut + 1)};
      }();
      for (int step = 1; step <= cfg.steps; ++step) {
        const std::vector<double> rates = batch.instance_rates(ci, step);
        csv << n << ',' << ty << ',' << gr << ',' << step << ','
            << fmt_double(batch.pooled_rate(ci, step)) << ','
            << fmt_double(quantile(rates, 0.5)) << ',' << fmt_double(quantile(rates, 0.25))
            << ',' << fmt_double(quantile(rates, 0.75)) << "\n";
      }
      const std::vector<double> final_rates = batch.instance_rates(ci, cfg.steps);
      summary << "  n=" << n << " " << configs[ci].label << ": pooled "
              << fmt_double(batch.pooled_rate(ci, cfg.steps)) << ", median "
              << fmt_double(quantile(final_rates, 0.5)) << ", iqr ["
              << fmt_double(quantile(final_rates, 0.25)) << ", "
              << fmt_double(quantile(final_rates, 0.75)) << "]\n";
    }
  }
  write_output(out_path, csv.str());
  std::cerr << summary.str();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"higher-order Ising machine simulator for hybrid SAT"};
  app.require_subcommand(1);

  // expand
  auto* expand = app.add_subcommand("expand", "print the Fourier coefficients of a constraint");
  ConstraintFlags expand_cflags;
  expand_cflags.attach(expand);
  bool expand_general = false;
  expand->add_flag("--general", expand_general, "print the subset-indexed table");

  // solve
  auto* solve = app.add_subcommand("solve", "run descent trials on an instance file");
  std::string solve_file;
  solve->add_option("file", solve_file, "hybrid formula file")->required();
  RunFlags solve_run;
  solve_run.attach(solve);
  int solve_trials = 100;
  solve->add_option("--trials", solve_trials, "independent trials")->check(CLI::PositiveNumber);
  std::uint64_t solve_seed = 0;
  auto* solve_seed_opt = solve->add_option("--seed", solve_seed, "master seed");
  int solve_jobs = default_jobs();
  solve->add_option("--jobs", solve_jobs, "parallel trial workers")->check(CLI::PositiveNumber);
  std::string solve_weights = "arity";
  solve->add_option("--weights", solve_weights, "default weight rule for unweighted constraints")
      ->check(CLI::IsMember({"unit", "arity"}));
  bool solve_early = false;
  solve->add_flag("--early-stop", solve_early, "stop each trial at its first success");
  std::string solve_out;
  solve->add_option("-o,--output", solve_out, "write the JSON report here (default stdout)");

  // trace
  auto* trace = app.add_subcommand("trace", "CSV descent trajectory of a 2-variable constraint");
  ConstraintFlags trace_cflags;
  trace_cflags.attach(trace);
  RunFlags trace_run;
  trace_run.attach(trace);
  std::vector<double> trace_init;
  trace->add_option("--init", trace_init, "initial point a1,a2")->required()->delimiter(',');
  double trace_weight = 1.0;
  trace->add_option("--weight", trace_weight, "edge weight")->check(CLI::PositiveNumber);
  std::uint64_t trace_seed = 0;
  auto* trace_seed_opt = trace->add_option("--seed", trace_seed, "estimator seed");
  std::string trace_out;
  trace->add_option("-o,--output", trace_out, "write the CSV here (default stdout)");

  // generate-ple
  auto* gen = app.add_subcommand("generate-ple", "emit a parity-learning-with-error instance");
  int gen_n = 8;
  gen->add_option("--n", gen_n, "parity bits (m = 2n samples)")->check(CLI::Range(2, 4096));
  std::uint64_t gen_seed = 0;
  auto* gen_seed_opt = gen->add_option("--seed", gen_seed, "generator seed");
  std::string gen_out;
  gen->add_option("-o,--output", gen_out, "write the instance here (default stdout)");

  // bench
  auto* bench = app.add_subcommand("bench", "success-rate curves over generated PLE instances");
  std::vector<int> bench_sizes{8};
  bench->add_option("--n", bench_sizes, "parity-bit sizes")->delimiter(',');
  bool bench_stats = false;
  bench->add_flag("--stats", bench_stats, "print encoding sizes only");
  int bench_instances = 10;
  bench->add_option("--instances", bench_instances, "instances per size")
      ->check(CLI::PositiveNumber);
  int bench_trials = 50;
  bench->add_option("--trials", bench_trials, "trials per instance")->check(CLI::PositiveNumber);
  std::vector<std::string> bench_types{"I", "II", "III"};
  bench->add_option("--types", bench_types, "relaxations to compare")
      ->delimiter(',')
      ->check(CLI::IsMember({"I", "II", "III"}));
  std::vector<std::string> bench_grads{"exact"};
  bench->add_option("--grads", bench_grads, "gradient providers to compare")
      ->delimiter(',')
      ->check(CLI::IsMember({"exact", "two-point", "moreau"}));
  RunFlags bench_run;
  bench_run.attach(bench);
  std::uint64_t bench_seed = 0;
  auto* bench_seed_opt = bench->add_option("--seed", bench_seed, "master seed");
  int bench_jobs = default_jobs();
  bench->add_option("--jobs", bench_jobs, "parallel trial workers")->check(CLI::PositiveNumber);
  bool bench_force = false;
  bench->add_flag("--force", bench_force, "allow the Moreau provider beyond n = 8");
  std::string bench_out;
  bench->add_option("-o,--output", bench_out, "write the CSV here (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (expand->parsed()) return cmd_expand(expand_cflags, expand_general);
    if (solve->parsed())
      return cmd_solve(solve_file, solve_run, solve_trials,
                       resolve_seed(solve_seed_opt, solve_seed), solve_jobs, solve_weights,
                       solve_early, solve_out);
    if (trace->parsed())
      return cmd_trace(trace_cflags, trace_run, trace_init, trace_weight,
                       resolve_seed(trace_seed_opt, trace_seed), trace_out);
    if (gen->parsed())
      return cmd_generate(gen_n, resolve_seed(gen_seed_opt, gen_seed), gen_out);
    if (bench->parsed())
      return cmd_bench(bench_sizes, bench_stats, bench_instances, bench_trials, bench_types,
                       bench_grads, bench_run, resolve_seed(bench_seed_opt, bench_seed),
                       bench_jobs, bench_force, bench_out);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
