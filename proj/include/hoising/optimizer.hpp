#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hoising/gradients.hpp"
#include "hoising/model.hpp"

namespace hoising {

struct AdamConfig {
  double lr = 0.05;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int steps = 500;
};

void validate_adam(const AdamConfig& cfg);

struct AdamMoments {
  std::vector<double> m;
  std::vector<double> v;
};

/// One bias-corrected ADAM update in place; t is 1-based.
void adam_step(const AdamConfig& cfg, int t, std::span<const double> grad,
               std::vector<double>& a, AdamMoments& moments);

/// Clamp to the relaxation domain (TypeIII is unconstrained).
void project(std::vector<double>& a, Relaxation r, double p);

struct TrajectoryPoint {
  int step = 0;
  std::vector<double> a;
  double objective = 0.0;
};

struct TrialResult {
  bool success = false;
  std::optional<int> first_success_step;  // present iff success
  double final_energy = 0.0;              // discrete energy of the final rounding
  std::vector<int> final_assignment;
  double best_energy = 0.0;  // lowest discrete energy seen over all steps
  std::vector<int> best_assignment;
  std::vector<double> final_state;
  std::optional<std::vector<TrajectoryPoint>> trajectory;
};

struct TrialOptions {
  bool record_trajectory = false;
  bool early_stop = false;
  // Overrides the random initial point (used by traces and targeted tests).
  std::optional<std::vector<double>> init;
};

/// One seeded descent: uniform random init in the relaxation's natural box
/// ([-1,1], [-sqrt(p),sqrt(p)], or [-pi,pi] per coordinate), then
/// gradient -> adam -> project for cfg.steps steps, rounding and checking
/// satisfaction after every step. Runs the full budget unless early_stop.
TrialResult run_trial(const HyperIsingModel& m, Relaxation r, double p,
                      const GradientProvider& gp, const AdamConfig& cfg, std::uint64_t seed,
                      const TrialOptions& options = {});

struct BatchConfig {
  Relaxation relaxation = Relaxation::TypeI;
  GradientProvider provider;
  double p = 1.0;
  std::string label;
};

/// Success bookkeeping for (configuration x instance x trial); entries are
/// the first satisfying step, or -1 when the trial never succeeded.
struct BatchResult {
  int steps = 0;
  int trials_per_instance = 0;
  std::vector<BatchConfig> configs;
  std::vector<std::vector<std::vector<int>>> first_success;

  /// Fraction of all trials of one configuration successful by `step`.
  double pooled_rate(std::size_t config, int step) const;
  /// Per-instance success fractions at `step`.
  std::vector<double> instance_rates(std::size_t config, int step) const;
};

/// Runs trials_per_instance trials for every (configuration, instance) pair.
/// Per-trial seeds derive from the master seed by task counter, so results
/// are identical for any jobs count.
BatchResult run_batch(const std::vector<HyperIsingModel>& models,
                      const std::vector<BatchConfig>& configs, const AdamConfig& cfg,
                      int trials_per_instance, std::uint64_t master_seed, int jobs = 1);

/// Linear-interpolation quantile of an unsorted sample (q in [0,1]).
double quantile(std::vector<double> values, double q);

}  // namespace hoising
