#pragma once

#include <functional>
#include <span>
#include <vector>

#include "hoising/model.hpp"
#include "hoising/rng.hpp"

namespace hoising {

enum class GradientKind { Exact, TwoPoint, Moreau };

struct MoreauParams {
  double t = 1.0;
  double alpha = 1.0;
  double delta = 1.0;
  int samples = 1000;
};

/// Selects how gradients of the relaxed objective are produced:
///   Exact    analytic gradient via the cumulative-convolution scheme
///   TwoPoint forward differences, (H(a + delta e_i) - H(a)) / delta
///   Moreau   sampled proximal estimate of the Moreau-envelope gradient
struct GradientProvider {
  GradientKind kind = GradientKind::Exact;
  double two_point_delta = 1e-3;
  MoreauParams moreau;
};

void validate_provider(const GradientProvider& gp);

using Objective = std::function<double(std::span<const double>)>;

/// Core of the Moreau estimator over an arbitrary objective: draw `samples`
/// points from N(a, (delta*t/alpha) I), weight them by a max-subtracted
/// softmax of -objective/delta, and return (a - weighted mean)/t. Throws
/// std::runtime_error if the objective is non-finite at any sample.
std::vector<double> moreau_gradient(const MoreauParams& params, const Objective& objective,
                                    std::span<const double> a, Rng& rng);

/// Gradient of the relaxed objective at s. The rng is consumed only by the
/// Moreau estimator. TwoPoint and Moreau probe the objective's extension to
/// all of R^n (no domain projection of probe points). Throws
/// std::runtime_error if any probe evaluates to a non-finite value.
std::vector<double> estimate_gradient(const GradientProvider& gp, const HyperIsingModel& m,
                                      const SpinState& s, Rng& rng);

}  // namespace hoising
