#include "hoising/gradients.hpp"

#include <cmath>
#include <stdexcept>

namespace hoising {

void validate_provider(const GradientProvider& gp) {
  if (gp.kind == GradientKind::TwoPoint && !(gp.two_point_delta > 0.0))
    throw std::invalid_argument("two-point delta must be positive");
  if (gp.kind == GradientKind::Moreau) {
    const MoreauParams& p = gp.moreau;
    if (!(p.t > 0.0) || !(p.alpha > 0.0) || !(p.delta > 0.0))
      throw std::invalid_argument("Moreau parameters must be positive");
    if (p.samples < 2) throw std::invalid_argument("Moreau estimator needs >= 2 samples");
  }
}

namespace {

double checked(double v) {
  if (!std::isfinite(v)) throw std::runtime_error("objective diverged at a probe point");
  return v;
}

std::vector<double> two_point(const GradientProvider& gp, const HyperIsingModel& m,
                              const SpinState& s) {
  const double delta = gp.two_point_delta;
  std::vector<double> a(s.a);
  const double base = checked(relaxed_value_at(m, s.relaxation, s.p, a));
  std::vector<double> grad(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double saved = a[i];
    a[i] = saved + delta;
    grad[i] = (checked(relaxed_value_at(m, s.relaxation, s.p, a)) - base) / delta;
    a[i] = saved;
  }
  return grad;
}

}  // namespace

std::vector<double> moreau_gradient(const MoreauParams& params, const Objective& objective,
                                    std::span<const double> a, Rng& rng) {
  const std::size_t n = a.size();
  const std::size_t count = static_cast<std::size_t>(params.samples);
  const double sigma = std::sqrt(params.delta * params.t / params.alpha);

  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> samples(count * n);
  std::vector<double> scores(count);
  std::vector<double> b(n);
  for (std::size_t k = 0; k < count; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      b[i] = a[i] + sigma * normal(rng);
      samples[k * n + i] = b[i];
    }
    scores[k] = -checked(objective(b)) / params.delta;
  }

  // Self-normalized softmax weights, max-subtracted; the weighted sample mean
  // estimates the proximal point.
  double top = scores[0];
  for (double sc : scores) top = std::max(top, sc);
  std::vector<double> prox(n, 0.0);
  double total = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    const double w = std::exp(scores[k] - top);
    total += w;
    for (std::size_t i = 0; i < n; ++i) prox[i] += w * samples[k * n + i];
  }
  std::vector<double> grad(n);
  for (std::size_t i = 0; i < n; ++i) grad[i] = (a[i] - prox[i] / total) / params.t;
  return grad;
}

std::vector<double> estimate_gradient(const GradientProvider& gp, const HyperIsingModel& m,
                                      const SpinState& s, Rng& rng) {
  validate_provider(gp);
  switch (gp.kind) {
    case GradientKind::Exact: return relaxed_gradient(m, s);
    case GradientKind::TwoPoint: return two_point(gp, m, s);
    case GradientKind::Moreau:
      return moreau_gradient(
          gp.moreau,
          [&](std::span<const double> b) { return relaxed_value_at(m, s.relaxation, s.p, b); },
          s.a, rng);
  }
  throw std::logic_error("estimate_gradient: unknown provider kind");
}

}  // namespace hoising
