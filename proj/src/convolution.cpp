#include "hoising/convolution.hpp"

#include <stdexcept>

namespace hoising {

namespace {
thread_local long long g_convolve_calls = 0;
}

long long convolve_call_count() { return g_convolve_calls; }
void reset_convolve_call_count() { g_convolve_calls = 0; }

std::vector<double> convolve(std::span<const double> g, std::span<const double> h) {
  if (g.empty() || h.empty()) throw std::invalid_argument("convolve: empty input");
  ++g_convolve_calls;
  std::vector<double> out(g.size() + h.size() - 1, 0.0);
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < h.size(); ++j) out[i + j] += g[i] * h[j];
  return out;
}

Profile symmetric_profile(std::span<const double> a) {
  Profile prof{1.0};
  for (double aj : a) {
    const double factor[2] = {1.0, aj};
    prof = convolve(prof, factor);
  }
  return prof;
}

CumulativePair cumulative_pair(std::span<const double> a) {
  const std::size_t d = a.size();
  CumulativePair cc;
  cc.seq.reserve(d + 1);
  cc.rev.reserve(d + 1);
  cc.seq.push_back({1.0});
  cc.rev.push_back({1.0});
  for (std::size_t j = 0; j < d; ++j) {
    const double fwd[2] = {1.0, a[j]};
    cc.seq.push_back(convolve(cc.seq.back(), fwd));
    const double bwd[2] = {1.0, a[d - 1 - j]};
    cc.rev.push_back(convolve(cc.rev.back(), bwd));
  }
  return cc;
}

namespace {

void check_symmetric(const FourierTable& t, std::span<const double> a, const char* who) {
  if (t.kind != TableKind::Symmetric)
    throw std::invalid_argument(std::string(who) + ": table is not symmetric");
  if (static_cast<int>(a.size()) != t.arity)
    throw std::invalid_argument(std::string(who) + ": arity mismatch");
}

}  // namespace

double evaluate_edge(const FourierTable& t, std::span<const double> a) {
  check_symmetric(t, a, "evaluate_edge");
  const Profile prof = symmetric_profile(a);
  double sum = 0.0;
  for (int k = 0; k <= t.arity; ++k) sum += t.coeffs[k] * prof[k];
  return sum;
}

std::vector<double> edge_gradient(const FourierTable& t, std::span<const double> a) {
  check_symmetric(t, a, "edge_gradient");
  const int d = t.arity;
  const CumulativePair cc = cumulative_pair(a);
  std::vector<double> grad(d, 0.0);
  for (int j = 1; j <= d; ++j) {
    const Profile loo = convolve(cc.seq[j - 1], cc.rev[d - j]);
    double sum = 0.0;
    for (int k = 0; k <= d - 1; ++k) sum += t.coeffs[k + 1] * loo[k];
    grad[j - 1] = sum;
  }
  return grad;
}

}  // namespace hoising
