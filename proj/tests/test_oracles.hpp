// Test-only reference implementations, kept independent of the library paths
// they are used to check.
#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "hoising/constraints.hpp"
#include "hoising/convolution.hpp"
#include "hoising/instances.hpp"
#include "hoising/model.hpp"

namespace oracle {

// Truth semantics re-implemented from scratch (-1 true, +1 false).
inline int truth(const hoising::Constraint& c, std::span<const int> x) {
  int trues = 0;
  for (int i = 0; i < c.arity(); ++i) {
    const int eff = c.literals[i].sign * x[i];
    trues += (eff == -1);
  }
  switch (c.kind) {
    case hoising::ConstraintKind::Xor: return trues % 2 == 1 ? -1 : 1;
    case hoising::ConstraintKind::CardGe: return trues >= c.threshold ? -1 : 1;
    case hoising::ConstraintKind::Clause: return trues >= 1 ? -1 : 1;
    case hoising::ConstraintKind::TruthTable: {
      std::size_t idx = 0;
      for (int i = 0; i < c.arity(); ++i)
        if (c.literals[i].sign * x[i] == -1) idx |= std::size_t{1} << i;
      return c.table[idx];
    }
  }
  return 1;
}

// Exact Fourier coefficient of the sign-folded function by full enumeration
// with integer accumulation (exact dyadic for arity <= 16).
inline double folded_fourier(const hoising::Constraint& c, std::uint32_t subset_mask) {
  const int d = c.arity();
  long long sum = 0;
  std::vector<int> x(d);
  hoising::Constraint positive = c;
  for (auto& l : positive.literals) l.sign = 1;
  for (std::uint32_t m = 0; m < (1u << d); ++m) {
    for (int i = 0; i < d; ++i) x[i] = (m >> i) & 1 ? -1 : 1;
    const int chi = std::popcount(m & subset_mask) % 2 == 1 ? -1 : 1;
    sum += truth(positive, x) * chi;
  }
  return std::ldexp(static_cast<double>(sum), -d);
}

// Multilinear evaluation from a full coefficient map.
inline double multilinear(const std::map<std::uint32_t, double>& coeffs,
                          std::span<const double> a) {
  double total = 0.0;
  for (const auto& [mask, c] : coeffs) {
    double prod = c;
    for (std::uint32_t bits = mask; bits != 0; bits &= bits - 1)
      prod *= a[std::countr_zero(bits)];
    total += prod;
  }
  return total;
}

// Central finite differences of an arbitrary objective.
inline std::vector<double> central_diff(const std::function<double(std::span<const double>)>& f,
                                        std::vector<double> a, double h = 1e-5) {
  std::vector<double> g(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double saved = a[i];
    a[i] = saved + h;
    const double hi = f(a);
    a[i] = saved - h;
    const double lo = f(a);
    a[i] = saved;
    g[i] = (hi - lo) / (2.0 * h);
  }
  return g;
}

// Per-coordinate gradient recomputed from scratch: prefix profile by
// ascending folds, suffix profile by descending folds, one merge, same
// summation order as the cumulative-convolution route.
inline std::vector<double> direct_symmetric_gradient(const hoising::FourierTable& t,
                                                     std::span<const double> a) {
  const int d = t.arity;
  std::vector<double> grad(d);
  for (int j = 1; j <= d; ++j) {
    hoising::Profile prefix{1.0};
    for (int i = 0; i < j - 1; ++i) {
      const double factor[2] = {1.0, a[i]};
      prefix = hoising::convolve(prefix, factor);
    }
    hoising::Profile suffix{1.0};
    for (int i = 0; i < d - j; ++i) {
      const double factor[2] = {1.0, a[d - 1 - i]};
      suffix = hoising::convolve(suffix, factor);
    }
    const std::vector<double> loo = hoising::convolve(prefix, suffix);
    double sum = 0.0;
    for (int k = 0; k <= d - 1; ++k) sum += t.coeffs[k + 1] * loo[k];
    grad[j - 1] = sum;
  }
  return grad;
}

// Random symmetric-kind constraint with random literal signs over variables
// 1..arity.
inline hoising::Constraint random_constraint(std::mt19937_64& rng, int max_arity) {
  std::uniform_int_distribution<int> arity_dist(1, max_arity);
  std::uniform_int_distribution<int> kind_dist(0, 2);
  std::uniform_int_distribution<int> coin(0, 1);
  const int d = arity_dist(rng);
  std::vector<hoising::Literal> lits;
  for (int i = 1; i <= d; ++i) lits.push_back({i, coin(rng) ? 1 : -1});
  switch (kind_dist(rng)) {
    case 0: return hoising::make_xor(std::move(lits));
    case 1: {
      std::uniform_int_distribution<int> thr(0, d);
      return hoising::make_card_ge(thr(rng), std::move(lits));
    }
    default: return hoising::make_clause(std::move(lits));
  }
}

// Random model over n variables: every edge picks a random distinct subset
// of variables, random signs, random symmetric kind, weight in {1..4}.
inline hoising::HyperIsingModel random_model(std::mt19937_64& rng, int n, int max_edges,
                                             int max_arity) {
  std::uniform_int_distribution<int> edge_count(1, max_edges);
  std::uniform_int_distribution<int> weight_dist(1, 4);
  hoising::HyperIsingModel m;
  m.n = n;
  const int edges = edge_count(rng);
  for (int e = 0; e < edges; ++e) {
    std::uniform_int_distribution<int> arity_dist(1, std::min(max_arity, n));
    const int d = arity_dist(rng);
    std::vector<int> vars(n);
    for (int i = 0; i < n; ++i) vars[i] = i + 1;
    for (int i = 0; i < d; ++i) {
      std::uniform_int_distribution<int> pick(i, n - 1);
      std::swap(vars[i], vars[pick(rng)]);
    }
    std::uniform_int_distribution<int> coin(0, 1);
    std::vector<hoising::Literal> lits;
    for (int i = 0; i < d; ++i) lits.push_back({vars[i], coin(rng) ? 1 : -1});
    hoising::Constraint c;
    std::uniform_int_distribution<int> kind_dist(0, 2);
    switch (kind_dist(rng)) {
      case 0: c = hoising::make_xor(std::move(lits)); break;
      case 1: {
        std::uniform_int_distribution<int> thr(0, d);
        c = hoising::make_card_ge(thr(rng), std::move(lits));
        break;
      }
      default: c = hoising::make_clause(std::move(lits)); break;
    }
    m.edges.push_back(hoising::make_edge(c, weight_dist(rng)));
  }
  return m;
}

// Random formula in the canonical shape the serializer emits: sorted
// distinct variables per constraint, dyadic weights.
inline hoising::HybridFormula random_formula(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nvars(2, 12);
  std::uniform_int_distribution<int> ncons(1, 8);
  std::uniform_int_distribution<int> coin(0, 1);
  hoising::HybridFormula f;
  f.n = nvars(rng);
  const int count = ncons(rng);
  for (int k = 0; k < count; ++k) {
    std::uniform_int_distribution<int> arity(1, f.n);
    const int d = arity(rng);
    std::vector<int> vars(f.n);
    for (int i = 0; i < f.n; ++i) vars[i] = i + 1;
    for (int i = 0; i < d; ++i) {
      std::uniform_int_distribution<int> pick(i, f.n - 1);
      std::swap(vars[i], vars[pick(rng)]);
    }
    vars.resize(d);
    std::sort(vars.begin(), vars.end());
    std::vector<hoising::Literal> lits;
    for (int v : vars) lits.push_back({v, coin(rng) ? 1 : -1});

    hoising::Constraint c;
    std::uniform_int_distribution<int> kind(0, 2);
    switch (kind(rng)) {
      case 0: c = hoising::make_xor(std::move(lits)); break;
      case 1: {
        std::uniform_int_distribution<int> thr(0, d);
        c = hoising::make_card_ge(thr(rng), std::move(lits));
        break;
      }
      default: c = hoising::make_clause(std::move(lits)); break;
    }
    std::optional<double> weight;
    if (coin(rng)) {
      std::uniform_int_distribution<int> w(1, 16);
      weight = w(rng) / 4.0;
    }
    f.constraints.push_back({std::move(c), weight});
  }
  return f;
}

}  // namespace oracle
