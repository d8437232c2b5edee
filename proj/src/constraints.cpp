#include "hoising/constraints.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hoising {

namespace {

// Largest arity for which the counting sums stay exact in int64:
// |partial sum| <= 2^d and every C(k,j)*C(d-k,u) < 2^63.
constexpr int kMaxInt64Arity = 62;

bool satisfied_by_count(const Constraint& c, int trues) {
  switch (c.kind) {
    case ConstraintKind::Xor: return (trues & 1) != 0;
    case ConstraintKind::CardGe: return trues >= c.threshold;
    case ConstraintKind::Clause: return trues >= 1;
    case ConstraintKind::TruthTable: break;
  }
  throw std::logic_error("satisfied_by_count: not a counting kind");
}

std::vector<std::vector<long long>> pascal_rows(int n) {
  std::vector<std::vector<long long>> rows(n + 1);
  for (int i = 0; i <= n; ++i) {
    rows[i].assign(i + 1, 1);
    for (int j = 1; j < i; ++j) rows[i][j] = rows[i - 1][j - 1] + rows[i - 1][j];
  }
  return rows;
}

void check_point(const Constraint& c, std::span<const int> x) {
  if (static_cast<int>(x.size()) != c.arity())
    throw std::invalid_argument("evaluate_truth: point arity mismatch");
  for (int v : x)
    if (v != -1 && v != 1) throw std::invalid_argument("evaluate_truth: entries must be +-1");
}

}  // namespace

void validate_constraint(const Constraint& c) {
  const int d = c.arity();
  if (d == 0) throw std::invalid_argument("constraint needs at least one literal");
  for (const Literal& l : c.literals) {
    if (l.var < 1) throw std::invalid_argument("literal variable index must be >= 1");
    if (l.sign != 1 && l.sign != -1) throw std::invalid_argument("literal sign must be +-1");
  }
  std::vector<int> vars;
  vars.reserve(d);
  for (const Literal& l : c.literals) vars.push_back(l.var);
  std::sort(vars.begin(), vars.end());
  if (std::adjacent_find(vars.begin(), vars.end()) != vars.end())
    throw std::invalid_argument("constraint repeats a variable");
  if (c.kind == ConstraintKind::CardGe && (c.threshold < 0 || c.threshold > d))
    throw std::invalid_argument("cardinality threshold out of [0, arity]");
  if (c.kind == ConstraintKind::TruthTable) {
    if (d > kMaxGeneralArity)
      throw std::invalid_argument("truth-table arity exceeds cap of " +
                                  std::to_string(kMaxGeneralArity));
    if (c.table.size() != (std::size_t{1} << d))
      throw std::invalid_argument("truth table must have exactly 2^arity entries");
    for (std::int8_t v : c.table)
      if (v != -1 && v != 1) throw std::invalid_argument("truth table entries must be +-1");
  }
}

Constraint make_xor(std::vector<Literal> lits) {
  Constraint c{ConstraintKind::Xor, std::move(lits), 0, {}};
  validate_constraint(c);
  return c;
}

Constraint make_card_ge(int threshold, std::vector<Literal> lits) {
  Constraint c{ConstraintKind::CardGe, std::move(lits), threshold, {}};
  validate_constraint(c);
  return c;
}

Constraint make_clause(std::vector<Literal> lits) {
  Constraint c{ConstraintKind::Clause, std::move(lits), 0, {}};
  validate_constraint(c);
  return c;
}

Constraint make_truth_table(std::vector<Literal> lits, std::vector<std::int8_t> table) {
  Constraint c{ConstraintKind::TruthTable, std::move(lits), 0, std::move(table)};
  validate_constraint(c);
  return c;
}

int folded_truth(const Constraint& c, std::span<const int> y) {
  if (c.kind == ConstraintKind::TruthTable) {
    std::size_t idx = 0;
    for (int i = 0; i < c.arity(); ++i)
      if (y[i] == kSpinTrue) idx |= std::size_t{1} << i;
    return c.table[idx];
  }
  int trues = 0;
  for (int v : y) trues += (v == kSpinTrue);
  return satisfied_by_count(c, trues) ? kSpinTrue : kSpinFalse;
}

int evaluate_truth(const Constraint& c, std::span<const int> x) {
  check_point(c, x);
  std::vector<int> folded(x.size());
  for (int i = 0; i < c.arity(); ++i) folded[i] = c.literals[i].sign * x[i];
  return folded_truth(c, folded);
}

double fourier_coefficient(const Constraint& c, std::uint32_t subset_mask) {
  validate_constraint(c);
  const int d = c.arity();
  if (d > kMaxGeneralArity)
    throw std::invalid_argument("fourier_coefficient: arity exceeds enumeration cap");
  if (subset_mask >> d) throw std::invalid_argument("fourier_coefficient: subset out of range");

  long long sum = 0;
  std::vector<int> x(d);
  for (std::uint32_t m = 0; m < (std::uint32_t{1} << d); ++m) {
    for (int i = 0; i < d; ++i) x[i] = (m >> i) & 1 ? kSpinTrue : kSpinFalse;
    const int chi = std::popcount(m & subset_mask) & 1 ? -1 : 1;
    sum += evaluate_truth(c, x) * chi;
  }
  return std::ldexp(static_cast<double>(sum), -d);
}

FourierTable compile_symmetric(const Constraint& c) {
  validate_constraint(c);
  if (c.kind == ConstraintKind::TruthTable)
    throw std::invalid_argument("compile_symmetric: constraint kind is not symmetric");
  const int d = c.arity();

  // F[t]: truth value when t of the effective inputs are true.
  std::vector<int> truth_by_trues(d + 1);
  for (int t = 0; t <= d; ++t)
    truth_by_trues[t] = satisfied_by_count(c, t) ? kSpinTrue : kSpinFalse;

  // For |S| = k, group the 2^d assignments by the number of true inputs
  // inside S (j) and outside S (u); each group has C(k,j)*C(d-k,u) members
  // and character value (-1)^j. Exact integer sums, scaled by 2^-d at the end.
  FourierTable table{TableKind::Symmetric, d, std::vector<double>(d + 1), {}};
  if (d <= kMaxInt64Arity) {
    const auto binom = pascal_rows(d);
    for (int k = 0; k <= d; ++k) {
      long long sum = 0;
      for (int j = 0; j <= k; ++j) {
        const long long inside = (j & 1) ? -binom[k][j] : binom[k][j];
        for (int u = 0; u <= d - k; ++u)
          sum += inside * binom[d - k][u] * truth_by_trues[j + u];
      }
      table.coeffs[k] = std::ldexp(static_cast<double>(sum), -d);
    }
  } else {
    const mpz_class scale = mpz_class{1} << d;
    for (int k = 0; k <= d; ++k) {
      mpz_class sum = 0;
      for (int j = 0; j <= k; ++j) {
        mpz_class inside;
        mpz_bin_uiui(inside.get_mpz_t(), k, j);
        if (j & 1) inside = -inside;
        for (int u = 0; u <= d - k; ++u) {
          mpz_class outside;
          mpz_bin_uiui(outside.get_mpz_t(), d - k, u);
          sum += inside * outside * truth_by_trues[j + u];
        }
      }
      table.coeffs[k] = mpq_class{sum, scale}.get_d();
    }
  }
  return table;
}

FourierTable compile_general(const Constraint& c) {
  validate_constraint(c);
  const int d = c.arity();
  if (d > kMaxGeneralArity)
    throw std::invalid_argument("compile_general: arity exceeds enumeration cap");

  // Truth vector of the sign-folded function, indexed by true-bit mask,
  // then an in-place Walsh-Hadamard transform. Integer arithmetic throughout.
  const std::size_t size = std::size_t{1} << d;
  std::vector<long long> v(size);
  std::vector<int> y(d);
  for (std::size_t m = 0; m < size; ++m) {
    for (int i = 0; i < d; ++i) y[i] = (m >> i) & 1 ? kSpinTrue : kSpinFalse;
    v[m] = folded_truth(c, y);
  }
  for (std::size_t half = 1; half < size; half <<= 1) {
    for (std::size_t block = 0; block < size; block += half << 1) {
      for (std::size_t i = block; i < block + half; ++i) {
        const long long a = v[i], b = v[i + half];
        v[i] = a + b;
        v[i + half] = a - b;
      }
    }
  }

  FourierTable table{TableKind::General, d, {}, {}};
  for (std::size_t mask = 0; mask < size; ++mask)
    if (v[mask] != 0)
      table.subsets[static_cast<std::uint32_t>(mask)] =
          std::ldexp(static_cast<double>(v[mask]), -d);
  return table;
}

double general_value(const FourierTable& t, std::span<const double> a) {
  if (t.kind != TableKind::General)
    throw std::invalid_argument("general_value: table is not subset-indexed");
  if (static_cast<int>(a.size()) != t.arity)
    throw std::invalid_argument("general_value: arity mismatch");
  double sum = 0.0;
  for (const auto& [mask, coeff] : t.subsets) {
    double prod = coeff;
    for (std::uint32_t bits = mask; bits != 0; bits &= bits - 1)
      prod *= a[std::countr_zero(bits)];
    sum += prod;
  }
  return sum;
}

std::vector<double> general_gradient(const FourierTable& t, std::span<const double> a) {
  if (t.kind != TableKind::General)
    throw std::invalid_argument("general_gradient: table is not subset-indexed");
  if (static_cast<int>(a.size()) != t.arity)
    throw std::invalid_argument("general_gradient: arity mismatch");
  std::vector<double> grad(a.size(), 0.0);
  std::vector<int> members;
  std::vector<double> prefix, suffix;
  for (const auto& [mask, coeff] : t.subsets) {
    members.clear();
    for (std::uint32_t bits = mask; bits != 0; bits &= bits - 1)
      members.push_back(std::countr_zero(bits));
    const std::size_t m = members.size();
    if (m == 0) continue;
    prefix.assign(m + 1, 1.0);
    suffix.assign(m + 1, 1.0);
    for (std::size_t r = 0; r < m; ++r) prefix[r + 1] = prefix[r] * a[members[r]];
    for (std::size_t r = m; r-- > 0;) suffix[r] = suffix[r + 1] * a[members[r]];
    for (std::size_t r = 0; r < m; ++r)
      grad[members[r]] += coeff * prefix[r] * suffix[r + 1];
  }
  return grad;
}

double coefficient_mass(const FourierTable& t) {
  if (t.kind == TableKind::General) {
    double mass = 0.0;
    for (const auto& [mask, coeff] : t.subsets) mass += std::abs(coeff);
    return mass;
  }
  double mass = 0.0;
  double binom = 1.0;  // C(d, k), multiplicative recurrence
  for (int k = 0; k <= t.arity; ++k) {
    mass += binom * std::abs(t.coeffs[k]);
    binom = binom * (t.arity - k) / (k + 1);
  }
  return mass;
}

}  // namespace hoising
