#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace hoising {

// Spin encoding of Boolean values: -1 is true, +1 is false.
inline constexpr int kSpinTrue = -1;
inline constexpr int kSpinFalse = +1;

// General (subset-indexed) compilation enumerates all 2^d assignments.
inline constexpr int kMaxGeneralArity = 16;

struct Literal {
  int var = 0;   // 1-based variable index
  int sign = 1;  // +1 positive occurrence, -1 negated
  friend bool operator==(const Literal&, const Literal&) = default;
};

enum class ConstraintKind { Xor, CardGe, Clause, TruthTable };

/// A hybrid Boolean constraint over +-1 inputs.
///
/// Satisfaction semantics (a constraint evaluates to -1 iff satisfied):
///   Xor        an odd number of literals is true
///   CardGe     at least `threshold` literals are true
///   Clause     at least one literal is true
///   TruthTable direct lookup; index bit i is set iff literal i is true
struct Constraint {
  ConstraintKind kind = ConstraintKind::Clause;
  std::vector<Literal> literals;
  int threshold = 0;               // CardGe only
  std::vector<std::int8_t> table;  // TruthTable only, 2^d entries of +-1

  int arity() const { return static_cast<int>(literals.size()); }
  friend bool operator==(const Constraint&, const Constraint&) = default;
};

// Validating factories. Throw std::invalid_argument on bad input.
Constraint make_xor(std::vector<Literal> lits);
Constraint make_card_ge(int threshold, std::vector<Literal> lits);
Constraint make_clause(std::vector<Literal> lits);
Constraint make_truth_table(std::vector<Literal> lits, std::vector<std::int8_t> table);

void validate_constraint(const Constraint& c);

/// Truth value of the constraint at x in {-1,+1}^d. Literal signs flip the
/// corresponding input before the semantics above apply.
int evaluate_truth(const Constraint& c, std::span<const int> x);

/// Truth value of the sign-folded constraint at effective inputs y, i.e.
/// literal signs are assumed to be already applied by the caller.
int folded_truth(const Constraint& c, std::span<const int> y);

/// Walsh-Fourier coefficient of the constraint (as a function of its raw
/// inputs, signs included) for the subset encoded by `subset_mask` (bit i set
/// iff literal position i is in S). Exact for arity <= kMaxGeneralArity.
double fourier_coefficient(const Constraint& c, std::uint32_t subset_mask);

enum class TableKind { Symmetric, General };

/// Fourier coefficients of a constraint's sign-folded function. Symmetric
/// tables store one coefficient per degree (shared by all |S| = k); general
/// tables map subset bitmasks to their nonzero coefficients.
struct FourierTable {
  TableKind kind = TableKind::Symmetric;
  int arity = 0;
  std::vector<double> coeffs;               // Symmetric: size arity+1, index = |S|
  std::map<std::uint32_t, double> subsets;  // General: nonzero entries only
  friend bool operator==(const FourierTable&, const FourierTable&) = default;
};

/// Degree-indexed table for Xor/CardGe/Clause. Exact integer counting, no
/// 2^d enumeration; arity is unrestricted.
FourierTable compile_symmetric(const Constraint& c);

/// Full subset-indexed table for any constraint with arity <= kMaxGeneralArity.
FourierTable compile_general(const Constraint& c);

/// Multilinear evaluation of a General table at a real point.
double general_value(const FourierTable& t, std::span<const double> a);

/// Partial derivatives of the General multilinear polynomial.
std::vector<double> general_gradient(const FourierTable& t, std::span<const double> a);

/// Sum of |f(S)| over all subsets (symmetric tables weight degree k by C(d,k)).
double coefficient_mass(const FourierTable& t);

}  // namespace hoising
