#pragma once

#include <span>
#include <vector>

#include "hoising/constraints.hpp"
#include "hoising/convolution.hpp"

namespace hoising {

/// One weighted hyperedge. `table` holds the Fourier coefficients of the
/// sign-folded constraint; evaluation folds `signs` into the incident slice
/// of the global state first. `kind`/`threshold`/`truth` retain the exact
/// Boolean semantics for integer-domain satisfaction checks.
struct HyperEdge {
  std::vector<int> vars;   // 1-based global variable indices, distinct
  std::vector<int> signs;  // +-1 per position
  ConstraintKind kind = ConstraintKind::Clause;
  int threshold = 0;
  std::vector<std::int8_t> truth;  // TruthTable kinds only
  FourierTable table;
  double weight = 1.0;

  int arity() const { return static_cast<int>(vars.size()); }
};

struct HyperIsingModel {
  int n = 0;
  std::vector<HyperEdge> edges;
};

/// Compiles a constraint into an edge (symmetric table when the kind allows,
/// general otherwise). Throws on weight <= 0 or invalid constraint.
HyperEdge make_edge(const Constraint& c, double weight);

void validate_model(const HyperIsingModel& m);

enum class Relaxation { TypeI, TypeII, TypeIII };

/// Continuous spin vector with its relaxation domain:
/// TypeI a in [-1,1]^n, TypeII a in [-sqrt(p), sqrt(p)]^n, TypeIII a in R^n.
struct SpinState {
  std::vector<double> a;
  Relaxation relaxation = Relaxation::TypeI;
  double p = 1.0;
};

/// H(x) = sum_e w_e f_e(folded slice of x). Defined for any real x.
double hamiltonian(const HyperIsingModel& m, std::span<const double> x);

/// Gradient of the multilinear H at x.
std::vector<double> hamiltonian_gradient(const HyperIsingModel& m, std::span<const double> x);

/// -sum_e w_e, the energy of any satisfying assignment.
double ground_energy(const HyperIsingModel& m);

/// Relaxed objective without a domain check (the polynomial/trigonometric
/// expression is well-defined on all of R^n; estimators probe it there).
double relaxed_value_at(const HyperIsingModel& m, Relaxation r, double p,
                        std::span<const double> a);

/// Relaxed objective; throws std::domain_error for TypeI/TypeII states
/// outside their boxes.
double relaxed_objective(const HyperIsingModel& m, const SpinState& s);

std::vector<double> relaxed_gradient_at(const HyperIsingModel& m, Relaxation r, double p,
                                        std::span<const double> a);
std::vector<double> relaxed_gradient(const HyperIsingModel& m, const SpinState& s);

/// sign(a_i) for TypeI/II, sign(sin(a_i)) for TypeIII; ties round to +1.
std::vector<int> round_to_assignment(const SpinState& s);

/// Exact +-1 value of one edge under a Boolean assignment.
int edge_truth(const HyperEdge& e, std::span<const int> assignment);

struct AssignmentEval {
  double energy = 0.0;  // sum_e w_e * edge truth
  bool satisfied = false;
};

/// Integer-domain evaluation of all edges at a +-1 assignment.
AssignmentEval evaluate_assignment(const HyperIsingModel& m, std::span<const int> x);

/// True iff every edge evaluates to -1. Also cross-checks the floating-point
/// identity H(x) == ground energy (tolerance 1e-6 * |E|) and throws
/// std::logic_error if the two routes disagree.
bool is_satisfying(const HyperIsingModel& m, std::span<const int> assignment);

/// Conservative weak-convexity diagnostics: rho1 = max over variables of
/// sum over incident edges of w_e * sum_S |f_e(S)|; rho2 = rho1 + 8 (p = 1);
/// rho3 = 2*rho1 + 4.
double weak_convexity_bound(const HyperIsingModel& m, Relaxation r);

}  // namespace hoising
