#include "hoising/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hoising {

HyperEdge make_edge(const Constraint& c, double weight) {
  if (!(weight > 0.0)) throw std::invalid_argument("edge weight must be positive");
  validate_constraint(c);
  HyperEdge e;
  e.vars.reserve(c.arity());
  e.signs.reserve(c.arity());
  for (const Literal& l : c.literals) {
    e.vars.push_back(l.var);
    e.signs.push_back(l.sign);
  }
  e.kind = c.kind;
  e.threshold = c.kind == ConstraintKind::Clause ? 1 : c.threshold;
  e.truth = c.table;
  e.table = c.kind == ConstraintKind::TruthTable ? compile_general(c) : compile_symmetric(c);
  e.weight = weight;
  return e;
}

void validate_model(const HyperIsingModel& m) {
  if (m.n < 0) throw std::invalid_argument("model has negative variable count");
  for (const HyperEdge& e : m.edges) {
    if (!(e.weight > 0.0)) throw std::invalid_argument("edge weight must be positive");
    for (int v : e.vars)
      if (v < 1 || v > m.n) throw std::invalid_argument("edge variable out of range");
  }
}

namespace {

void check_dimension(const HyperIsingModel& m, std::size_t size, const char* who) {
  if (static_cast<int>(size) != m.n)
    throw std::invalid_argument(std::string(who) + ": dimension mismatch");
}

// Sign-folded slice of the global vector incident to an edge.
void fold_slice(const HyperEdge& e, std::span<const double> x, std::vector<double>& out) {
  out.resize(e.arity());
  for (int i = 0; i < e.arity(); ++i) out[i] = e.signs[i] * x[e.vars[i] - 1];
}

double edge_value(const HyperEdge& e, std::span<const double> folded) {
  return e.table.kind == TableKind::Symmetric ? evaluate_edge(e.table, folded)
                                              : general_value(e.table, folded);
}

}  // namespace

double hamiltonian(const HyperIsingModel& m, std::span<const double> x) {
  check_dimension(m, x.size(), "hamiltonian");
  double sum = 0.0;
  std::vector<double> folded;
  for (const HyperEdge& e : m.edges) {
    fold_slice(e, x, folded);
    sum += e.weight * edge_value(e, folded);
  }
  return sum;
}

std::vector<double> hamiltonian_gradient(const HyperIsingModel& m, std::span<const double> x) {
  check_dimension(m, x.size(), "hamiltonian_gradient");
  std::vector<double> grad(m.n, 0.0);
  std::vector<double> folded;
  for (const HyperEdge& e : m.edges) {
    fold_slice(e, x, folded);
    const std::vector<double> local = e.table.kind == TableKind::Symmetric
                                          ? edge_gradient(e.table, folded)
                                          : general_gradient(e.table, folded);
    for (int i = 0; i < e.arity(); ++i)
      grad[e.vars[i] - 1] += e.weight * e.signs[i] * local[i];
  }
  return grad;
}

double ground_energy(const HyperIsingModel& m) {
  double sum = 0.0;
  for (const HyperEdge& e : m.edges) sum += e.weight;
  return -sum;
}

double relaxed_value_at(const HyperIsingModel& m, Relaxation r, double p,
                        std::span<const double> a) {
  check_dimension(m, a.size(), "relaxed_value_at");
  switch (r) {
    case Relaxation::TypeI:
      return hamiltonian(m, a);
    case Relaxation::TypeII: {
      double locking = 0.0;
      for (double ai : a) locking += ai * ai * ai * ai - 2.0 * p * ai * ai;
      return hamiltonian(m, a) + locking;
    }
    case Relaxation::TypeIII: {
      std::vector<double> s(a.size());
      double locking = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        s[i] = std::sin(a[i]);
        locking += std::cos(2.0 * a[i]);
      }
      return hamiltonian(m, s) + locking;
    }
  }
  throw std::logic_error("relaxed_value_at: unknown relaxation");
}

namespace {

void check_domain(const SpinState& s) {
  double bound;
  switch (s.relaxation) {
    case Relaxation::TypeI: bound = 1.0; break;
    case Relaxation::TypeII:
      if (!(s.p > 0.0)) throw std::domain_error("TypeII requires p > 0");
      bound = std::sqrt(s.p);
      break;
    case Relaxation::TypeIII: return;
    default: throw std::logic_error("unknown relaxation");
  }
  for (double ai : s.a)
    if (ai < -bound || ai > bound)
      throw std::domain_error("spin state outside its relaxation domain");
}

}  // namespace

double relaxed_objective(const HyperIsingModel& m, const SpinState& s) {
  check_domain(s);
  return relaxed_value_at(m, s.relaxation, s.p, s.a);
}

std::vector<double> relaxed_gradient_at(const HyperIsingModel& m, Relaxation r, double p,
                                        std::span<const double> a) {
  check_dimension(m, a.size(), "relaxed_gradient_at");
  switch (r) {
    case Relaxation::TypeI:
      return hamiltonian_gradient(m, a);
    case Relaxation::TypeII: {
      std::vector<double> grad = hamiltonian_gradient(m, a);
      for (std::size_t i = 0; i < a.size(); ++i)
        grad[i] += 4.0 * a[i] * a[i] * a[i] - 4.0 * p * a[i];
      return grad;
    }
    case Relaxation::TypeIII: {
      std::vector<double> s(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) s[i] = std::sin(a[i]);
      std::vector<double> grad = hamiltonian_gradient(m, s);
      for (std::size_t i = 0; i < a.size(); ++i)
        grad[i] = std::cos(a[i]) * grad[i] - 2.0 * std::sin(2.0 * a[i]);
      return grad;
    }
  }
  throw std::logic_error("relaxed_gradient_at: unknown relaxation");
}

std::vector<double> relaxed_gradient(const HyperIsingModel& m, const SpinState& s) {
  check_domain(s);
  return relaxed_gradient_at(m, s.relaxation, s.p, s.a);
}

std::vector<int> round_to_assignment(const SpinState& s) {
  std::vector<int> out(s.a.size());
  for (std::size_t i = 0; i < s.a.size(); ++i) {
    const double v = s.relaxation == Relaxation::TypeIII ? std::sin(s.a[i]) : s.a[i];
    out[i] = v < 0.0 ? -1 : 1;
  }
  return out;
}

int edge_truth(const HyperEdge& e, std::span<const int> assignment) {
  if (e.kind == ConstraintKind::TruthTable) {
    std::size_t idx = 0;
    for (int i = 0; i < e.arity(); ++i)
      if (e.signs[i] * assignment[e.vars[i] - 1] == kSpinTrue) idx |= std::size_t{1} << i;
    return e.truth[idx];
  }
  int trues = 0;
  for (int i = 0; i < e.arity(); ++i)
    trues += (e.signs[i] * assignment[e.vars[i] - 1] == kSpinTrue);
  switch (e.kind) {
    case ConstraintKind::Xor: return (trues & 1) ? kSpinTrue : kSpinFalse;
    case ConstraintKind::CardGe:
    case ConstraintKind::Clause: return trues >= e.threshold ? kSpinTrue : kSpinFalse;
    case ConstraintKind::TruthTable: break;
  }
  throw std::logic_error("edge_truth: unknown kind");
}

AssignmentEval evaluate_assignment(const HyperIsingModel& m, std::span<const int> x) {
  check_dimension(m, x.size(), "evaluate_assignment");
  for (int v : x)
    if (v != -1 && v != 1) throw std::invalid_argument("assignment entries must be +-1");
  AssignmentEval out;
  out.satisfied = true;
  for (const HyperEdge& e : m.edges) {
    const int t = edge_truth(e, x);
    out.energy += e.weight * t;
    out.satisfied = out.satisfied && t == kSpinTrue;
  }
  return out;
}

bool is_satisfying(const HyperIsingModel& m, std::span<const int> assignment) {
  const AssignmentEval exact = evaluate_assignment(m, assignment);

  // Secondary route: the compiled polynomial evaluated at the +-1 point must
  // sit at the ground energy exactly when every edge is satisfied.
  std::vector<double> x(assignment.begin(), assignment.end());
  const double h = hamiltonian(m, x);
  const double tol = 1e-6 * static_cast<double>(std::max<std::size_t>(m.edges.size(), 1));
  const bool by_energy = std::abs(h - ground_energy(m)) <= tol;
  if (by_energy != exact.satisfied)
    throw std::logic_error("is_satisfying: truth and energy routes disagree");
  return exact.satisfied;
}

double weak_convexity_bound(const HyperIsingModel& m, Relaxation r) {
  std::vector<double> per_var(m.n, 0.0);
  for (const HyperEdge& e : m.edges) {
    const double mass = e.weight * coefficient_mass(e.table);
    for (int v : e.vars) per_var[v - 1] += mass;
  }
  const double rho1 = per_var.empty() ? 0.0 : *std::max_element(per_var.begin(), per_var.end());
  switch (r) {
    case Relaxation::TypeI: return rho1;
    case Relaxation::TypeII: return rho1 + 8.0;
    case Relaxation::TypeIII: return 2.0 * rho1 + 4.0;
  }
  throw std::logic_error("weak_convexity_bound: unknown relaxation");
}

}  // namespace hoising
