#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hoising/model.hpp"

namespace hoising {

struct WeightedConstraint {
  Constraint constraint;
  std::optional<double> weight;  // absent: apply the default rule at model build
  friend bool operator==(const WeightedConstraint&, const WeightedConstraint&) = default;
};

struct HybridFormula {
  int n = 0;
  std::vector<std::string> comments;  // verbatim header comment lines ("c ...")
  std::vector<WeightedConstraint> constraints;
  friend bool operator==(const HybridFormula&, const HybridFormula&) = default;
};

/// Parity-learning-with-error benchmark shape: m = 2n samples, fault
/// fraction e = 1/2, so exactly floor(e*m) = n sample outputs are flipped.
struct PleSpec {
  int n_parity_bits = 0;
  int m = 0;
  double e = 0.5;
  std::uint64_t seed = 0;
};

PleSpec make_ple_spec(int n_parity_bits, std::uint64_t seed);

struct PleInstance {
  HybridFormula formula;
  std::vector<int> planted;  // +-1 over all 3n variables, satisfies the formula
};

/// Variables 1..n are parity bits, n+1..n+m per-sample slack indicators.
/// Every sample emits one XOR constraint over its parity subset plus its
/// slack; one trailing cardinality constraint bounds the number of true
/// slacks by floor(e*m). Throws for n < 2.
PleInstance generate_ple(const PleSpec& spec);

struct ParseError : std::runtime_error {
  int line;
  ParseError(int line, const std::string& message);
};

HybridFormula parse_formula(std::istream& in);
HybridFormula parse_formula(const std::string& text);

/// Canonical text form: header comments verbatim, then the problem line,
/// then one constraint per line with literals exactly as stored and
/// shortest round-trip weight formatting. LF line endings.
std::string serialize_formula(const HybridFormula& f);

enum class WeightRule { Unit, Arity };

/// Compiles every constraint; absent weights become 1 (Unit) or the
/// constraint arity (Arity).
HyperIsingModel to_model(const HybridFormula& f, WeightRule rule);

struct EncodingStats {
  int vars = 0;
  int edges = 0;
  std::map<int, int> arity_histogram;
  long long fourier_terms = 0;  // stored coefficients over all compiled edges
};

EncodingStats encoding_stats(const HybridFormula& f);

}  // namespace hoising
