#include "hoising/instances.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <sstream>

#include "hoising/rng.hpp"

namespace hoising {

PleSpec make_ple_spec(int n_parity_bits, std::uint64_t seed) {
  return PleSpec{n_parity_bits, 2 * n_parity_bits, 0.5, seed};
}

PleInstance generate_ple(const PleSpec& spec) {
  const int n = spec.n_parity_bits;
  if (n < 2) throw std::invalid_argument("generate_ple: need at least 2 parity bits");
  if (spec.m != 2 * n) throw std::invalid_argument("generate_ple: m must equal 2n");
  const int m = spec.m;
  const int flips = static_cast<int>(spec.e * m);  // n at e = 1/2

  Rng rng(spec.seed);
  std::uniform_int_distribution<int> coin(0, 1);

  // Secret parity-bit assignment.
  std::vector<int> secret(n);
  for (int& s : secret) s = coin(rng) ? kSpinTrue : kSpinFalse;

  // Per-sample parity subsets: each bit included with probability 1/2,
  // redrawn while empty.
  std::vector<std::vector<int>> subsets(m);
  for (std::vector<int>& subset : subsets) {
    do {
      subset.clear();
      for (int i = 1; i <= n; ++i)
        if (coin(rng)) subset.push_back(i);
    } while (subset.empty());
  }

  // Flip exactly `flips` sample outputs, chosen without replacement.
  std::vector<int> order(m);
  for (int j = 0; j < m; ++j) order[j] = j;
  for (int i = 0; i < flips; ++i) {
    std::uniform_int_distribution<int> pick(i, m - 1);
    std::swap(order[i], order[pick(rng)]);
  }
  std::vector<bool> flipped(m, false);
  for (int i = 0; i < flips; ++i) flipped[order[i]] = true;

  PleInstance out;
  out.formula.n = n + m;
  {
    std::ostringstream header;
    header << "c ple n=" << n << " m=" << m << " e=1/2 seed=" << spec.seed
           << " subset-density=1/2";
    out.formula.comments.push_back(header.str());
  }

  out.planted = secret;
  out.planted.resize(n + m, kSpinFalse);

  for (int j = 0; j < m; ++j) {
    int parity = 1;
    for (int i : subsets[j]) parity *= secret[i - 1];
    const int target = flipped[j] ? -parity : parity;  // published sample output
    out.planted[n + j] = flipped[j] ? kSpinTrue : kSpinFalse;

    // XOR over the parity bits and the slack; the slack literal is negated
    // exactly when the published output is false, making the slack true iff
    // the sample equation is violated.
    std::vector<Literal> lits;
    lits.reserve(subsets[j].size() + 1);
    for (int i : subsets[j]) lits.push_back({i, 1});
    lits.push_back({n + 1 + j, -target});
    out.formula.constraints.push_back({make_xor(std::move(lits)), std::nullopt});
  }

  // At most `flips` slacks true: at least m - flips of their negations true.
  std::vector<Literal> card_lits;
  card_lits.reserve(m);
  for (int j = 0; j < m; ++j) card_lits.push_back({n + 1 + j, -1});
  out.formula.constraints.push_back({make_card_ge(m - flips, std::move(card_lits)), std::nullopt});

  {
    std::ostringstream planted_line;
    planted_line << "c planted";
    for (int v : out.planted) planted_line << ' ' << v;
    out.formula.comments.push_back(planted_line.str());
  }
  return out;
}

ParseError::ParseError(int line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line(line) {}

namespace {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

bool parse_int(const std::string& tok, int& out) {
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return res.ec == std::errc{} && res.ptr == tok.data() + tok.size();
}

bool parse_double(const std::string& tok, double& out) {
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return res.ec == std::errc{} && res.ptr == tok.data() + tok.size();
}

std::vector<std::string> tokens_of(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> toks;
  std::string t;
  while (ss >> t) toks.push_back(t);
  return toks;
}

}  // namespace

HybridFormula parse_formula(std::istream& in) {
  HybridFormula f;
  bool have_header = false;
  int declared = 0;
  int lineno = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> toks = tokens_of(line);
    if (toks.empty()) continue;

    if (toks[0] == "c") {
      if (!have_header) f.comments.push_back(line);
      continue;
    }
    if (toks[0] == "p") {
      if (have_header) throw ParseError(lineno, "duplicate header line");
      if (toks.size() != 4 || toks[1] != "hybrid")
        throw ParseError(lineno, "malformed header, expected 'p hybrid <vars> <constraints>'");
      int n = 0, count = 0;
      if (!parse_int(toks[2], n) || !parse_int(toks[3], count) || n < 0 || count < 0)
        throw ParseError(lineno, "malformed header counts");
      f.n = n;
      declared = count;
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError(lineno, "constraint before 'p hybrid' header");
    if (static_cast<int>(f.constraints.size()) == declared)
      throw ParseError(lineno, "more constraints than the header declares");

    std::size_t pos = 0;
    std::optional<double> weight;
    if (toks[pos] == "w") {
      if (toks.size() < 2) throw ParseError(lineno, "malformed weight");
      double w = 0.0;
      if (!parse_double(toks[1], w)) throw ParseError(lineno, "malformed weight");
      if (!(w > 0.0)) throw ParseError(lineno, "weight must be positive");
      weight = w;
      pos = 2;
      if (pos >= toks.size()) throw ParseError(lineno, "weight without a constraint");
    }

    const std::string tag = toks[pos++];
    ConstraintKind kind;
    int threshold = 0;
    if (tag == "xor") {
      kind = ConstraintKind::Xor;
    } else if (tag == "card") {
      kind = ConstraintKind::CardGe;
      if (pos >= toks.size() || !parse_int(toks[pos], threshold))
        throw ParseError(lineno, "malformed cardinality threshold");
      ++pos;
    } else if (tag == "cnf") {
      kind = ConstraintKind::Clause;
    } else {
      throw ParseError(lineno, "unknown constraint tag '" + tag + "'");
    }

    std::vector<Literal> lits;
    bool terminated = false;
    for (; pos < toks.size(); ++pos) {
      int lit = 0;
      if (!parse_int(toks[pos], lit)) throw ParseError(lineno, "malformed literal");
      if (lit == 0) {
        terminated = true;
        if (pos + 1 != toks.size()) throw ParseError(lineno, "tokens after terminating 0");
        break;
      }
      const int var = std::abs(lit);
      if (var > f.n) throw ParseError(lineno, "literal out of range");
      lits.push_back({var, lit > 0 ? 1 : -1});
    }
    if (!terminated) throw ParseError(lineno, "missing terminating 0");
    if (lits.empty()) throw ParseError(lineno, "constraint has no literals");
    {
      std::vector<int> vars;
      vars.reserve(lits.size());
      for (const Literal& l : lits) vars.push_back(l.var);
      std::sort(vars.begin(), vars.end());
      if (std::adjacent_find(vars.begin(), vars.end()) != vars.end())
        throw ParseError(lineno, "duplicate variable in constraint");
    }
    if (kind == ConstraintKind::CardGe &&
        (threshold < 0 || threshold > static_cast<int>(lits.size())))
      throw ParseError(lineno, "cardinality threshold out of range");

    Constraint c{kind, std::move(lits), threshold, {}};
    f.constraints.push_back({std::move(c), weight});
  }
  if (!have_header) throw ParseError(lineno, "missing 'p hybrid' header");
  if (static_cast<int>(f.constraints.size()) != declared)
    throw ParseError(lineno, "fewer constraints than the header declares");
  return f;
}

HybridFormula parse_formula(const std::string& text) {
  std::istringstream in(text);
  return parse_formula(in);
}

std::string serialize_formula(const HybridFormula& f) {
  std::string out;
  for (const std::string& comment : f.comments) {
    out += comment;
    out += '\n';
  }
  out += "p hybrid " + std::to_string(f.n) + ' ' + std::to_string(f.constraints.size()) + '\n';
  for (const WeightedConstraint& wc : f.constraints) {
    if (wc.weight) out += "w " + format_double(*wc.weight) + ' ';
    const Constraint& c = wc.constraint;
    switch (c.kind) {
      case ConstraintKind::Xor: out += "xor"; break;
      case ConstraintKind::CardGe: out += "card " + std::to_string(c.threshold); break;
      case ConstraintKind::Clause: out += "cnf"; break;
      case ConstraintKind::TruthTable:
        throw std::invalid_argument("serialize_formula: truth tables have no text form");
    }
    for (const Literal& l : c.literals) out += ' ' + std::to_string(l.sign * l.var);
    out += " 0\n";
  }
  return out;
}

HyperIsingModel to_model(const HybridFormula& f, WeightRule rule) {
  HyperIsingModel m;
  m.n = f.n;
  m.edges.reserve(f.constraints.size());
  for (const WeightedConstraint& wc : f.constraints) {
    const double w = wc.weight ? *wc.weight
                               : (rule == WeightRule::Arity
                                      ? static_cast<double>(wc.constraint.arity())
                                      : 1.0);
    m.edges.push_back(make_edge(wc.constraint, w));
  }
  validate_model(m);
  return m;
}

EncodingStats encoding_stats(const HybridFormula& f) {
  EncodingStats stats;
  stats.vars = f.n;
  stats.edges = static_cast<int>(f.constraints.size());
  for (const WeightedConstraint& wc : f.constraints) {
    const int d = wc.constraint.arity();
    stats.arity_histogram[d] += 1;
    if (wc.constraint.kind == ConstraintKind::TruthTable)
      stats.fourier_terms += static_cast<long long>(compile_general(wc.constraint).subsets.size());
    else
      stats.fourier_terms += d + 1;
  }
  return stats;
}

}  // namespace hoising
