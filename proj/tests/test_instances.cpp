#include <doctest.h>

#include <sstream>

#include "hoising/instances.hpp"
#include "test_oracles.hpp"

using namespace hoising;

TEST_CASE("ple sizes match the linear encoding") {
  for (int n : {8, 16, 32, 64}) {
    const PleInstance inst = generate_ple(make_ple_spec(n, 7));
    const EncodingStats stats = encoding_stats(inst.formula);
    CHECK(stats.vars == 3 * n);
    CHECK(stats.edges == 2 * n + 1);
  }
  CHECK_THROWS_AS(generate_ple(make_ple_spec(1, 7)), std::invalid_argument);
}

TEST_CASE("planted assignments satisfy their instances") {
  for (int n : {2, 4, 8, 16}) {
    for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
      const PleInstance inst = generate_ple(make_ple_spec(n, seed));
      const HyperIsingModel m = to_model(inst.formula, WeightRule::Arity);
      CHECK(is_satisfying(m, inst.planted));

      int true_slacks = 0;
      for (int j = 0; j < 2 * n; ++j) true_slacks += (inst.planted[n + j] == -1);
      CHECK(true_slacks == n);  // exactly floor(e*m) flips
    }
  }
}

TEST_CASE("arity weighting gives the cardinality edge weight m") {
  const PleInstance inst = generate_ple(make_ple_spec(8, 3));
  const HyperIsingModel m = to_model(inst.formula, WeightRule::Arity);
  CHECK(m.edges.back().arity() == 16);
  CHECK(m.edges.back().weight == 16.0);
  double weight_sum = 0.0;
  for (const HyperEdge& e : m.edges) weight_sum += e.weight;
  CHECK(ground_energy(m) == doctest::Approx(-weight_sum));

  const HyperIsingModel unit = to_model(inst.formula, WeightRule::Unit);
  CHECK(unit.edges.back().weight == 1.0);
  CHECK(ground_energy(unit) == -17.0);
}

TEST_CASE("parsing the documented examples") {
  const HybridFormula f1 = parse_formula(std::string("p hybrid 2 1\nxor 1 2 0\n"));
  CHECK(f1.n == 2);
  REQUIRE(f1.constraints.size() == 1);
  CHECK(f1.constraints[0].constraint.kind == ConstraintKind::Xor);
  CHECK(f1.constraints[0].constraint.literals ==
        std::vector<Literal>{{1, 1}, {2, 1}});
  CHECK(!f1.constraints[0].weight.has_value());

  const HybridFormula f2 = parse_formula(std::string("p hybrid 4 1\ncard 2 1 2 3 4 0\n"));
  CHECK(f2.constraints[0].constraint.kind == ConstraintKind::CardGe);
  CHECK(f2.constraints[0].constraint.threshold == 2);

  const HybridFormula f3 =
      parse_formula(std::string("c note\np hybrid 3 2\nw 2.5 cnf 1 -3 0\nxor -1 2 3 0\n"));
  CHECK(f3.comments == std::vector<std::string>{"c note"});
  CHECK(f3.constraints[0].weight == 2.5);
  CHECK(f3.constraints[1].constraint.literals ==
        std::vector<Literal>{{1, -1}, {2, 1}, {3, 1}});
}

TEST_CASE("parse errors carry line numbers") {
  const auto line_of = [](const std::string& text) {
    try {
      parse_formula(text);
    } catch (const ParseError& e) {
      return e.line;
    }
    return -1;
  };
  CHECK(line_of("p cnf 2 1\nxor 1 2 0\n") == 1);            // malformed header
  CHECK(line_of("xor 1 2 0\n") == 1);                        // constraint before header
  CHECK(line_of("p hybrid 2 1\nfoo 1 2 0\n") == 2);          // unknown tag
  CHECK(line_of("p hybrid 2 1\nxor 1 3 0\n") == 2);          // literal out of range
  CHECK(line_of("p hybrid 2 1\nxor 1 2\n") == 2);            // missing terminating 0
  CHECK(line_of("p hybrid 2 1\nw -1 xor 1 2 0\n") == 2);     // non-positive weight
  CHECK(line_of("p hybrid 2 1\nw 0 xor 1 2 0\n") == 2);      // non-positive weight
  CHECK(line_of("p hybrid 2 1\nxor 1 -1 0\n") == 2);         // duplicate variable
  CHECK(line_of("p hybrid 2 1\ncard 3 1 2 0\n") == 2);       // threshold out of range
  CHECK(line_of("p hybrid 2 1\nxor 1 2 0 5\n") == 2);        // tokens after the 0
  CHECK(line_of("p hybrid 2 2\nxor 1 2 0\n") == 2);          // fewer than declared
  CHECK(line_of("p hybrid 2 1\nxor 1 2 0\ncnf 1 0\n") == 3); // more than declared
}

TEST_CASE("serialization round trips") {
  std::mt19937_64 rng(616);
  for (int trial = 0; trial < 100; ++trial) {
    const HybridFormula f = oracle::random_formula(rng);
    const std::string text = serialize_formula(f);
    const HybridFormula back = parse_formula(text);
    CHECK(back == f);
    CHECK(serialize_formula(back) == text);
  }
}

TEST_CASE("generated instances serialize byte-identically through a round trip") {
  for (std::uint64_t seed : {5u, 6u, 7u}) {
    const PleInstance inst = generate_ple(make_ple_spec(8, seed));
    const std::string text = serialize_formula(inst.formula);
    CHECK(serialize_formula(parse_formula(text)) == text);
  }
}

TEST_CASE("encoding stats on an empty formula") {
  HybridFormula f;
  f.n = 5;
  const EncodingStats stats = encoding_stats(f);
  CHECK(stats.vars == 5);
  CHECK(stats.edges == 0);
  CHECK(stats.fourier_terms == 0);
}

TEST_CASE("stats count stored fourier terms") {
  HybridFormula f;
  f.n = 4;
  f.constraints.push_back({make_xor({{1, 1}, {2, 1}}), std::nullopt});
  f.constraints.push_back({make_card_ge(2, {{1, 1}, {2, 1}, {3, 1}, {4, 1}}), std::nullopt});
  const EncodingStats stats = encoding_stats(f);
  CHECK(stats.fourier_terms == 3 + 5);
  CHECK(stats.arity_histogram.at(2) == 1);
  CHECK(stats.arity_histogram.at(4) == 1);
}
