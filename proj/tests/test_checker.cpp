#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "pec/checker.hpp"
#include "support.hpp"

using namespace pec;

TEST_CASE("named verdicts") {
  const Circuit none(1, {}, 1, 1);
  CHECK(pec_zero_ancilla(Circuit(1, {Gate::t(0)}, 1, 1), none).equivalent);
  CHECK_FALSE(pec_zero_ancilla(Circuit(1, {Gate::x(0)}, 1, 1), none).equivalent);
  CHECK(pec_zero_ancilla(Circuit(2, {Gate::cnot(0, 1)}, 2, 1), Circuit(2, {}, 2, 1)).equivalent);
  CHECK_THROWS_AS(pec_zero_ancilla(Circuit(2, {}, 1, 1), Circuit(2, {}, 1, 1)), CircuitError);

  const Circuit c(3, {Gate::h(0), Gate::cnot(0, 2), Gate::t(1)}, 2, 1);
  CHECK(pec_general(c, c).equivalent);
  // Dummy ancilla.
  CHECK(pec_general(Circuit(2, {Gate::z(0)}, 1, 1), Circuit(2, {}, 1, 1)).equivalent);
  CHECK_FALSE(pec_general(Circuit(2, {Gate::x(0)}, 1, 1), Circuit(2, {}, 1, 1)).equivalent);
  CHECK_THROWS_AS(pec_general(Circuit(2, {}, 1, 1), Circuit(2, {}, 2, 1)), CircuitError);
}

TEST_CASE("total equivalence") {
  const Circuit none = Circuit::all_data(1, {});
  CHECK(total_equivalence(Circuit::all_data(1, {Gate::h(0), Gate::h(0)}), none).equivalent);
  const Circuit z = Circuit::all_data(1, {Gate::z(0)});
  CHECK_FALSE(total_equivalence(z, none).equivalent);
  CHECK(pec_zero_ancilla(z, none).equivalent);
  CHECK(total_equivalence(Circuit::all_data(2, {Gate::x(0), Gate::z(0), Gate::x(0), Gate::z(0)}),
                          Circuit::all_data(2, {}))
            .equivalent);
  CHECK_FALSE(total_equivalence(Circuit::all_data(2, {Gate::t(1)}), Circuit::all_data(2, {})).equivalent);
  CHECK_THROWS_AS(total_equivalence(Circuit(2, {}, 1, 1), Circuit(2, {}, 1, 1)), CircuitError);
}

TEST_CASE("frozen verdicts through the decision diagrams") {
  const auto cases = testing::load_json("frozen_pairs.json")["cases"];
  for (const auto& rec : cases) {
    const std::uint32_t d = rec["d"], m = rec["m"];
    const Circuit c1 = parse_circuit(rec["c1"].get<std::string>(), d, m);
    const Circuit c2 = parse_circuit(rec["c2"].get<std::string>(), d, m);
    const bool expected = rec["equivalent"];
    CAPTURE(rec["c1"].get<std::string>());
    CAPTURE(rec["c2"].get<std::string>());
    CHECK(pec_general(c1, c2).equivalent == expected);
    CHECK(check(c1, c2).equivalent == expected);
    if (c1.ancilla_qubits() == 0) CHECK(pec_zero_ancilla(c1, c2).equivalent == expected);
  }
}

TEST_CASE("agreement with the dense oracle on random pairs") {
  std::mt19937_64 rng(4242);
  for (int i = 0; i < 150; ++i) {
    const auto pair = testing::random_pair(rng, 6);
    const bool expected = theorem1_check(pair.c1, pair.c2).equivalent;
    CAPTURE(to_qasm(pair.c1));
    CAPTURE(to_qasm(pair.c2));
    CHECK(pec_general(pair.c1, pair.c2).equivalent == expected);
    CHECK(check(pair.c1, pair.c2).equivalent == expected);
    if (pair.c1.ancilla_qubits() == 0) {
      CHECK(pec_zero_ancilla(pair.c1, pair.c2).equivalent == expected);
      CHECK(theorem2_check(pair.c1, pair.c2).equivalent == expected);
    }
  }
}

TEST_CASE("both variable orders give the same verdicts") {
  std::mt19937_64 rng(8);
  CheckOptions rows;
  rows.order = VariableOrder::RowsThenColumns;
  for (int i = 0; i < 40; ++i) {
    const auto pair = testing::random_pair(rng, 5);
    CHECK(pec_general(pair.c1, pair.c2, rows).equivalent == pec_general(pair.c1, pair.c2).equivalent);
  }
}

TEST_CASE("reflexive and symmetric") {
  std::mt19937_64 rng(55);
  for (int i = 0; i < 60; ++i) {
    const auto pair = testing::random_pair(rng, 6);
    CHECK(pec_general(pair.c1, pair.c1).equivalent);
    CHECK(pec_general(pair.c1, pair.c2).equivalent == pec_general(pair.c2, pair.c1).equivalent);
    if (pair.c1.ancilla_qubits() == 0) {
      CHECK(pec_zero_ancilla(pair.c2, pair.c2).equivalent);
      CHECK(pec_zero_ancilla(pair.c1, pair.c2).equivalent == pec_zero_ancilla(pair.c2, pair.c1).equivalent);
      // The general algorithm pads its own ancillas and must agree.
      CHECK(pec_general(pair.c1, pair.c2).equivalent == pec_zero_ancilla(pair.c1, pair.c2).equivalent);
    }
  }
}

TEST_CASE("trailing gates on unmeasured qubits change nothing") {
  std::mt19937_64 rng(606);
  int tried = 0;
  while (tried < 50) {
    const auto pair = testing::random_pair(rng, 6);
    const std::uint32_t n = pair.c1.qubits(), m = pair.c1.measured_qubits();
    if (m == n) continue;
    ++tried;
    std::vector<Gate> gates = pair.c1.gates();
    for (const Gate& g : testing::random_gates_on(rng, m, n, 1 + rng() % 4)) gates.push_back(g);
    const Circuit extended(n, gates, pair.c1.data_qubits(), m);
    CHECK(pec_general(extended, pair.c2).equivalent == pec_general(pair.c1, pair.c2).equivalent);
    CHECK(pec_general(extended, pair.c1).equivalent);
  }
}

TEST_CASE("total equivalence implies partial equivalence") {
  std::mt19937_64 rng(66);
  for (int i = 0; i < 60; ++i) {
    const auto n = static_cast<std::uint32_t>(1 + rng() % 5);
    const auto m = static_cast<std::uint32_t>(1 + rng() % n);
    std::vector<Gate> g1 = testing::random_gates(rng, n, 6);
    std::vector<Gate> g2 = g1;
    if (rng() % 2) g2.push_back(testing::random_gate(rng, n));
    const Circuit a(n, g1, n, m), b(n, g2, n, m);
    const bool total = total_equivalence(a, b).equivalent;
    CHECK(total == dense_total_equivalence(a, b).equivalent);
    if (total) CHECK(pec_zero_ancilla(a, b).equivalent);
  }
}

TEST_CASE("inert ancillas") {
  // Ancilla 2 only ever controls; ancilla 3 is touched by a Hadamard.
  const Circuit c1(4, {Gate::h(0), Gate::cnot(2, 0), Gate::t(2), Gate::cz(1, 2), Gate::h(3), Gate::cnot(3, 1)}, 2, 1);
  const Circuit c2(4, {Gate::h(0), Gate::h(3), Gate::cnot(3, 1)}, 2, 1);
  const auto [a, b] = eliminate_inert_ancillas(c1, c2);
  CHECK(a.qubits() == 3);
  CHECK(a.ancilla_qubits() == 1);
  CHECK(a.gates() == std::vector<Gate>{Gate::h(0), Gate::h(2), Gate::cnot(2, 1)});
  CHECK(b.gates() == a.gates());

  // An ancilla that was flipped first is no longer inert.
  const Circuit flipped(3, {Gate::x(2), Gate::cnot(2, 0)}, 2, 1);
  const auto [f, g] = eliminate_inert_ancillas(flipped, Circuit(3, {}, 2, 1));
  CHECK(f.gates().size() == 2);
  CHECK(f.ancilla_qubits() == 1);

  std::mt19937_64 rng(91);
  for (int i = 0; i < 150; ++i) {
    const auto pair = testing::random_pair(rng, 6);
    const auto [x, y] = eliminate_inert_ancillas(pair.c1, pair.c2);
    CHECK(theorem1_check(x, y).equivalent == theorem1_check(pair.c1, pair.c2).equivalent);
  }
}

TEST_CASE("mode selection") {
  const Circuit a(2, {Gate::h(0)}, 2, 1);
  CHECK(check(a, a).algorithm == Algorithm::ZeroAncilla);
  const Circuit b(3, {Gate::h(2), Gate::cnot(2, 0)}, 2, 1);
  CHECK(check(b, b).algorithm == Algorithm::General);
  const Circuit inert(3, {Gate::h(0), Gate::cnot(2, 0)}, 2, 1);
  const Verdict v = check(inert, Circuit(3, {Gate::h(0)}, 2, 1));
  CHECK(v.equivalent);
  CHECK(v.algorithm == Algorithm::ZeroAncilla);
  CHECK_FALSE(v.detail.empty());
  CHECK(check(a, a, CheckMode::General).algorithm == Algorithm::General);
  CHECK(check(a, a, CheckMode::Dense).algorithm == Algorithm::Dense);
  CHECK(check(a, a, CheckMode::Total).algorithm == Algorithm::Total);
  CHECK_THROWS_AS(check(Circuit::all_data(14, {}), Circuit::all_data(14, {}), CheckMode::Dense), ResourceLimitError);

  const Verdict mc = check(a, a, CheckMode::MonteCarlo);
  CHECK(mc.algorithm == Algorithm::MonteCarlo);
  CHECK(mc.equivalent);
  CHECK_FALSE(mc.conclusive);
  const Verdict mc2 = check(Circuit(1, {Gate::x(0)}, 1, 1), Circuit(1, {}, 1, 1), CheckMode::MonteCarlo);
  CHECK_FALSE(mc2.equivalent);
  CHECK(mc2.conclusive);
  CHECK(mc2.counterexample.has_value());
}

TEST_CASE("witness on request") {
  CheckOptions opts;
  opts.witness = true;
  const Verdict v = check(Circuit(2, {Gate::swap(0, 1)}, 2, 1), Circuit(2, {}, 2, 1), CheckMode::Auto, opts);
  CHECK_FALSE(v.equivalent);
  REQUIRE(v.counterexample.has_value());
  CHECK(std::abs(v.counterexample->p1 - v.counterexample->p2) > 1e-9);
}

TEST_CASE("mode names") {
  CHECK(parse_mode("zero_ancilla") == CheckMode::ZeroAncilla);
  CHECK(parse_mode("zero-ancilla") == CheckMode::ZeroAncilla);
  CHECK(parse_mode("monte-carlo") == CheckMode::MonteCarlo);
  CHECK_FALSE(parse_mode("fast").has_value());
  for (const CheckMode m : {CheckMode::Auto, CheckMode::General, CheckMode::ZeroAncilla, CheckMode::Total,
                            CheckMode::Dense, CheckMode::MonteCarlo}) {
    CHECK(parse_mode(mode_name(m)) == m);
  }
}

TEST_CASE("resource bounds") {
  std::mt19937_64 rng(1);
  const Circuit big = Circuit::all_data(12, testing::random_gates(rng, 12, 200));
  CheckOptions tiny;
  tiny.node_limit = 1000;
  CHECK_THROWS_AS(pec_zero_ancilla(big, Circuit::all_data(12, {}), tiny), ResourceLimitError);
  CheckOptions instant;
  instant.timeout_seconds = 0.0;
  CHECK_THROWS_AS(pec_general(big, Circuit::all_data(12, {}), instant), TimeoutError);
}

TEST_CASE("statistics are filled in") {
  const Circuit a(3, {Gate::h(0), Gate::cnot(0, 1), Gate::t(2)}, 3, 2);
  const Verdict v = pec_zero_ancilla(a, a);
  CHECK(v.stats.peak_nodes > 0);
  CHECK(v.stats.max_slice_width >= 1);
  CHECK(v.stats.seconds >= 0.0);
}
