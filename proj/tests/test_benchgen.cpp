#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "pec/benchgen.hpp"
#include "pec/checker.hpp"
#include "pec/oracle.hpp"

using namespace pec;

namespace {

bool contains(const std::vector<SubcircuitPair>& pairs, const std::vector<Gate>& x1, const std::vector<Gate>& x2) {
  return std::any_of(pairs.begin(), pairs.end(), [&](const SubcircuitPair& p) { return p.x1 == x1 && p.x2 == x2; });
}

GenConfig config(std::uint32_t d, std::uint64_t seed, bool ancilla = false) {
  GenConfig c;
  c.d = d;
  c.seed = seed;
  c.with_ancilla = ancilla;
  return c;
}

}  // namespace

TEST_CASE("search alphabet") {
  CHECK(search_alphabet(1).size() == 5);
  CHECK(search_alphabet(2).size() == 12);
  CHECK_THROWS_AS(search_alphabet(3), std::invalid_argument);
}

TEST_CASE("one-qubit pair search") {
  const auto pairs = find_pe_subcircuit_pairs(1);
  // Count confirmed by an independent brute-force enumeration.
  CHECK(pairs.size() == 5628);
  CHECK(contains(pairs, {Gate::z(0)}, {}));
  CHECK(contains(pairs, {}, {Gate::z(0)}));
  CHECK(contains(pairs, {Gate::s(0), Gate::s(0)}, {Gate::z(0)}));
  CHECK_FALSE(contains(pairs, {Gate::x(0)}, {}));
  for (const auto& p : pairs) {
    CHECK(p.x1 != p.x2);
    CHECK(p.x1.size() + p.x2.size() <= 5);
  }
  // A sample of the result re-checked exactly.
  for (std::size_t i = 0; i < pairs.size(); i += 97) {
    CHECK(theorem1_check(Circuit::all_data(1, pairs[i].x1), Circuit::all_data(1, pairs[i].x2)).equivalent);
  }
}

TEST_CASE("two-qubit pair search") {
  const auto pairs = find_pe_subcircuit_pairs(2);
  CHECK(pairs.size() == 148956);
  CHECK(contains(pairs, {Gate::cnot(0, 1), Gate::cnot(0, 1)}, {}));
  CHECK(contains(pairs, {Gate::z(1)}, {}));
  const auto small = find_pe_subcircuit_pairs(2, 2);
  for (const auto& p : small) CHECK(p.x1.size() + p.x2.size() <= 2);
}

TEST_CASE("Toffoli decomposition is exact") {
  const auto gates = toffoli_decomposition(0, 1, 2);
  CHECK(gates.size() == 15);
  CHECK(std::count_if(gates.begin(), gates.end(), [](const Gate& g) { return g.kind == GateKind::CNOT; }) == 6);
  CHECK(std::count_if(gates.begin(), gates.end(), [](const Gate& g) { return g.kind == GateKind::H; }) == 2);
  const Gate ccx = Gate::ccx(0, 1, 2);
  CHECK(dense_unitary(3, gates) == dense_unitary(3, std::span<const Gate>(&ccx, 1)));
  const Gate other = Gate::ccx(2, 0, 1);
  CHECK(dense_unitary(3, toffoli_decomposition(2, 0, 1)) == dense_unitary(3, std::span<const Gate>(&other, 1)));
}

TEST_CASE("configuration defaults") {
  CHECK(config(5, 1).measured() == 2);
  CHECK(config(1, 1).measured() == 1);
  CHECK(config(10, 1).ancillas() == 0);
  CHECK(config(10, 1, true).ancillas() == 1);
  CHECK(config(15, 1, true).ancillas() == 2);
  GenConfig bad = config(4, 1);
  bad.m = 5;
  CHECK_THROWS_AS(gen_pe_pair(bad), std::invalid_argument);
  CHECK_THROWS_AS(gen_pe_pair(config(0, 1)), std::invalid_argument);
}

TEST_CASE("block layout") {
  for (const bool ancilla : {false, true}) {
    const GenConfig cfg = config(8, 3, ancilla);
    const GeneratedPair p = gen_pe_pair(cfg);
    CHECK(p.c1.data_qubits() == 8);
    CHECK(p.c1.measured_qubits() == 4);
    CHECK(p.c1.ancilla_qubits() == (ancilla ? 1u : 0u));
    CHECK(p.parts1.h == GateRange{0, 8});
    CHECK(p.parts1.t.size() == 24);
    CHECK(p.parts1.a.size() == 4);
    CHECK(p.parts1.c.size() == (ancilla ? 1u : 0u));
    CHECK(p.parts1.c.end == p.c1.gate_count());
    CHECK(p.parts2.c.end == p.c2.gate_count());
    // Part A touches only unmeasured data qubits.
    for (std::size_t i = p.parts1.a.begin; i < p.parts1.a.end; ++i) {
      for (const Qubit q : p.c1.gates()[i].qubits) {
        CHECK(q >= 4);
        CHECK(q < 8);
      }
    }
    // Part C: ancilla controls, data targets.
    for (std::size_t i = p.parts2.c.begin; i < p.parts2.c.end; ++i) {
      const Gate& g = p.c2.gates()[i];
      CHECK(g.kind == GateKind::CNOT);
      CHECK(g.qubits[0] >= 8);
      CHECK(g.qubits[1] < 8);
    }
    // C2's part T is C1's with every CCX expanded.
    std::vector<Gate> expanded;
    for (std::size_t i = p.parts1.t.begin; i < p.parts1.t.end; ++i) {
      const Gate& g = p.c1.gates()[i];
      if (g.kind == GateKind::CCX) {
        for (const Gate& h : toffoli_decomposition(g.qubits[0], g.qubits[1], g.qubits[2])) expanded.push_back(h);
      } else {
        expanded.push_back(g);
      }
    }
    CHECK(std::vector<Gate>(p.c2.gates().begin() + p.parts2.t.begin, p.c2.gates().begin() + p.parts2.t.end) ==
          expanded);
  }
}

TEST_CASE("generation is deterministic") {
  const GeneratedPair a = gen_pe_pair(config(7, 42, true));
  const GeneratedPair b = gen_pe_pair(config(7, 42, true));
  CHECK(a.c1 == b.c1);
  CHECK(a.c2 == b.c2);
  CHECK(a.parts1 == b.parts1);
  CHECK_FALSE(gen_pe_pair(config(7, 43)).c1 == a.c1);
  GenConfig te = config(6, 9);
  CHECK(gen_te_pair(te).c2 == gen_te_pair(te).c2);
  // Pinned so that a change in the generator does not go unnoticed.
  const GeneratedPair s1 = gen_pe_pair(config(5, 1));
  CHECK(s1.c1.gate_count() == 29);
  CHECK(s1.c2.gate_count() == 102);
}

TEST_CASE("gate counts track the published table") {
  // Means over 20 seeds; published: d=5 26.05 / 78.95, d=10 51.05 / 157.00.
  struct Row {
    std::uint32_t d;
    double c1, c2;
  };
  for (const Row row : {Row{5, 26.05, 78.95}, Row{10, 51.05, 157.00}}) {
    double g1 = 0, g2 = 0;
    for (std::uint64_t s = 1; s <= 20; ++s) {
      const GeneratedPair p = gen_pe_pair(config(row.d, s));
      g1 += static_cast<double>(p.c1.gate_count()) / 20;
      g2 += static_cast<double>(p.c2.gate_count()) / 20;
    }
    CAPTURE(row.d);
    CHECK(g1 == doctest::Approx(row.c1).epsilon(0.10));
    CHECK(g2 == doctest::Approx(row.c2).epsilon(0.10));
    // Roughly 6.5 d gates in C1 within 30%.
    CHECK(g1 >= 0.7 * 6.5 * row.d);
    CHECK(g1 <= 1.3 * 6.5 * row.d);
  }
}

TEST_CASE("generated pairs are partially equivalent") {
  for (std::uint32_t d = 2; d <= 7; ++d) {
    for (std::uint64_t s = 1; s <= 4; ++s) {
      for (const bool ancilla : {false, true}) {
        const GeneratedPair p = gen_pe_pair(config(d, s, ancilla));
        CAPTURE(d);
        CAPTURE(s);
        CHECK(theorem1_check(p.c1, p.c2).equivalent);
        CHECK(check(p.c1, p.c2).equivalent);
        CHECK(pec_general(p.c1, p.c2).equivalent);
      }
    }
  }
}

TEST_CASE("totally equivalent pairs") {
  for (std::uint32_t d = 2; d <= 7; ++d) {
    const GeneratedPair p = gen_te_pair(config(d, d));
    CHECK(p.totally_equivalent);
    CHECK(p.c1.measured_qubits() == d);
    CHECK(p.parts1.p.size() == 0);
    CHECK(dense_total_equivalence(p.c1, p.c2).equivalent);
    CHECK(total_equivalence(p.c1, p.c2).equivalent);
    CHECK(pec_zero_ancilla(p.c1, p.c2).equivalent);
  }
}
