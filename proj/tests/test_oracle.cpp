#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "pec/oracle.hpp"
#include "support.hpp"

using namespace pec;

namespace {

const std::vector<std::uint64_t> kPerm1 = {0, 3, 1, 4, 2, 5, 6, 7};  // x -> 3x mod 5
const std::vector<std::uint64_t> kPerm2 = {2, 0, 3, 1, 4, 5, 6, 7};

std::vector<std::complex<double>> basis(std::uint32_t d, std::uint64_t j) {
  std::vector<std::complex<double>> psi(std::size_t{1} << d);
  psi[j] = 1.0;
  return psi;
}

}  // namespace

TEST_CASE("exact scalars") {
  const AlgebraicComplex w = AlgebraicComplex::omega_power(1);
  AlgebraicComplex p(1);
  for (int i = 0; i < 8; ++i) p = p * w;
  CHECK(p == AlgebraicComplex(1));
  CHECK(AlgebraicComplex::omega_power(4) == AlgebraicComplex(-1));
  // √2 = ω − ω³, and 1/√2 · √2 = 1.
  CHECK(ZOmega::sqrt2() == ZOmega(-1, 0, 1, 0));
  CHECK(AlgebraicComplex(ZOmega::sqrt2(), 1) == AlgebraicComplex(1));
  // Conjugation maps (c3, c2, c1, c0) to (−c1, −c2, −c3, c0).
  CHECK(ZOmega(1, 2, 3, 4).conj() == ZOmega(-3, -2, -1, 4));
  const AlgebraicComplex h(ZOmega(0, 0, 0, 1), 1);
  CHECK(h * h + h * h == AlgebraicComplex(1));
  CHECK(std::abs(h.to_complex() - std::complex<double>(1 / std::sqrt(2.0), 0)) < 1e-15);
  CHECK(AlgebraicComplex(ZOmega(0, 0, 0, 2), 2) == AlgebraicComplex(1));
}

TEST_CASE("dense_unitary basics") {
  const DenseMatrix h = dense_unitary(Circuit::all_data(1, {Gate::h(0)}));
  CHECK(h.entry(1, 1) == AlgebraicComplex(ZOmega(0, 0, 0, -1), 1));
  CHECK(h.entry(0, 1) == AlgebraicComplex(ZOmega(0, 0, 0, 1), 1));
  CHECK(dense_unitary(Circuit::all_data(3, {})).is_identity());
  const DenseMatrix cx = dense_unitary(Circuit::all_data(2, {Gate::cnot(0, 1)}));
  CHECK(cx.entry(3, 2) == AlgebraicComplex(1));
  CHECK(cx.entry(2, 3) == AlgebraicComplex(1));
  CHECK(cx.entry(1, 1) == AlgebraicComplex(1));
  CHECK_THROWS_AS(dense_unitary(Circuit::all_data(13, {})), ResourceLimitError);
}

TEST_CASE("dense unitaries are unitary") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 40; ++i) {
    const auto n = static_cast<std::uint32_t>(1 + rng() % 6);
    const DenseMatrix u = dense_unitary(Circuit::all_data(n, testing::random_gates(rng, n, 15)));
    CHECK((u.adjoint() * u).is_identity());
  }
}

TEST_CASE("frozen unitaries and outcome distributions") {
  const auto cases = testing::load_json("frozen_pairs.json")["cases"];
  REQUIRE(cases.size() >= 100);
  for (const auto& rec : cases) {
    const std::uint32_t d = rec["d"], m = rec["m"];
    const Circuit c1 = parse_circuit(rec["c1"].get<std::string>(), d, m);
    CAPTURE(rec["c1"].get<std::string>());
    const auto& frozen = rec["unitary_c1"];
    if (!frozen.empty()) {
      const auto values = dense_unitary(c1).to_complex();
      REQUIRE(values.size() == frozen.size());
      for (std::size_t i = 0; i < values.size(); ++i) {
        CHECK(std::abs(values[i] - std::complex<double>(frozen[i][0], frozen[i][1])) < 1e-9);
      }
    }
    const auto dist = outcome_distribution(dense_unitary(c1), c1.roles(), testing::fixed_psi(d));
    const auto& expected = rec["distribution_c1"];
    REQUIRE(dist.size() == expected.size());
    for (std::size_t t = 0; t < dist.size(); ++t) {
      CHECK(std::abs(dist[t] - expected[t].get<double>()) < 1e-9);
      CHECK(std::abs(outcome_probability(c1, testing::fixed_psi(d), t) - dist[t]) < 1e-12);
    }
  }
}

TEST_CASE("frozen verdicts") {
  const auto cases = testing::load_json("frozen_pairs.json")["cases"];
  for (const auto& rec : cases) {
    const std::uint32_t d = rec["d"], m = rec["m"];
    const Circuit c1 = parse_circuit(rec["c1"].get<std::string>(), d, m);
    const Circuit c2 = parse_circuit(rec["c2"].get<std::string>(), d, m);
    const bool expected = rec["equivalent"];
    CAPTURE(rec["c1"].get<std::string>());
    CAPTURE(rec["c2"].get<std::string>());
    CHECK(theorem1_check(c1, c2).equivalent == expected);
    CHECK(theorem1_check(c2, c1).equivalent == expected);
    CHECK(algorithm1_dense(c1, c2).equivalent == expected);
    if (c1.ancilla_qubits() == 0) CHECK(theorem2_check(c1, c2).equivalent == expected);
  }
}

TEST_CASE("outcome probabilities") {
  const Circuit h(1, {Gate::h(0)}, 1, 1);
  CHECK(outcome_probability(h, basis(1, 0), 0) == doctest::Approx(0.5));
  CHECK(outcome_probability(h, basis(1, 0), 1) == doctest::Approx(0.5));
  const Circuit empty(3, {}, 3, 2);
  for (std::uint64_t j = 0; j < 8; ++j) {
    for (std::uint64_t t = 0; t < 4; ++t) {
      CHECK(outcome_probability(empty, basis(3, j), t) == doctest::Approx(t == (j >> 1) ? 1.0 : 0.0));
    }
  }
  std::vector<std::complex<double>> bad = {1.0, 1.0};
  CHECK_THROWS_AS(outcome_probability(h, bad, 0), std::invalid_argument);
  // Z changes no probability.
  const Circuit z(1, {Gate::z(0)}, 1, 1);
  const Circuit none(1, {}, 1, 1);
  const auto psi = testing::fixed_psi(1);
  for (std::uint64_t t = 0; t < 2; ++t) {
    CHECK(outcome_probability(z, psi, t) == doctest::Approx(outcome_probability(none, psi, t)).epsilon(1e-12));
  }
}

TEST_CASE("v-vectors") {
  // d = m = k = 1: g = 2, data columns 0 and 2.
  const DenseMatrix u = dense_unitary(Circuit(2, {Gate::h(0), Gate::cnot(0, 1)}, 1, 1));
  const auto vs = extract_v(u, QubitRoles{1, 1, 1});
  REQUIRE(vs.size() == 4);
  const std::uint64_t rows[4][2] = {{0, 1}, {0, 1}, {2, 3}, {2, 3}};
  const std::uint64_t cols[4] = {0, 2, 0, 2};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(vs[i].t == i / 2);
    CHECK(vs[i].j == i % 2);
    REQUIRE(vs[i].entries.size() == 2);
    CHECK(vs[i].entries[0] == u.entry(rows[i][0], cols[i]));
    CHECK(vs[i].entries[1] == u.entry(rows[i][1], cols[i]));
  }
  const auto id = extract_v(DenseMatrix::identity(2), QubitRoles{2, 2, 0});
  CHECK(id.size() == 16);
  for (const auto& v : id) {
    REQUIRE(v.entries.size() == 1);
    CHECK(v.entries[0] == AlgebraicComplex(v.t == v.j ? 1 : 0));
  }
}

TEST_CASE("theorem checks on named pairs") {
  const Circuit none1(1, {}, 1, 1);
  CHECK(theorem1_check(Circuit(1, {Gate::z(0)}, 1, 1), none1).equivalent);
  CHECK_FALSE(theorem1_check(Circuit(1, {Gate::x(0)}, 1, 1), none1).equivalent);
  CHECK_FALSE(theorem1_check(Circuit(2, {Gate::swap(0, 1)}, 2, 1), Circuit(2, {}, 2, 1)).equivalent);
  CHECK(theorem2_check(Circuit(1, {Gate::t(0)}, 1, 1), none1).equivalent);
  CHECK_FALSE(theorem2_check(Circuit(1, {Gate::h(0)}, 1, 1), Circuit(1, {Gate::x(0)}, 1, 1)).equivalent);
  CHECK_THROWS_AS(theorem2_check(Circuit(2, {}, 1, 1), Circuit(2, {}, 1, 1)), CircuitError);
  // Dummy ancilla.
  CHECK(theorem1_check(Circuit(2, {Gate::z(0)}, 1, 1), Circuit(2, {}, 1, 1)).equivalent);
}

TEST_CASE("pipeline intermediate matrices") {
  // d = m = k = 1: no padding; the shifted matrix holds v_{t,q} in column 2q + t.
  const Circuit c(2, {Gate::h(0), Gate::cnot(0, 1), Gate::t(1)}, 1, 1);
  const DenseMatrix u = dense_unitary(c);
  const Algorithm1Trace tr = algorithm1_trace(c);
  CHECK(tr.extra_ancillas == 0);
  for (std::uint64_t t = 0; t < 2; ++t) {
    for (std::uint64_t q = 0; q < 2; ++q) {
      for (std::uint64_t r = 0; r < 4; ++r) {
        const bool in_block = r / 2 == t;
        CHECK(tr.shifted.entry(r, 2 * q + t) == (in_block ? u.entry(r, 2 * q) : AlgebraicComplex()));
      }
    }
  }
  const auto vs = extract_v(u, c.roles());
  auto inner = [&](std::uint64_t t, std::uint64_t p, std::uint64_t q) {
    AlgebraicComplex s;
    for (std::size_t i = 0; i < 2; ++i) s = s + vs[2 * t + p].entries[i].conj() * vs[2 * t + q].entries[i];
    return s;
  };
  for (std::uint64_t t = 0; t < 2; ++t) {
    for (std::uint64_t p = 0; p < 2; ++p) {
      for (std::uint64_t q = 0; q < 2; ++q) CHECK(tr.product.entry(2 * p, 2 * q + t) == inner(t, p, q));
    }
  }
  CHECK(algorithm1_trace(Circuit(2, {}, 2, 2)).extra_ancillas == 2);
}

TEST_CASE("permutations and period finding") {
  CHECK(permutation_unitary({0, 1, 2, 3}).is_identity());
  CHECK_THROWS_AS(permutation_unitary({0, 0, 2, 3}), std::invalid_argument);
  CHECK(orbit_period(kPerm1, 1) == 4);
  CHECK(orbit_period(kPerm2, 1) == 4);
  CHECK(orbit_period(kPerm1, 5) == 1);

  const auto frozen = testing::load_json("period_finding.json");
  const DenseMatrix u1 = period_finding_unitary(kPerm1, 3);
  const DenseMatrix u2 = period_finding_unitary(kPerm2, 3);
  CHECK((u1.adjoint() * u1).is_identity());
  const QubitRoles roles{3, 3, 3};
  CHECK(theorem1_check(u1, u2, roles).equivalent == frozen["partially_equivalent"].get<bool>());
  CHECK(dense_total_equivalence(u1, u2, roles).equivalent == frozen["totally_equivalent"].get<bool>());
  const auto d1 = outcome_distribution(u1, roles, basis(3, 0));
  const auto d2 = outcome_distribution(u2, roles, basis(3, 0));
  for (std::size_t t = 0; t < 8; ++t) {
    CHECK(d1[t] == doctest::Approx(frozen["distribution_zero_input_1"][t].get<double>()));
    CHECK(d2[t] == doctest::Approx(frozen["distribution_zero_input_2"][t].get<double>()));
  }
}

TEST_CASE("dense total equivalence") {
  const Circuit hh = Circuit::all_data(1, {Gate::h(0), Gate::h(0)});
  const Circuit none = Circuit::all_data(1, {});
  CHECK(dense_total_equivalence(hh, none).equivalent);
  CHECK_FALSE(dense_total_equivalence(Circuit::all_data(1, {Gate::z(0)}), none).equivalent);
  // XZXZ = −I: a global phase only.
  CHECK(dense_total_equivalence(Circuit::all_data(1, {Gate::x(0), Gate::z(0), Gate::x(0), Gate::z(0)}), none)
            .equivalent);
}

TEST_CASE("sampling falsifier") {
  const Circuit h(1, {Gate::h(0)}, 1, 1);
  const Circuit x(1, {Gate::x(0)}, 1, 1);
  const auto cex = monte_carlo_falsify(h, x);
  REQUIRE(cex.has_value());
  CHECK(std::abs(cex->p1 - cex->p2) > 1e-9);
  CHECK_FALSE(monte_carlo_falsify(h, h).has_value());
  MonteCarloOptions opts;
  opts.samples = 1000;
  CHECK_FALSE(monte_carlo_falsify(Circuit(1, {Gate::z(0)}, 1, 1), Circuit(1, {}, 1, 1), opts).has_value());
}

TEST_CASE("sampling never contradicts the exact test") {
  std::mt19937_64 rng(77);
  MonteCarloOptions opts;
  opts.samples = 20;
  for (int i = 0; i < 80; ++i) {
    const auto pair = testing::random_pair(rng, 4);
    const bool exact = theorem1_check(pair.c1, pair.c2).equivalent;
    const auto cex = monte_carlo_falsify(pair.c1, pair.c2, opts);
    if (exact) CHECK_FALSE(cex.has_value());
    if (cex) {
      CHECK_FALSE(exact);
      const auto [a, b] = harmonize(pair.c1, pair.c2);
      CHECK(std::abs(outcome_probability(a, cex->psi, cex->outcome) - cex->p1) < 1e-9);
      CHECK(std::abs(outcome_probability(b, cex->psi, cex->outcome) - cex->p2) < 1e-9);
    }
  }
}

TEST_CASE("theorem checks are reflexive and symmetric") {
  std::mt19937_64 rng(123);
  for (int i = 0; i < 60; ++i) {
    const auto pair = testing::random_pair(rng, 5);
    CHECK(theorem1_check(pair.c1, pair.c1).equivalent);
    CHECK(theorem1_check(pair.c1, pair.c2).equivalent == theorem1_check(pair.c2, pair.c1).equivalent);
  }
}
