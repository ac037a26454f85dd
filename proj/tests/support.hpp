#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "pec/circuit.hpp"

namespace pec::testing {

inline std::uint64_t below(std::mt19937_64& rng, std::uint64_t bound) {
  return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(rng);
}

inline Gate random_gate(std::mt19937_64& rng, std::uint32_t n, bool with_multi = true) {
  static constexpr GateKind one[] = {GateKind::X, GateKind::Y,   GateKind::Z, GateKind::H,
                                     GateKind::S, GateKind::Sdg, GateKind::T, GateKind::Tdg};
  std::vector<GateKind> kinds(std::begin(one), std::end(one));
  if (n >= 2) kinds.insert(kinds.end(), {GateKind::CNOT, GateKind::CZ, GateKind::Swap});
  if (n >= 3 && with_multi) kinds.insert(kinds.end(), {GateKind::CCX, GateKind::MCX});
  const GateKind kind = kinds[below(rng, kinds.size())];
  std::size_t arity = 1;
  if (kind == GateKind::CNOT || kind == GateKind::CZ || kind == GateKind::Swap) arity = 2;
  if (kind == GateKind::CCX) arity = 3;
  if (kind == GateKind::MCX) arity = 2 + below(rng, n - 1);
  std::vector<Qubit> all(n);
  for (Qubit q = 0; q < n; ++q) all[q] = q;
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(arity);
  return Gate{kind, all};
}

inline std::vector<Gate> random_gates(std::mt19937_64& rng, std::uint32_t n, std::size_t count) {
  std::vector<Gate> gates;
  for (std::size_t i = 0; i < count; ++i) gates.push_back(random_gate(rng, n));
  return gates;
}

/// Gates acting only on qubits lo..n-1.
inline std::vector<Gate> random_gates_on(std::mt19937_64& rng, std::uint32_t lo, std::uint32_t n, std::size_t count) {
  std::vector<Gate> gates;
  for (Gate g : random_gates(rng, n - lo, count)) {
    for (Qubit& q : g.qubits) q += lo;
    gates.push_back(g);
  }
  return gates;
}

struct RandomPair {
  Circuit c1;
  Circuit c2;
};

/// A mix of pairs that are equivalent by construction (trailing garbage,
/// measured-qubit phases, inert ancilla controls) and unrelated or mutated
/// pairs, so both verdicts occur often.
inline RandomPair random_pair(std::mt19937_64& rng, std::uint32_t max_qubits) {
  const auto n = static_cast<std::uint32_t>(1 + below(rng, max_qubits));
  const auto d = static_cast<std::uint32_t>(below(rng, n + 1));
  const auto m = static_cast<std::uint32_t>(1 + below(rng, n));
  std::vector<Gate> g1 = random_gates(rng, n, 1 + below(rng, 12));
  std::vector<Gate> g2;
  switch (below(rng, 5)) {
    case 0:
      g2 = g1;
      if (m < n) {
        for (const Gate& g : random_gates_on(rng, m, n, 1 + below(rng, 3))) g2.push_back(g);
      }
      break;
    case 1: {
      g2 = g1;
      static constexpr GateKind phases[] = {GateKind::Z, GateKind::S, GateKind::T, GateKind::Sdg};
      g2.push_back(Gate{phases[below(rng, 4)], {static_cast<Qubit>(below(rng, m))}});
      break;
    }
    case 2:
      g2 = g1;
      g2[below(rng, g2.size())] = random_gate(rng, n);
      break;
    case 3:
      g2 = g1;
      if (d < n && d > 0) g2.insert(g2.begin(), Gate::cnot(d + below(rng, n - d), below(rng, d)));
      break;
    default: g2 = random_gates(rng, n, 1 + below(rng, 12)); break;
  }
  return {Circuit(n, std::move(g1), d, m), Circuit(n, std::move(g2), d, m)};
}

inline nlohmann::json load_json(const std::string& name) {
  std::ifstream f(std::string(PEC_TEST_DATA_DIR) + "/" + name);
  return nlohmann::json::parse(f);
}

inline std::vector<std::complex<double>> fixed_psi(std::uint32_t d) {
  std::vector<std::complex<double>> psi(std::size_t{1} << d);
  double norm = 0;
  for (std::size_t j = 0; j < psi.size(); ++j) {
    psi[j] = {static_cast<double>(j + 1), static_cast<double>(j % 3)};
    norm += std::norm(psi[j]);
  }
  for (auto& z : psi) z /= std::sqrt(norm);
  return psi;
}

}  // namespace pec::testing
