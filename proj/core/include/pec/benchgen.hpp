#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pec/circuit.hpp"

namespace pec {

struct GenConfig {
  std::uint32_t d = 5;
  /// Defaults to max(1, ⌊d/2⌋).
  std::optional<std::uint32_t> m;
  bool with_ancilla = false;
  /// Ancilla count when with_ancilla is set; defaults to max(1, ⌈d/10⌉).
  std::optional<std::uint32_t> k;
  std::uint64_t seed = 1;
  /// Shared random block; defaults to 3d gates.
  std::optional<std::size_t> part_t_gates;
  /// Per-circuit block on the unmeasured data qubits; defaults to d − m gates.
  std::optional<std::size_t> part_a_gates;

  std::uint32_t measured() const;
  std::uint32_t ancillas() const;
  /// Throws std::invalid_argument on an inconsistent configuration.
  void validate() const;
};

/// Half-open gate-index range [begin, end).
struct GateRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const noexcept { return end - begin; }
  friend bool operator==(const GateRange&, const GateRange&) = default;
};

/// Where each construction block sits inside one generated circuit.
struct PartBoundaries {
  GateRange h, t, p, a, c;
  friend bool operator==(const PartBoundaries&, const PartBoundaries&) = default;
};

struct GeneratedPair {
  Circuit c1;
  Circuit c2;
  PartBoundaries parts1;
  PartBoundaries parts2;
  /// True for pairs built from the H and T blocks only.
  bool totally_equivalent = false;
};

/// Two gate lists on `qubits` qubits that agree in every measurement
/// distribution when all qubits are data and measured.
struct SubcircuitPair {
  std::uint32_t qubits = 1;
  std::vector<Gate> x1;
  std::vector<Gate> x2;
  friend bool operator==(const SubcircuitPair&, const SubcircuitPair&) = default;
};

/// Gate alphabet of the exhaustive search: x, z, h, s, t on each qubit plus
/// both CNOT orientations on two qubits.
std::vector<Gate> search_alphabet(std::uint32_t qubits);

/// Every ordered pair (X1, X2) with X1 ≠ X2 and |X1| + |X2| ≤ max_total_gates
/// over the search alphabet with X1 ∼ X2. Each pair is confirmed with the
/// exact inner-product test. qubits must be 1 or 2.
std::vector<SubcircuitPair> find_pe_subcircuit_pairs(std::uint32_t qubits, std::size_t max_total_gates = 5);

/// Clifford+T network for CCX(a, b; c): 2 H, 6 CNOT, 7 T/T†.
std::vector<Gate> toffoli_decomposition(Qubit a, Qubit b, Qubit c);

/// Partially equivalent pair with blocks H, T, P, A (and C with ancillas).
GeneratedPair gen_pe_pair(const GenConfig& config);

/// Totally equivalent pair: blocks H and T only, no ancillas. The measured
/// count defaults to d here.
GeneratedPair gen_te_pair(const GenConfig& config);

}  // namespace pec
