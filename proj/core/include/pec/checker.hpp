#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>

#include "pec/algebraic_matrix.hpp"
#include "pec/circuit.hpp"
#include "pec/oracle.hpp"
#include "pec/verdict.hpp"

namespace pec {

enum class CheckMode { Auto, General, ZeroAncilla, Total, Dense, MonteCarlo };

std::string_view mode_name(CheckMode mode) noexcept;
/// Accepts both "zero-ancilla" and "zero_ancilla" spellings.
std::optional<CheckMode> parse_mode(std::string_view text) noexcept;

struct CheckOptions {
  /// Wall-clock budget for the BDD paths; TimeoutError when exceeded.
  std::optional<double> timeout_seconds;
  /// Live-node budget for the BDD paths (0 = none); ResourceLimitError.
  std::size_t node_limit = 0;
  VariableOrder order = VariableOrder::Interleaved;
  std::uint32_t dense_bound = kDefaultDenseBound;
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  /// Attach a sampled witness to not-equivalent verdicts when the register
  /// is at most `witness_bound` qubits.
  bool witness = false;
  std::uint32_t witness_bound = 10;
};

/// Partial equivalence for any (d, m, k): v-vector inner products are laid
/// out in one implicit matrix per circuit and compared.
Verdict pec_general(const Circuit& c1, const Circuit& c2, const CheckOptions& options = {});

/// Partial equivalence without ancillas: the miter must be block diagonal.
Verdict pec_zero_ancilla(const Circuit& c1, const Circuit& c2, const CheckOptions& options = {});

/// The miter equals c·I for one unit scalar c. Requires k = 0.
Verdict total_equivalence(const Circuit& c1, const Circuit& c2, const CheckOptions& options = {});

/// Removes gates that act trivially because an ancilla is still |0⟩ (an
/// ancilla control, or a diagonal gate on it), then drops ancillas idle in
/// both circuits. Partial equivalence is preserved.
std::pair<Circuit, Circuit> eliminate_inert_ancillas(const Circuit& c1, const Circuit& c2);

/// Dispatches on `mode`. Auto first applies eliminate_inert_ancillas, then picks
/// the ancilla-free test when no ancilla is left and the general one otherwise.
Verdict check(const Circuit& c1, const Circuit& c2, CheckMode mode = CheckMode::Auto,
              const CheckOptions& options = {});

}  // namespace pec
