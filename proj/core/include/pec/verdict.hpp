#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pec {

enum class Algorithm {
  General,          // BDD, arbitrary ancillas
  ZeroAncilla,      // BDD, block-diagonal miter test
  Total,            // BDD, miter equals a global phase times I
  Dense,            // exact inner-product test on explicit matrices
  DenseBlock,       // exact block-diagonal test on the explicit miter
  DensePipeline,    // masked-and-shifted explicit matrix pipeline
  DenseTotal,
  MonteCarlo,
};

std::string_view algorithm_name(Algorithm a) noexcept;

/// A data-register state on which the two outcome distributions differ.
struct Counterexample {
  std::vector<std::complex<double>> psi;
  std::uint64_t outcome = 0;
  double p1 = 0.0;
  double p2 = 0.0;
};

struct VerdictStats {
  std::size_t peak_nodes = 0;
  std::size_t max_slice_width = 0;
  double seconds = 0.0;
};

struct Verdict {
  bool equivalent = false;
  /// False only for sampling runs that found no violation.
  bool conclusive = true;
  Algorithm algorithm = Algorithm::General;
  VerdictStats stats;
  std::optional<Counterexample> counterexample;
  std::string detail;
};

}  // namespace pec
