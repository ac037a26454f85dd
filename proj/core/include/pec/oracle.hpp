#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pec/bdd.hpp"
#include "pec/circuit.hpp"
#include "pec/dense.hpp"
#include "pec/exact.hpp"
#include "pec/verdict.hpp"

// Explicit-matrix ground truth. Everything here is exact except the
// probability helpers and the sampling falsifier, which work in doubles.

namespace pec {

inline constexpr std::uint32_t kDefaultDenseBound = 12;

/// U = U_g · … · U_1. Throws ResourceLimitError above `max_qubits`.
DenseMatrix dense_unitary(const Circuit& c, std::uint32_t max_qubits = kDefaultDenseBound);
DenseMatrix dense_unitary(std::uint32_t qubits, std::span<const Gate> gates,
                          std::uint32_t max_qubits = kDefaultDenseBound);

/// Column x is sent to row perm[x]. Throws std::invalid_argument unless perm
/// is a bijection on 0..2ⁿ−1.
DenseMatrix permutation_unitary(const std::vector<std::uint64_t>& perm);

/// Length of the cycle through `start`.
std::size_t orbit_period(const std::vector<std::uint64_t>& perm, std::uint64_t start);

/// Phase-estimation style circuit for a permutation oracle on w target qubits:
/// H on the `counting` qubits, target set to |1⟩, counting qubit j controls
/// perm^(2^(counting−1−j)), then the inverse Fourier transform on the counting
/// register. Counting qubits come first. Requires counting ≤ 3 so every phase
/// is a power of ω.
DenseMatrix period_finding_unitary(const std::vector<std::uint64_t>& perm, std::uint32_t counting);

/// P(t | ψ) for a unitary with the given roles. ψ has 2^d entries and must be
/// normalized within 1e−12 (std::invalid_argument otherwise).
double outcome_probability(const DenseMatrix& u, const QubitRoles& roles, std::span<const std::complex<double>> psi,
                           std::uint64_t t);
double outcome_probability(const Circuit& c, std::span<const std::complex<double>> psi, std::uint64_t t);
/// All 2^m outcome probabilities.
std::vector<double> outcome_distribution(const DenseMatrix& u, const QubitRoles& roles,
                                         std::span<const std::complex<double>> psi);

/// Column segment of U at row block t and data column j (length g = 2^(d+k−m)).
struct VVector {
  std::uint64_t t = 0;
  std::uint64_t j = 0;
  std::vector<AlgebraicComplex> entries;
};

/// All 2^m · 2^d segments, ordered by t then j.
std::vector<VVector> extract_v(const DenseMatrix& u, const QubitRoles& roles);

/// Exact pairwise inner-product test. Circuits are harmonized first.
Verdict theorem1_check(const Circuit& c1, const Circuit& c2, std::uint32_t max_qubits = kDefaultDenseBound);
Verdict theorem1_check(const DenseMatrix& u1, const DenseMatrix& u2, const QubitRoles& roles);

/// Block-diagonal test on U1·U2⁻¹. Requires k = 0 (CircuitError otherwise).
Verdict theorem2_check(const Circuit& c1, const Circuit& c2, std::uint32_t max_qubits = kDefaultDenseBound);
Verdict theorem2_check(const DenseMatrix& u1, const DenseMatrix& u2, const QubitRoles& roles);

/// Masked-and-shifted matrix pipeline on explicit matrices. Only nonzero
/// columns of the masked matrix and the surviving rows of the product are
/// materialized, so padded widths up to `max_qubits` stay cheap.
Verdict algorithm1_dense(const Circuit& c1, const Circuit& c2, std::uint32_t max_qubits = kDefaultDenseBound);

/// Intermediate matrices of the pipeline for one circuit (small sizes only).
struct Algorithm1Trace {
  std::uint32_t extra_ancillas = 0;
  /// After column masking and the per-row-block shift.
  DenseMatrix shifted;
  /// U†·shifted with only the top row of each data row part kept.
  DenseMatrix product;
};
Algorithm1Trace algorithm1_trace(const Circuit& c, std::uint32_t max_qubits = 8);

/// Output states agree up to one global phase on every valid input
/// (ancillas in |0⟩). For k = 0 this is U1·U2⁻¹ = c·I.
Verdict dense_total_equivalence(const Circuit& c1, const Circuit& c2, std::uint32_t max_qubits = kDefaultDenseBound);
Verdict dense_total_equivalence(const DenseMatrix& u1, const DenseMatrix& u2, const QubitRoles& roles);

struct MonteCarloOptions {
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  double tolerance = 1e-9;
  std::uint32_t max_qubits = kDefaultDenseBound;
};

/// Searches Haar-random data states for an outcome-distribution mismatch.
/// Finding none proves nothing: a superposition argument cannot be inferred
/// from finitely many samples.
std::optional<Counterexample> monte_carlo_falsify(const Circuit& c1, const Circuit& c2,
                                                  const MonteCarloOptions& options = {});

}  // namespace pec
