#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "pec/bdd.hpp"
#include "pec/circuit.hpp"
#include "pec/dense.hpp"
#include "pec/exact.hpp"

namespace pec {

/// Row variable x_q and column variable y_q of qubit q.
///
/// x_q indexes output rows and y_q input columns; q0 is the most significant
/// bit of both indices.
struct MatrixVariableMap {
  std::uint32_t qubits = 0;

  BddVar row(Qubit q) const noexcept { return 2 * q; }
  BddVar col(Qubit q) const noexcept { return 2 * q + 1; }
  std::uint32_t variable_count() const noexcept { return 2 * qubits; }
};

enum class VariableOrder {
  Interleaved,      // x0 y0 x1 y1 ...
  RowsThenColumns,  // x0 x1 ... y0 y1 ...
};

/// Level order (variable at each level) for a matrix over `qubits` qubits.
std::vector<BddVar> matrix_variable_order(std::uint32_t qubits, VariableOrder order = VariableOrder::Interleaved);

/// Implicit 2ⁿ×2ⁿ matrix in bit-sliced algebraic form.
///
/// Entry (i, j) is (c3ω³ + c2ω² + c1ω + c0) / √2^k, where each coefficient is
/// an r-bit two's-complement integer whose bit b is the BDD
/// `channel(p)[b]` evaluated at X = binary(i), Y = binary(j). Bit r-1 is the
/// sign. All four channels always have the same width r.
class AlgebraicMatrix {
 public:
  using Slices = std::vector<Bdd>;

  /// The identity over `qubits` qubits; the manager needs 2·qubits variables.
  static AlgebraicMatrix identity(BddManager& manager, std::uint32_t qubits);
  /// Channels indexed by ω power (index 0 holds c0).
  static AlgebraicMatrix from_channels(BddManager& manager, std::uint32_t qubits, int sqrt2_exponent,
                                       std::array<Slices, 4> channels);

  std::uint32_t qubits() const noexcept { return vars_.qubits; }
  const MatrixVariableMap& variables() const noexcept { return vars_; }
  BddManager& manager() const noexcept { return *manager_; }
  int sqrt2_exponent() const noexcept { return exponent_; }
  std::size_t slice_width() const noexcept { return channels_[0].size(); }
  /// Coefficient of ω^power, least significant slice first.
  const Slices& channel(int power) const { return channels_.at(static_cast<std::size_t>(power)); }
  std::vector<Bdd> slices() const;
  std::size_t node_count() const;

  /// M ← U_g · M.
  void apply(const Gate& g);
  /// M ← U_C · M.
  void apply(const Circuit& c);
  /// M ← U_C† · M.
  void apply_inverse(const Circuit& c);
  /// M ← M · U_g†, acting on the column variables.
  void apply_adjoint_right(const Gate& g);

  /// Value-preserving rewrite with the exponent raised by one.
  void multiply_sqrt2();
  /// Value-preserving rewrite with the exponent raised by two.
  void multiply_two();

  /// F ← F ∧ keep on every slice: zeroes entries outside `keep`.
  void restrict_to(const Bdd& keep);
  /// F ← F|v=polarity on every slice.
  void cofactor(BddVar v, bool polarity);

  /// Drops redundant sign slices.
  void normalize_width();
  /// Divides by 2 (exponent − 2) while every coefficient is even.
  void reduce_common_factor();

  AlgebraicComplex entry(std::uint64_t row, std::uint64_t col) const;
  /// Explicit form; throws ResourceLimitError above `max_qubits`.
  DenseMatrix to_dense(std::uint32_t max_qubits = 10) const;

  /// True iff the represented complex matrices are equal.
  friend bool equal_matrices(const AlgebraicMatrix& a, const AlgebraicMatrix& b);

 private:
  AlgebraicMatrix(BddManager& manager, std::uint32_t qubits) : manager_(&manager), vars_{qubits} {}

  void extend(std::size_t extra);
  void rotate_omega(int power, const Bdd& guard);
  void negate_where(const Bdd& guard);
  /// Left action of g on the row index, or on the column index when
  /// `columns` is set.
  void act(const Gate& g, bool columns);
  void swap_branches(BddVar v, const Bdd& guard);
  void hadamard(BddVar v);
  BddVar index_var(Qubit q, bool columns) const { return columns ? vars_.col(q) : vars_.row(q); }
  Bdd guard(std::span<const Qubit> qubits, bool columns) const;

  BddManager* manager_ = nullptr;
  MatrixVariableMap vars_;
  int exponent_ = 0;
  std::array<Slices, 4> channels_;
};

/// Functional forms of the in-place operations.
AlgebraicMatrix apply_gate(AlgebraicMatrix m, const Gate& g);
AlgebraicMatrix apply_circuit(AlgebraicMatrix m, const Circuit& c);
AlgebraicMatrix apply_inverse_circuit(AlgebraicMatrix m, const Circuit& c);
AlgebraicMatrix multiply_sqrt2(AlgebraicMatrix m);

}  // namespace pec
