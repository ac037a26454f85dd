#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "pec/exact.hpp"

namespace pec {

/// Explicit 2ⁿ×2ⁿ matrix over ℤ[ω, 1/√2].
///
/// All entries share one √2 exponent: entry (i, j) is raw(i, j) / √2^k.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  /// Zero matrix.
  explicit DenseMatrix(std::uint32_t qubits, int sqrt2_exponent = 0);

  static DenseMatrix identity(std::uint32_t qubits);

  std::uint32_t qubits() const noexcept { return qubits_; }
  std::size_t dim() const noexcept { return dim_; }
  int sqrt2_exponent() const noexcept { return exponent_; }

  const ZOmega& raw(std::size_t row, std::size_t col) const { return entries_[row * dim_ + col]; }
  ZOmega& raw(std::size_t row, std::size_t col) { return entries_[row * dim_ + col]; }

  AlgebraicComplex entry(std::size_t row, std::size_t col) const { return AlgebraicComplex(raw(row, col), exponent_); }
  void set_entry(std::size_t row, std::size_t col, const AlgebraicComplex& value);

  /// Rescales every numerator so the shared exponent becomes `exponent`.
  void raise_exponent(int exponent);
  /// Lowers the shared exponent as far as the numerators allow.
  void reduce();
  /// Adds `delta` to the exponent without touching numerators (divides by √2^delta).
  void scale_exponent(int delta) noexcept { exponent_ += delta; }

  DenseMatrix adjoint() const;
  DenseMatrix kron(const DenseMatrix& right) const;
  bool is_identity() const;

  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
  /// Value equality (exponents are aligned first).
  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b);

  std::vector<std::complex<double>> to_complex() const;
  std::string to_string() const;

 private:
  std::uint32_t qubits_ = 0;
  std::size_t dim_ = 0;
  int exponent_ = 0;
  std::vector<ZOmega> entries_;
};

}  // namespace pec
