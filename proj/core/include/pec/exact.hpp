#pragma once

#include <array>
#include <complex>
#include <iosfwd>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace pec {

using BigInt = boost::multiprecision::cpp_int;

/// Element c[0] + c[1]ω + c[2]ω² + c[3]ω³ of ℤ[ω], with ω = e^{iπ/4}.
struct ZOmega {
  std::array<BigInt, 4> c{};

  ZOmega() = default;
  explicit ZOmega(BigInt value) { c[0] = std::move(value); }
  /// Channels given from the highest power down, matching c3ω³+c2ω²+c1ω+c0.
  ZOmega(BigInt c3, BigInt c2, BigInt c1, BigInt c0) : c{std::move(c0), std::move(c1), std::move(c2), std::move(c3)} {}

  /// ω^p for any integer p.
  static ZOmega omega_power(int p);
  static ZOmega sqrt2();

  bool is_zero() const noexcept { return c[0] == 0 && c[1] == 0 && c[2] == 0 && c[3] == 0; }
  bool all_even() const;

  ZOmega conj() const;
  ZOmega times_omega(int p) const;
  ZOmega times_sqrt2() const;
  /// Exact halving; requires all_even().
  ZOmega half() const;

  ZOmega operator-() const;
  ZOmega& operator+=(const ZOmega& o);
  ZOmega& operator-=(const ZOmega& o);
  friend ZOmega operator+(ZOmega a, const ZOmega& b) { return a += b; }
  friend ZOmega operator-(ZOmega a, const ZOmega& b) { return a -= b; }
  friend ZOmega operator*(const ZOmega& a, const ZOmega& b);
  friend bool operator==(const ZOmega& a, const ZOmega& b) = default;

  std::complex<double> to_complex() const;
};

std::ostream& operator<<(std::ostream& os, const ZOmega& z);

/// Exact scalar (c3ω³+c2ω²+c1ω+c0) / √2^k with k ≥ 0.
///
/// Stored in lowest terms: the exponent is the smallest one for which the
/// numerator stays in ℤ[ω]. Structural equality is therefore value equality.
class AlgebraicComplex {
 public:
  AlgebraicComplex() = default;
  AlgebraicComplex(ZOmega numerator, int sqrt2_exponent);
  explicit AlgebraicComplex(long long value) : AlgebraicComplex(ZOmega(BigInt(value)), 0) {}

  static AlgebraicComplex omega_power(int p) { return AlgebraicComplex(ZOmega::omega_power(p), 0); }

  const ZOmega& numerator() const noexcept { return numerator_; }
  int sqrt2_exponent() const noexcept { return exponent_; }
  bool is_zero() const noexcept { return numerator_.is_zero(); }

  /// Numerator rescaled to a larger exponent (value unchanged).
  ZOmega numerator_at(int exponent) const;

  AlgebraicComplex conj() const { return AlgebraicComplex(numerator_.conj(), exponent_); }
  AlgebraicComplex operator-() const { return AlgebraicComplex(-numerator_, exponent_); }
  friend AlgebraicComplex operator+(const AlgebraicComplex& a, const AlgebraicComplex& b);
  friend AlgebraicComplex operator-(const AlgebraicComplex& a, const AlgebraicComplex& b);
  friend AlgebraicComplex operator*(const AlgebraicComplex& a, const AlgebraicComplex& b);
  friend bool operator==(const AlgebraicComplex& a, const AlgebraicComplex& b) = default;

  std::complex<double> to_complex() const;
  std::string to_string() const;

 private:
  void reduce();

  ZOmega numerator_;
  int exponent_ = 0;
};

std::ostream& operator<<(std::ostream& os, const AlgebraicComplex& z);

/// Scale `z` (given at exponent `from`) to exponent `to >= from`.
ZOmega rescale(const ZOmega& z, int from, int to);

}  // namespace pec
