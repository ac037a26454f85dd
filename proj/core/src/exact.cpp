#include "pec/exact.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace pec {

ZOmega ZOmega::omega_power(int p) {
  p %= 8;
  if (p < 0) p += 8;
  ZOmega z;
  if (p < 4) {
    z.c[p] = 1;
  } else {
    z.c[p - 4] = -1;
  }
  return z;
}

ZOmega ZOmega::sqrt2() { return ZOmega(-1, 0, 1, 0); }

bool ZOmega::all_even() const {
  for (const auto& x : c) {
    if (bit_test(x, 0)) return false;
  }
  return true;
}

ZOmega ZOmega::conj() const { return ZOmega(-c[1], -c[2], -c[3], c[0]); }

ZOmega ZOmega::times_omega(int p) const {
  p %= 8;
  if (p < 0) p += 8;
  ZOmega r = *this;
  for (int i = 0; i < p; ++i) {
    // ω·(c3ω³+c2ω²+c1ω+c0) = c2ω³+c1ω²+c0ω−c3
    r = ZOmega(r.c[2], r.c[1], r.c[0], -r.c[3]);
  }
  return r;
}

ZOmega ZOmega::times_sqrt2() const {
  return ZOmega(c[2] - c[0], c[3] + c[1], c[2] + c[0], c[1] - c[3]);
}

ZOmega ZOmega::half() const {
  ZOmega r;
  for (int i = 0; i < 4; ++i) {
    if (bit_test(c[i], 0)) throw std::logic_error("ZOmega::half on odd coefficient");
    r.c[i] = c[i] / 2;
  }
  return r;
}

ZOmega ZOmega::operator-() const {
  ZOmega r;
  for (int i = 0; i < 4; ++i) r.c[i] = -c[i];
  return r;
}

ZOmega& ZOmega::operator+=(const ZOmega& o) {
  for (int i = 0; i < 4; ++i) c[i] += o.c[i];
  return *this;
}

ZOmega& ZOmega::operator-=(const ZOmega& o) {
  for (int i = 0; i < 4; ++i) c[i] -= o.c[i];
  return *this;
}

ZOmega operator*(const ZOmega& a, const ZOmega& b) {
  ZOmega r;
  for (int i = 0; i < 4; ++i) {
    if (a.c[i] == 0) continue;
    for (int j = 0; j < 4; ++j) {
      if (b.c[j] == 0) continue;
      const int k = i + j;
      if (k < 4) {
        r.c[k] += a.c[i] * b.c[j];
      } else {
        r.c[k - 4] -= a.c[i] * b.c[j];  // ω⁴ = −1
      }
    }
  }
  return r;
}

std::complex<double> ZOmega::to_complex() const {
  std::complex<double> sum{0.0, 0.0};
  for (int p = 0; p < 4; ++p) {
    const double angle = p * std::numbers::pi / 4.0;
    sum += c[p].convert_to<double>() * std::complex<double>(std::cos(angle), std::sin(angle));
  }
  return sum;
}

std::ostream& operator<<(std::ostream& os, const ZOmega& z) {
  return os << "(" << z.c[3] << "," << z.c[2] << "," << z.c[1] << "," << z.c[0] << ")";
}

ZOmega rescale(const ZOmega& z, int from, int to) {
  if (to < from) throw std::invalid_argument("rescale: target exponent below source");
  ZOmega r = z;
  int diff = to - from;
  if (diff & 1) r = r.times_sqrt2();
  diff >>= 1;
  if (diff > 0) {
    const BigInt scale = BigInt(1) << diff;
    for (auto& x : r.c) x *= scale;
  }
  return r;
}

// ---------------------------------------------------------------------------

AlgebraicComplex::AlgebraicComplex(ZOmega numerator, int sqrt2_exponent)
    : numerator_(std::move(numerator)), exponent_(sqrt2_exponent) {
  if (exponent_ < 0) {
    numerator_ = rescale(numerator_, exponent_, 0);
    exponent_ = 0;
  }
  reduce();
}

void AlgebraicComplex::reduce() {
  if (numerator_.is_zero()) {
    exponent_ = 0;
    return;
  }
  while (exponent_ > 0) {
    // z/√2 = z·√2/2 stays in ℤ[ω] iff z·√2 is even.
    ZOmega lifted = numerator_.times_sqrt2();
    if (!lifted.all_even()) break;
    numerator_ = lifted.half();
    --exponent_;
  }
}

ZOmega AlgebraicComplex::numerator_at(int exponent) const { return rescale(numerator_, exponent_, exponent); }

AlgebraicComplex operator+(const AlgebraicComplex& a, const AlgebraicComplex& b) {
  const int e = std::max(a.exponent_, b.exponent_);
  return AlgebraicComplex(a.numerator_at(e) + b.numerator_at(e), e);
}

AlgebraicComplex operator-(const AlgebraicComplex& a, const AlgebraicComplex& b) {
  const int e = std::max(a.exponent_, b.exponent_);
  return AlgebraicComplex(a.numerator_at(e) - b.numerator_at(e), e);
}

AlgebraicComplex operator*(const AlgebraicComplex& a, const AlgebraicComplex& b) {
  return AlgebraicComplex(a.numerator_ * b.numerator_, a.exponent_ + b.exponent_);
}

std::complex<double> AlgebraicComplex::to_complex() const {
  return numerator_.to_complex() / std::pow(std::numbers::sqrt2, exponent_);
}

std::string AlgebraicComplex::to_string() const {
  std::ostringstream s;
  s << *this;
  return s.str();
}

std::ostream& operator<<(std::ostream& os, const AlgebraicComplex& z) {
  return os << z.numerator() << "/sqrt2^" << z.sqrt2_exponent();
}

}  // namespace pec
