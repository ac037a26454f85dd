#include "pec/dense.hpp"

#include <sstream>
#include <stdexcept>

namespace pec {

DenseMatrix::DenseMatrix(std::uint32_t qubits, int sqrt2_exponent)
    : qubits_(qubits), dim_(std::size_t{1} << qubits), exponent_(sqrt2_exponent), entries_(dim_ * dim_) {
  if (qubits > 14) throw std::length_error("dense matrix too large");
}

DenseMatrix DenseMatrix::identity(std::uint32_t qubits) {
  DenseMatrix m(qubits);
  for (std::size_t i = 0; i < m.dim_; ++i) m.raw(i, i) = ZOmega(BigInt(1));
  return m;
}

void DenseMatrix::set_entry(std::size_t row, std::size_t col, const AlgebraicComplex& value) {
  if (value.sqrt2_exponent() > exponent_) raise_exponent(value.sqrt2_exponent());
  raw(row, col) = value.numerator_at(exponent_);
}

void DenseMatrix::raise_exponent(int exponent) {
  if (exponent < exponent_) throw std::invalid_argument("raise_exponent cannot lower the exponent");
  if (exponent == exponent_) return;
  for (ZOmega& z : entries_) z = rescale(z, exponent_, exponent);
  exponent_ = exponent;
}

void DenseMatrix::reduce() {
  while (exponent_ > 0) {
    std::vector<ZOmega> lifted;
    lifted.reserve(entries_.size());
    for (const ZOmega& z : entries_) {
      lifted.push_back(z.times_sqrt2());
      if (!lifted.back().all_even()) return;
    }
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] = lifted[i].half();
    --exponent_;
  }
}

DenseMatrix DenseMatrix::adjoint() const {
  DenseMatrix r(qubits_, exponent_);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) r.raw(j, i) = raw(i, j).conj();
  }
  return r;
}

DenseMatrix DenseMatrix::kron(const DenseMatrix& right) const {
  DenseMatrix r(qubits_ + right.qubits_, exponent_ + right.exponent_);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      const ZOmega& a = raw(i, j);
      if (a.is_zero()) continue;
      for (std::size_t k = 0; k < right.dim_; ++k) {
        for (std::size_t l = 0; l < right.dim_; ++l) {
          const ZOmega& b = right.raw(k, l);
          if (!b.is_zero()) r.raw(i * right.dim_ + k, j * right.dim_ + l) = a * b;
        }
      }
    }
  }
  r.reduce();
  return r;
}

bool DenseMatrix::is_identity() const { return *this == identity(qubits_); }

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.dim_ != b.dim_) throw std::invalid_argument("matrix product dimension mismatch");
  DenseMatrix r(a.qubits_, a.exponent_ + b.exponent_);
  for (std::size_t i = 0; i < a.dim_; ++i) {
    for (std::size_t k = 0; k < a.dim_; ++k) {
      const ZOmega& x = a.raw(i, k);
      if (x.is_zero()) continue;
      for (std::size_t j = 0; j < a.dim_; ++j) {
        const ZOmega& y = b.raw(k, j);
        if (!y.is_zero()) r.raw(i, j) += x * y;
      }
    }
  }
  r.reduce();
  return r;
}

bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.dim_ != b.dim_) return false;
  const int e = std::max(a.exponent_, b.exponent_);
  for (std::size_t i = 0; i < a.entries_.size(); ++i) {
    if (rescale(a.entries_[i], a.exponent_, e) != rescale(b.entries_[i], b.exponent_, e)) return false;
  }
  return true;
}

std::vector<std::complex<double>> DenseMatrix::to_complex() const {
  std::vector<std::complex<double>> out;
  out.reserve(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) out.push_back(AlgebraicComplex(entries_[i], exponent_).to_complex());
  return out;
}

std::string DenseMatrix::to_string() const {
  std::ostringstream s;
  s << "1/sqrt2^" << exponent_ << " *\n";
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) s << (j ? " " : "  ") << raw(i, j);
    s << "\n";
  }
  return s.str();
}

}  // namespace pec
