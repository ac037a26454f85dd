#include "pec/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <type_traits>

#include "pec/bdd.hpp"

namespace pec {

namespace {

// ---------------------------------------------------------------------------
// Fixed-width ℤ[ω] arithmetic. Clifford+T unitaries stay unitary under every
// Galois conjugation, so a numerator at √2-exponent e has coefficients bounded
// by 2^(e/2). With at most kMaxHForFixed Hadamards per circuit, entries fit in
// 64 bits and products (exponent 2e) fit in 128 bits.

constexpr std::size_t kMaxHForFixed = 100;

template <class T>
struct Zw {
  std::array<T, 4> c{};  // c[p] multiplies ω^p
};

template <class T>
struct WideOf {
  using type = T;
};
template <>
struct WideOf<long long> {
  using type = __int128;
};
template <class T>
using Wide = typename WideOf<T>::type;

template <class T>
bool is_odd(const T& x) {
  if constexpr (std::is_same_v<T, BigInt>) {
    return bit_test(x, 0);
  } else {
    return (x & 1) != 0;
  }
}

template <class T>
bool is_zero(const Zw<T>& z) {
  return z.c[0] == 0 && z.c[1] == 0 && z.c[2] == 0 && z.c[3] == 0;
}

template <class T>
bool operator==(const Zw<T>& a, const Zw<T>& b) {
  return a.c == b.c;
}

/// z · ω^p for p in 0..7.
template <class T>
Zw<T> rotate(const Zw<T>& z, int p) {
  Zw<T> r;
  for (int q = 0; q < 4; ++q) {
    const int k = q + p;
    if ((k / 4) % 2 == 0) {
      r.c[k % 4] = z.c[q];
    } else {
      r.c[k % 4] = -z.c[q];
    }
  }
  return r;
}

template <class T>
Zw<T> times_sqrt2(const Zw<T>& z) {
  const auto& c = z.c;
  return Zw<T>{{c[1] - c[3], c[2] + c[0], c[3] + c[1], c[2] - c[0]}};
}

template <class T>
Zw<T> conj(const Zw<T>& z) {
  return Zw<T>{{z.c[0], -z.c[3], -z.c[2], -z.c[1]}};
}

/// a · b in the wide type.
template <class T>
Zw<Wide<T>> mul(const Zw<T>& a, const Zw<T>& b) {
  Zw<Wide<T>> r;
  for (int i = 0; i < 4; ++i) {
    if (a.c[i] == 0) continue;
    const Wide<T> ai = a.c[i];
    for (int j = 0; j < 4; ++j) {
      const Wide<T> t = ai * Wide<T>(b.c[j]);
      if (i + j < 4) {
        r.c[i + j] += t;
      } else {
        r.c[i + j - 4] -= t;
      }
    }
  }
  return r;
}

template <class T>
void accumulate(Zw<T>& acc, const Zw<T>& x) {
  for (int i = 0; i < 4; ++i) acc.c[i] += x.c[i];
}

template <class T>
BigInt to_big(const T& x) {
  if constexpr (std::is_same_v<T, BigInt>) {
    return x;
  } else {
    return BigInt(static_cast<long long>(x));
  }
}

template <class T>
ZOmega to_zomega(const Zw<T>& z) {
  return ZOmega(to_big(z.c[3]), to_big(z.c[2]), to_big(z.c[1]), to_big(z.c[0]));
}

template <class T>
Zw<T> from_zomega(const ZOmega& z) {
  Zw<T> r;
  for (int i = 0; i < 4; ++i) {
    if constexpr (std::is_same_v<T, BigInt>) {
      r.c[i] = z.c[i];
    } else {
      r.c[i] = static_cast<T>(z.c[i]);
    }
  }
  return r;
}

template <class T>
std::complex<double> to_complex(const Zw<T>& z, int exponent) {
  static const std::complex<double> w = std::polar(1.0, std::numbers::pi / 4);
  std::complex<double> v = 0;
  std::complex<double> wp = 1;
  for (int i = 0; i < 4; ++i) {
    v += static_cast<double>(z.c[i]) * wp;
    wp *= w;
  }
  return v * std::pow(std::numbers::sqrt2, -exponent);
}

template <class T>
std::string describe(const Zw<T>& z, int exponent) {
  return AlgebraicComplex(to_zomega(z), exponent).to_string();
}

// ---------------------------------------------------------------------------
// A subset of the columns of a circuit unitary, simulated gate by gate.
// Row-major, rows = 2ⁿ; all entries share one √2 exponent.

template <class T>
class Columns {
 public:
  Columns(std::uint32_t qubits, std::vector<std::uint64_t> column_ids)
      : n_(qubits), rows_(std::size_t{1} << qubits), ids_(std::move(column_ids)), data_(rows_ * ids_.size()) {
    for (std::size_t c = 0; c < ids_.size(); ++c) at(ids_[c], c).c[0] = 1;
  }

  std::uint32_t qubits() const { return n_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return ids_.size(); }
  std::uint64_t column_id(std::size_t c) const { return ids_[c]; }
  int exponent() const { return exponent_; }

  Zw<T>& at(std::size_t r, std::size_t c) { return data_[r * ids_.size() + c]; }
  const Zw<T>& at(std::size_t r, std::size_t c) const { return data_[r * ids_.size() + c]; }

  void apply(const Gate& g) {
    switch (g.kind) {
      case GateKind::X:
      case GateKind::CNOT:
      case GateKind::CCX:
      case GateKind::MCX: {
        std::uint64_t cm = 0;
        for (const Qubit q : g.controls()) cm |= mask(q);
        const std::uint64_t tm = mask(g.target());
        for (std::uint64_t r = 0; r < rows_; ++r) {
          if (!(r & tm) && (r & cm) == cm) swap_rows(r, r | tm);
        }
        break;
      }
      case GateKind::Z: phase(mask(g.target()), 4); break;
      case GateKind::S: phase(mask(g.target()), 2); break;
      case GateKind::Sdg: phase(mask(g.target()), 6); break;
      case GateKind::T: phase(mask(g.target()), 1); break;
      case GateKind::Tdg: phase(mask(g.target()), 7); break;
      case GateKind::CZ: phase(mask(g.qubits[0]) | mask(g.qubits[1]), 4); break;
      case GateKind::Y: {
        const std::uint64_t tm = mask(g.target());
        for (std::uint64_t r = 0; r < rows_; ++r) {
          if (r & tm) continue;
          for (std::size_t c = 0; c < cols(); ++c) {
            Zw<T> r0 = at(r, c);
            at(r, c) = rotate(at(r | tm, c), 6);
            at(r | tm, c) = rotate(r0, 2);
          }
        }
        break;
      }
      case GateKind::H: {
        const std::uint64_t tm = mask(g.target());
        for (std::uint64_t r = 0; r < rows_; ++r) {
          if (r & tm) continue;
          for (std::size_t c = 0; c < cols(); ++c) {
            Zw<T>& a = at(r, c);
            Zw<T>& b = at(r | tm, c);
            for (int i = 0; i < 4; ++i) {
              T sum = a.c[i] + b.c[i];
              b.c[i] = a.c[i] - b.c[i];
              a.c[i] = std::move(sum);
            }
          }
        }
        ++exponent_;
        if constexpr (std::is_same_v<T, BigInt>) {
          if (++since_reduce_ >= 8) reduce();
        }
        break;
      }
      case GateKind::Swap: {
        const std::uint64_t ma = mask(g.qubits[0]);
        const std::uint64_t mb = mask(g.qubits[1]);
        for (std::uint64_t r = 0; r < rows_; ++r) {
          if ((r & ma) && !(r & mb)) swap_rows(r, r ^ ma ^ mb);
        }
        break;
      }
    }
  }

  void apply(std::span<const Gate> gates) {
    for (const Gate& g : gates) apply(g);
    reduce();
  }

  /// Lowers the exponent as far as every entry allows.
  void reduce() {
    since_reduce_ = 0;
    while (exponent_ > 0) {
      bool halvable = exponent_ >= 2;
      bool sqrt2_divisible = true;
      for (const Zw<T>& z : data_) {
        const bool even02 = is_odd(z.c[0]) == is_odd(z.c[2]);
        const bool even13 = is_odd(z.c[1]) == is_odd(z.c[3]);
        if (!even02 || !even13) {
          sqrt2_divisible = false;
          halvable = false;
          break;
        }
        if (halvable && (is_odd(z.c[0]) || is_odd(z.c[1]))) halvable = false;
      }
      if (halvable) {
        for (Zw<T>& z : data_) {
          for (T& x : z.c) x /= 2;
        }
        exponent_ -= 2;
      } else if (sqrt2_divisible) {
        for (Zw<T>& z : data_) {
          z = times_sqrt2(z);
          for (T& x : z.c) x /= 2;
        }
        exponent_ -= 1;
      } else {
        break;
      }
    }
  }

  /// Value-preserving rewrite to a larger exponent.
  void raise_to(int target) {
    while (exponent_ < target) {
      if (target - exponent_ >= 2) {
        for (Zw<T>& z : data_) {
          for (T& x : z.c) x *= 2;
        }
        exponent_ += 2;
      } else {
        for (Zw<T>& z : data_) z = times_sqrt2(z);
        exponent_ += 1;
      }
    }
  }

  /// Column-major copy: result[c * rows + r].
  std::vector<Zw<T>> transposed() const {
    std::vector<Zw<T>> out(data_.size());
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t c = 0; c < cols(); ++c) out[c * rows_ + r] = at(r, c);
    }
    return out;
  }

 private:
  std::uint64_t mask(Qubit q) const { return std::uint64_t{1} << (n_ - 1 - q); }

  void swap_rows(std::uint64_t a, std::uint64_t b) {
    for (std::size_t c = 0; c < cols(); ++c) std::swap(at(a, c), at(b, c));
  }

  void phase(std::uint64_t m, int power) {
    for (std::uint64_t r = 0; r < rows_; ++r) {
      if ((r & m) != m) continue;
      for (std::size_t c = 0; c < cols(); ++c) at(r, c) = rotate(at(r, c), power);
    }
  }

  std::uint32_t n_;
  std::size_t rows_;
  std::vector<std::uint64_t> ids_;
  std::vector<Zw<T>> data_;
  int exponent_ = 0;
  int since_reduce_ = 0;
};

template <class T>
Columns<T> columns_from_dense(const DenseMatrix& u, std::vector<std::uint64_t> ids) {
  Columns<T> out(u.qubits(), std::move(ids));
  for (std::size_t r = 0; r < out.rows(); ++r) {
    for (std::size_t c = 0; c < out.cols(); ++c) out.at(r, c) = from_zomega<T>(u.raw(r, out.column_id(c)));
  }
  return out;
}

std::size_t h_count(std::span<const Gate> gates) {
  return static_cast<std::size_t>(
      std::count_if(gates.begin(), gates.end(), [](const Gate& g) { return g.kind == GateKind::H; }));
}

/// Runs fn(std::type_identity<T>) with the narrowest safe coefficient type.
template <class Fn>
decltype(auto) with_coefficients(std::size_t hadamards, Fn&& fn) {
  if (hadamards <= kMaxHForFixed) return fn(std::type_identity<long long>{});
  return fn(std::type_identity<BigInt>{});
}

void check_bound(std::uint32_t qubits, std::uint32_t max_qubits) {
  if (qubits > max_qubits) {
    throw ResourceLimitError("dense path limited to " + std::to_string(max_qubits) + " qubits, circuit has " +
                             std::to_string(qubits));
  }
}

std::vector<std::uint64_t> data_column_ids(const QubitRoles& roles) {
  std::vector<std::uint64_t> ids(std::size_t{1} << roles.data);
  for (std::uint64_t j = 0; j < ids.size(); ++j) ids[j] = j << roles.ancilla;
  return ids;
}

template <class T>
Columns<T> simulate_data_columns(const Circuit& c) {
  Columns<T> cols(c.qubits(), data_column_ids(c.roles()));
  cols.apply(c.gates());
  return cols;
}

template <class T>
void align(Columns<T>& a, Columns<T>& b) {
  const int e = std::max(a.exponent(), b.exponent());
  a.raise_to(e);
  b.raise_to(e);
}

// Inner products v_{t,p}† v_{t,q} over the data columns. Returns a
// description of the first (t, p, q) where the two sides differ.
template <class T>
std::optional<std::string> inner_product_mismatch(Columns<T> v1, Columns<T> v2, const QubitRoles& roles) {
  align(v1, v2);
  const std::vector<Zw<T>> a = v1.transposed();
  const std::vector<Zw<T>> b = v2.transposed();
  const std::size_t rows = v1.rows();
  const std::size_t data = v1.cols();
  const std::size_t g = rows >> roles.measured;
  const std::size_t blocks = std::size_t{1} << roles.measured;
  for (std::size_t t = 0; t < blocks; ++t) {
    for (std::size_t p = 0; p < data; ++p) {
      for (std::size_t q = p; q < data; ++q) {
        Zw<Wide<T>> s1, s2;
        for (std::size_t s = t * g; s < (t + 1) * g; ++s) {
          const Zw<T>& x1 = a[p * rows + s];
          const Zw<T>& y1 = a[q * rows + s];
          if (!is_zero(x1) && !is_zero(y1)) accumulate(s1, mul(conj(x1), y1));
          const Zw<T>& x2 = b[p * rows + s];
          const Zw<T>& y2 = b[q * rows + s];
          if (!is_zero(x2) && !is_zero(y2)) accumulate(s2, mul(conj(x2), y2));
        }
        if (!(s1 == s2)) {
          std::ostringstream msg;
          msg << "inner products differ at t=" << t << ", p=" << p << ", q=" << q;
          if constexpr (!std::is_same_v<Wide<T>, __int128>) {
            msg << ": " << describe(s1, 2 * v1.exponent()) << " vs " << describe(s2, 2 * v1.exponent());
          }
          return msg.str();
        }
      }
    }
  }
  return std::nullopt;
}

template <class T>
std::optional<std::string> proportionality_mismatch(Columns<T> v1, Columns<T> v2) {
  align(v1, v2);
  const std::size_t rows = v1.rows();
  const std::size_t cols = v1.cols();
  // Reference position: first nonzero entry of v2.
  std::size_t ref_r = 0, ref_c = 0;
  bool found = false;
  for (std::size_t c = 0; c < cols && !found; ++c) {
    for (std::size_t r = 0; r < rows && !found; ++r) {
      if (!is_zero(v2.at(r, c))) {
        ref_r = r;
        ref_c = c;
        found = true;
      }
    }
  }
  if (!found) return std::string("second circuit has an all-zero data column block");
  const Zw<T> a_ref = v1.at(ref_r, ref_c);
  const Zw<T> b_ref = v2.at(ref_r, ref_c);
  if (is_zero(a_ref)) return std::string("output states differ in support");
  for (std::size_t c = 0; c < cols; ++c) {
    for (std::size_t r = 0; r < rows; ++r) {
      if (!(mul(v1.at(r, c), b_ref) == mul(v2.at(r, c), a_ref))) {
        std::ostringstream msg;
        msg << "outputs are not related by one global phase (row " << r << ", input " << v1.column_id(c) << ")";
        return msg.str();
      }
    }
  }
  return std::nullopt;
}

/// Off-block entry of the miter, or nullopt when block-diagonal.
template <class T>
std::optional<std::string> off_block_entry(const Circuit& miter, std::uint32_t block_bits) {
  const std::uint32_t n = miter.qubits();
  const std::uint64_t dim = std::uint64_t{1} << n;
  const std::uint64_t batch = std::min<std::uint64_t>(dim, 512);
  for (std::uint64_t first = 0; first < dim; first += batch) {
    std::vector<std::uint64_t> ids(batch);
    for (std::uint64_t i = 0; i < batch; ++i) ids[i] = first + i;
    Columns<T> cols(n, std::move(ids));
    cols.apply(miter.gates());
    for (std::size_t r = 0; r < cols.rows(); ++r) {
      for (std::size_t c = 0; c < cols.cols(); ++c) {
        const std::uint64_t col = cols.column_id(c);
        if ((r >> block_bits) != (col >> block_bits) && !is_zero(cols.at(r, c))) {
          std::ostringstream msg;
          msg << "miter entry (" << r << ", " << col << ") lies outside the diagonal blocks";
          return msg.str();
        }
      }
    }
  }
  return std::nullopt;
}

// Literal pipeline for one circuit: the masked matrix is stored as its
// nonzero columns only, and the product is evaluated on the surviving rows.
template <class T>
struct Pipeline {
  std::uint32_t qubits = 0;
  std::uint32_t ancillas = 0;  // after padding
  int exponent = 0;            // of the masked matrix
  /// Nonzero columns of the shifted matrix: (column index, full column).
  std::vector<std::pair<std::uint64_t, std::vector<Zw<T>>>> shifted;
  /// Surviving product rows (2^k'·p) as sparse rows: (column, value at 2·exponent).
  std::vector<std::vector<std::pair<std::uint64_t, Zw<Wide<T>>>>> product;
};

template <class T>
Pipeline<T> run_pipeline(Columns<T> masked, const QubitRoles& roles) {
  Pipeline<T> out;
  out.qubits = masked.qubits();
  out.ancillas = roles.ancilla;
  out.exponent = masked.exponent();
  const std::size_t rows = masked.rows();
  const std::size_t g = rows >> roles.measured;
  const std::size_t blocks = std::size_t{1} << roles.measured;
  const std::vector<Zw<T>> cols = masked.transposed();

  // Row block t moves right by t columns inside each column part.
  for (std::size_t j = 0; j < masked.cols(); ++j) {
    for (std::size_t t = 0; t < blocks; ++t) {
      std::vector<Zw<T>> column(rows);
      bool any = false;
      for (std::size_t s = t * g; s < (t + 1) * g; ++s) {
        column[s] = cols[j * rows + s];
        any = any || !is_zero(column[s]);
      }
      if (any) out.shifted.emplace_back(masked.column_id(j) + t, std::move(column));
    }
  }

  // Row 2^k'·p of U† is the conjugate of masked column p.
  out.product.resize(masked.cols());
  for (std::size_t p = 0; p < masked.cols(); ++p) {
    for (const auto& [col, column] : out.shifted) {
      Zw<Wide<T>> acc;
      bool any = false;
      for (std::size_t i = 0; i < rows; ++i) {
        const Zw<T>& x = cols[p * rows + i];
        if (is_zero(x) || is_zero(column[i])) continue;
        accumulate(acc, mul(conj(x), column[i]));
        any = true;
      }
      if (any && !is_zero(acc)) out.product[p].emplace_back(col, acc);
    }
  }
  return out;
}

double squared_norm(std::span<const std::complex<double>> psi) {
  double s = 0;
  for (const auto& a : psi) s += std::norm(a);
  return s;
}

void check_state(std::span<const std::complex<double>> psi, const QubitRoles& roles) {
  if (psi.size() != (std::size_t{1} << roles.data)) {
    throw std::invalid_argument("state has " + std::to_string(psi.size()) + " amplitudes, expected 2^" +
                                std::to_string(roles.data));
  }
  if (std::abs(std::sqrt(squared_norm(psi)) - 1.0) > 1e-12) throw std::invalid_argument("state is not normalized");
}

/// Data columns in floating point: result[j][row].
template <class T>
std::vector<std::vector<std::complex<double>>> complex_columns(const Columns<T>& v) {
  std::vector<std::vector<std::complex<double>>> out(v.cols(), std::vector<std::complex<double>>(v.rows()));
  for (std::size_t r = 0; r < v.rows(); ++r) {
    for (std::size_t c = 0; c < v.cols(); ++c) out[c][r] = to_complex(v.at(r, c), v.exponent());
  }
  return out;
}

std::vector<std::vector<std::complex<double>>> complex_columns(const DenseMatrix& u, const QubitRoles& roles) {
  const auto ids = data_column_ids(roles);
  std::vector<std::vector<std::complex<double>>> out(ids.size(), std::vector<std::complex<double>>(u.dim()));
  for (std::size_t c = 0; c < ids.size(); ++c) {
    for (std::size_t r = 0; r < u.dim(); ++r) out[c][r] = u.entry(r, ids[c]).to_complex();
  }
  return out;
}

std::vector<std::vector<std::complex<double>>> complex_columns(const Circuit& c) {
  return with_coefficients(h_count(c.gates()), [&]<class T>(std::type_identity<T>) {
    return complex_columns(simulate_data_columns<T>(c));
  });
}

std::vector<double> distribution(const std::vector<std::vector<std::complex<double>>>& columns,
                                 std::uint32_t measured, std::span<const std::complex<double>> psi) {
  const std::size_t rows = columns.empty() ? 0 : columns[0].size();
  std::vector<std::complex<double>> out(rows);
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (psi[j] == 0.0) continue;
    for (std::size_t r = 0; r < rows; ++r) out[r] += columns[j][r] * psi[j];
  }
  const std::size_t g = rows >> measured;
  std::vector<double> probs(std::size_t{1} << measured);
  for (std::size_t t = 0; t < probs.size(); ++t) {
    for (std::size_t s = t * g; s < (t + 1) * g; ++s) probs[t] += std::norm(out[s]);
  }
  return probs;
}

Verdict make_verdict(Algorithm a, const std::optional<std::string>& mismatch) {
  Verdict v;
  v.algorithm = a;
  v.equivalent = !mismatch.has_value();
  if (mismatch) v.detail = *mismatch;
  return v;
}

void check_roles(const DenseMatrix& u, const QubitRoles& roles) {
  if (u.qubits() != roles.qubits()) throw CircuitError("matrix size does not match the qubit roles");
  if (roles.measured == 0 || roles.measured > roles.qubits()) throw CircuitError("measured count out of range");
}

}  // namespace

// ---------------------------------------------------------------------------

DenseMatrix dense_unitary(std::uint32_t qubits, std::span<const Gate> gates, std::uint32_t max_qubits) {
  check_bound(qubits, max_qubits);
  for (const Gate& g : gates) validate_gate(g, qubits);
  return with_coefficients(h_count(gates), [&]<class T>(std::type_identity<T>) {
    std::vector<std::uint64_t> ids(std::size_t{1} << qubits);
    for (std::uint64_t i = 0; i < ids.size(); ++i) ids[i] = i;
    Columns<T> cols(qubits, std::move(ids));
    cols.apply(gates);
    DenseMatrix u(qubits, cols.exponent());
    for (std::size_t r = 0; r < cols.rows(); ++r) {
      for (std::size_t c = 0; c < cols.cols(); ++c) u.raw(r, c) = to_zomega(cols.at(r, c));
    }
    return u;
  });
}

DenseMatrix dense_unitary(const Circuit& c, std::uint32_t max_qubits) {
  return dense_unitary(c.qubits(), c.gates(), max_qubits);
}

DenseMatrix permutation_unitary(const std::vector<std::uint64_t>& perm) {
  const std::size_t dim = perm.size();
  if (dim == 0 || (dim & (dim - 1)) != 0) throw std::invalid_argument("permutation size must be a power of two");
  std::vector<bool> hit(dim, false);
  for (const std::uint64_t y : perm) {
    if (y >= dim || hit[y]) throw std::invalid_argument("permutation is not a bijection");
    hit[y] = true;
  }
  const auto qubits = static_cast<std::uint32_t>(std::countr_zero(dim));
  DenseMatrix u(qubits);
  for (std::size_t x = 0; x < dim; ++x) u.raw(perm[x], x) = ZOmega(BigInt(1));
  return u;
}

std::size_t orbit_period(const std::vector<std::uint64_t>& perm, std::uint64_t start) {
  if (start >= perm.size()) throw std::out_of_range("orbit start outside the permutation domain");
  std::size_t period = 1;
  for (std::uint64_t x = perm[start]; x != start; x = perm.at(x)) {
    if (++period > perm.size()) throw std::invalid_argument("not a permutation");
  }
  return period;
}

DenseMatrix period_finding_unitary(const std::vector<std::uint64_t>& perm, std::uint32_t counting) {
  if (counting == 0 || counting > 3) throw std::invalid_argument("counting register must have 1..3 qubits");
  const DenseMatrix oracle = permutation_unitary(perm);
  const std::uint32_t w = oracle.qubits();
  const std::uint32_t n = counting + w;

  std::vector<Gate> prep;
  for (Qubit q = 0; q < counting; ++q) prep.push_back(Gate::h(q));
  prep.push_back(Gate::x(n - 1));
  const DenseMatrix a = dense_unitary(n, prep);

  // Counting qubit j controls perm^(2^(counting-1-j)).
  const std::uint64_t wmask = (std::uint64_t{1} << w) - 1;
  std::vector<std::uint64_t> controlled(std::size_t{1} << n);
  for (std::uint64_t x = 0; x < controlled.size(); ++x) {
    const std::uint64_t cnt = x >> w;
    std::uint64_t y = x & wmask;
    for (std::uint32_t j = 0; j < counting; ++j) {
      if (!((cnt >> (counting - 1 - j)) & 1u)) continue;
      for (std::uint64_t rep = 0; rep < (std::uint64_t{1} << (counting - 1 - j)); ++rep) y = perm[y];
    }
    controlled[x] = (cnt << w) | y;
  }
  const DenseMatrix b = permutation_unitary(controlled);

  // Inverse Fourier transform: ω_N^(−xy) / √N with N = 2^counting.
  const std::uint64_t big_n = std::uint64_t{1} << counting;
  const int step = static_cast<int>(8 >> counting);
  DenseMatrix iqft(counting, static_cast<int>(counting));
  for (std::uint64_t y = 0; y < big_n; ++y) {
    for (std::uint64_t x = 0; x < big_n; ++x) {
      iqft.raw(y, x) = ZOmega::omega_power(-static_cast<int>((x * y) % 8) * step);
    }
  }
  const DenseMatrix c = iqft.kron(DenseMatrix::identity(w));
  return c * (b * a);
}

double outcome_probability(const DenseMatrix& u, const QubitRoles& roles, std::span<const std::complex<double>> psi,
                           std::uint64_t t) {
  check_roles(u, roles);
  check_state(psi, roles);
  if (t >= (std::uint64_t{1} << roles.measured)) throw std::out_of_range("outcome index out of range");
  return distribution(complex_columns(u, roles), roles.measured, psi)[t];
}

double outcome_probability(const Circuit& c, std::span<const std::complex<double>> psi, std::uint64_t t) {
  check_state(psi, c.roles());
  if (t >= (std::uint64_t{1} << c.measured_qubits())) throw std::out_of_range("outcome index out of range");
  return distribution(complex_columns(c), c.measured_qubits(), psi)[t];
}

std::vector<double> outcome_distribution(const DenseMatrix& u, const QubitRoles& roles,
                                         std::span<const std::complex<double>> psi) {
  check_roles(u, roles);
  check_state(psi, roles);
  return distribution(complex_columns(u, roles), roles.measured, psi);
}

std::vector<VVector> extract_v(const DenseMatrix& u, const QubitRoles& roles) {
  check_roles(u, roles);
  const std::size_t g = u.dim() >> roles.measured;
  std::vector<VVector> out;
  out.reserve((std::size_t{1} << roles.measured) << roles.data);
  for (std::uint64_t t = 0; t < (std::uint64_t{1} << roles.measured); ++t) {
    for (std::uint64_t j = 0; j < (std::uint64_t{1} << roles.data); ++j) {
      VVector v{t, j, {}};
      v.entries.reserve(g);
      for (std::size_t s = 0; s < g; ++s) v.entries.push_back(u.entry(g * t + s, j << roles.ancilla));
      out.push_back(std::move(v));
    }
  }
  return out;
}

Verdict theorem1_check(const Circuit& c1, const Circuit& c2, std::uint32_t max_qubits) {
  const auto [a, b] = harmonize(c1, c2);
  check_bound(a.qubits(), max_qubits);
  const std::size_t h = std::max(h_count(a.gates()), h_count(b.gates()));
  return make_verdict(Algorithm::Dense, with_coefficients(h, [&]<class T>(std::type_identity<T>) {
                        return inner_product_mismatch(simulate_data_columns<T>(a), simulate_data_columns<T>(b),
                                                      a.roles());
                      }));
}

Verdict theorem1_check(const DenseMatrix& u1, const DenseMatrix& u2, const QubitRoles& roles) {
  check_roles(u1, roles);
  check_roles(u2, roles);
  const auto ids = data_column_ids(roles);
  return make_verdict(Algorithm::Dense, inner_product_mismatch(columns_from_dense<BigInt>(u1, ids),
                                                               columns_from_dense<BigInt>(u2, ids), roles));
}

Verdict theorem2_check(const Circuit& c1, const Circuit& c2, std::uint32_t max_qubits) {
  const auto [a, b] = harmonize(c1, c2);
  if (a.ancilla_qubits() != 0) throw CircuitError("block-diagonal test requires circuits without ancillas");
  check_bound(a.qubits(), max_qubits);
  const Circuit miter = concatenate(invert(b), a);
  const std::uint32_t block_bits = a.data_qubits() - std::min(a.measured_qubits(), a.data_qubits());
  return make_verdict(Algorithm::DenseBlock, with_coefficients(h_count(miter.gates()), [&]<class T>(std::type_identity<T>) {
                        return off_block_entry<T>(miter, block_bits);
                      }));
}

Verdict theorem2_check(const DenseMatrix& u1, const DenseMatrix& u2, const QubitRoles& roles) {
  check_roles(u1, roles);
  check_roles(u2, roles);
  if (roles.ancilla != 0) throw CircuitError("block-diagonal test requires circuits without ancillas");
  const DenseMatrix miter = u1 * u2.adjoint();
  const std::uint32_t block_bits = roles.data - std::min(roles.measured, roles.data);
  for (std::size_t r = 0; r < miter.dim(); ++r) {
    for (std::size_t c = 0; c < miter.dim(); ++c) {
      if ((r >> block_bits) != (c >> block_bits) && !miter.raw(r, c).is_zero()) {
        std::ostringstream msg;
        msg << "miter entry (" << r << ", " << c << ") lies outside the diagonal blocks";
        return make_verdict(Algorithm::DenseBlock, msg.str());
      }
    }
  }
  return make_verdict(Algorithm::DenseBlock, std::nullopt);
}

Verdict algorithm1_dense(const Circuit& c1, const Circuit& c2, std::uint32_t max_qubits) {
  const auto [h1, h2] = harmonize(c1, c2);
  const std::uint32_t extra = h1.measured_qubits() > h1.ancilla_qubits() ? h1.measured_qubits() - h1.ancilla_qubits() : 0;
  const Circuit a = pad_ancillas(h1, extra);
  const Circuit b = pad_ancillas(h2, extra);
  check_bound(a.qubits(), max_qubits);
  const std::size_t h = std::max(h_count(a.gates()), h_count(b.gates()));
  auto mismatch = with_coefficients(h, [&]<class T>(std::type_identity<T>) -> std::optional<std::string> {
    Columns<T> m1 = simulate_data_columns<T>(a);
    Columns<T> m2 = simulate_data_columns<T>(b);
    align(m1, m2);
    const Pipeline<T> p1 = run_pipeline(std::move(m1), a.roles());
    const Pipeline<T> p2 = run_pipeline(std::move(m2), b.roles());
    for (std::size_t p = 0; p < p1.product.size(); ++p) {
      if (p1.product[p].size() != p2.product[p].size()) {
        return "masked products differ in row " + std::to_string(p << a.ancilla_qubits());
      }
      for (std::size_t i = 0; i < p1.product[p].size(); ++i) {
        if (p1.product[p][i].first != p2.product[p][i].first || !(p1.product[p][i].second == p2.product[p][i].second)) {
          std::ostringstream msg;
          msg << "masked products differ at (" << (p << a.ancilla_qubits()) << ", "
              << std::min(p1.product[p][i].first, p2.product[p][i].first) << ")";
          return msg.str();
        }
      }
    }
    return std::nullopt;
  });
  return make_verdict(Algorithm::DensePipeline, mismatch);
}

Algorithm1Trace algorithm1_trace(const Circuit& c, std::uint32_t max_qubits) {
  const std::uint32_t extra = c.measured_qubits() > c.ancilla_qubits() ? c.measured_qubits() - c.ancilla_qubits() : 0;
  const Circuit padded = pad_ancillas(c, extra);
  check_bound(padded.qubits(), max_qubits);
  const Pipeline<BigInt> p = run_pipeline(simulate_data_columns<BigInt>(padded), padded.roles());
  Algorithm1Trace trace;
  trace.extra_ancillas = extra;
  trace.shifted = DenseMatrix(padded.qubits(), p.exponent);
  for (const auto& [col, column] : p.shifted) {
    for (std::size_t r = 0; r < column.size(); ++r) trace.shifted.raw(r, col) = to_zomega(column[r]);
  }
  trace.product = DenseMatrix(padded.qubits(), 2 * p.exponent);
  for (std::size_t row = 0; row < p.product.size(); ++row) {
    for (const auto& [col, value] : p.product[row]) trace.product.raw(row << p.ancillas, col) = to_zomega(value);
  }
  trace.shifted.reduce();
  trace.product.reduce();
  return trace;
}

Verdict dense_total_equivalence(const Circuit& c1, const Circuit& c2, std::uint32_t max_qubits) {
  const auto [a, b] = harmonize(c1, c2);
  check_bound(a.qubits(), max_qubits);
  const std::size_t h = std::max(h_count(a.gates()), h_count(b.gates()));
  return make_verdict(Algorithm::DenseTotal, with_coefficients(h, [&]<class T>(std::type_identity<T>) {
                        return proportionality_mismatch(simulate_data_columns<T>(a), simulate_data_columns<T>(b));
                      }));
}

Verdict dense_total_equivalence(const DenseMatrix& u1, const DenseMatrix& u2, const QubitRoles& roles) {
  check_roles(u1, roles);
  check_roles(u2, roles);
  const auto ids = data_column_ids(roles);
  return make_verdict(Algorithm::DenseTotal, proportionality_mismatch(columns_from_dense<BigInt>(u1, ids),
                                                                      columns_from_dense<BigInt>(u2, ids)));
}

std::optional<Counterexample> monte_carlo_falsify(const Circuit& c1, const Circuit& c2,
                                                  const MonteCarloOptions& options) {
  const auto [a, b] = harmonize(c1, c2);
  check_bound(a.qubits(), options.max_qubits);
  const auto cols1 = complex_columns(a);
  const auto cols2 = complex_columns(b);
  const std::size_t dim = std::size_t{1} << a.data_qubits();
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  std::vector<std::complex<double>> psi(dim);
  for (std::size_t sample = 0; sample < options.samples; ++sample) {
    for (auto& amp : psi) amp = {normal(rng), normal(rng)};
    const double norm = std::sqrt(squared_norm(psi));
    for (auto& amp : psi) amp /= norm;
    const auto p1 = distribution(cols1, a.measured_qubits(), psi);
    const auto p2 = distribution(cols2, b.measured_qubits(), psi);
    for (std::size_t t = 0; t < p1.size(); ++t) {
      if (std::abs(p1[t] - p2[t]) > options.tolerance) return Counterexample{psi, t, p1[t], p2[t]};
    }
  }
  return std::nullopt;
}

std::string_view algorithm_name(Algorithm a) noexcept {
  switch (a) {
    case Algorithm::General: return "general";
    case Algorithm::ZeroAncilla: return "zero_ancilla";
    case Algorithm::Total: return "total";
    case Algorithm::Dense: return "dense";
    case Algorithm::DenseBlock: return "dense_block";
    case Algorithm::DensePipeline: return "dense_pipeline";
    case Algorithm::DenseTotal: return "dense_total";
    case Algorithm::MonteCarlo: return "monte_carlo";
  }
  return "unknown";
}

}  // namespace pec
