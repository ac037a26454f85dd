#include "pec/algebraic_matrix.hpp"

#include <stdexcept>

namespace pec {

namespace {

using Slices = AlgebraicMatrix::Slices;

/// a + (invert_b ? ~b : b) + carry, truncated to the common width.
Slices ripple_add(BddManager& mgr, const Slices& a, const Slices& b, bool invert_b, Bdd carry) {
  Slices out;
  out.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Bdd bi = invert_b ? mgr.negate(b[i]) : b[i];
    const Bdd axb = mgr.apply_xor(a[i], bi);
    out.push_back(mgr.apply_xor(axb, carry));
    if (i + 1 < a.size()) {
      carry = mgr.apply_or(mgr.apply_and(a[i], bi), mgr.apply_and(carry, axb));
    }
  }
  return out;
}

/// Two's-complement negation: complement plus increment.
Slices negated(BddManager& mgr, const Slices& a) {
  Slices out;
  out.reserve(a.size());
  Bdd carry = mgr.constant(true);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Bdd inv = mgr.negate(a[i]);
    out.push_back(mgr.apply_xor(inv, carry));
    if (i + 1 < a.size()) carry = mgr.apply_and(inv, carry);
  }
  return out;
}

/// Negates the entries where `guard` holds: (a ⊕ g) + g, bit-serially.
Slices negated_where(BddManager& mgr, const Slices& a, const Bdd& guard) {
  Slices out;
  out.reserve(a.size());
  Bdd carry = guard;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Bdd t = mgr.apply_xor(a[i], guard);
    out.push_back(mgr.apply_xor(t, carry));
    if (i + 1 < a.size()) carry = mgr.apply_and(t, carry);
  }
  return out;
}

Slices select(BddManager& mgr, const Bdd& guard, const Slices& then_slices, const Slices& else_slices) {
  Slices out;
  out.reserve(then_slices.size());
  for (std::size_t i = 0; i < then_slices.size(); ++i) out.push_back(mgr.ite(guard, then_slices[i], else_slices[i]));
  return out;
}

BigInt decode(const Slices& bits, const std::vector<bool>& assignment, const BddManager& mgr) {
  BigInt value = 0;
  const std::size_t r = bits.size();
  for (std::size_t b = 0; b < r; ++b) {
    if (!mgr.evaluate(bits[b], assignment)) continue;
    const BigInt weight = BigInt(1) << b;
    if (b + 1 == r) {
      value -= weight;
    } else {
      value += weight;
    }
  }
  return value;
}

}  // namespace

std::vector<BddVar> matrix_variable_order(std::uint32_t qubits, VariableOrder order) {
  const MatrixVariableMap vars{qubits};
  std::vector<BddVar> levels;
  levels.reserve(vars.variable_count());
  if (order == VariableOrder::Interleaved) {
    for (Qubit q = 0; q < qubits; ++q) {
      levels.push_back(vars.row(q));
      levels.push_back(vars.col(q));
    }
  } else {
    for (Qubit q = 0; q < qubits; ++q) levels.push_back(vars.row(q));
    for (Qubit q = 0; q < qubits; ++q) levels.push_back(vars.col(q));
  }
  return levels;
}

// ---------------------------------------------------------------------------
// Construction and inspection

AlgebraicMatrix AlgebraicMatrix::identity(BddManager& manager, std::uint32_t qubits) {
  if (qubits == 0) throw std::invalid_argument("identity needs at least one qubit");
  if (manager.variable_count() < 2 * qubits) throw std::invalid_argument("manager has too few variables");
  AlgebraicMatrix m(manager, qubits);
  Bdd diagonal = manager.constant(true);
  for (Qubit q = 0; q < qubits; ++q) {
    diagonal &= ~(manager.var(m.vars_.row(q)) ^ manager.var(m.vars_.col(q)));
  }
  const Bdd zero = manager.constant(false);
  m.channels_[0] = {diagonal, zero};
  for (int p = 1; p < 4; ++p) m.channels_[p] = {zero, zero};
  return m;
}

AlgebraicMatrix AlgebraicMatrix::from_channels(BddManager& manager, std::uint32_t qubits, int sqrt2_exponent,
                                               std::array<Slices, 4> channels) {
  const std::size_t width = channels[0].size();
  if (width == 0) throw std::invalid_argument("slice width must be positive");
  for (const Slices& c : channels) {
    if (c.size() != width) throw std::invalid_argument("all channels must share one slice width");
    for (const Bdd& b : c) {
      if (b.manager() != &manager) throw std::invalid_argument("slice belongs to another manager");
    }
  }
  if (sqrt2_exponent < 0) throw std::invalid_argument("sqrt2 exponent must be non-negative");
  AlgebraicMatrix m(manager, qubits);
  m.exponent_ = sqrt2_exponent;
  m.channels_ = std::move(channels);
  return m;
}

std::vector<Bdd> AlgebraicMatrix::slices() const {
  std::vector<Bdd> all;
  all.reserve(4 * slice_width());
  for (const Slices& c : channels_) all.insert(all.end(), c.begin(), c.end());
  return all;
}

std::size_t AlgebraicMatrix::node_count() const { return manager_->node_count(slices()); }

AlgebraicComplex AlgebraicMatrix::entry(std::uint64_t row, std::uint64_t col) const {
  const std::uint32_t n = qubits();
  std::vector<bool> assignment(manager_->variable_count(), false);
  for (Qubit q = 0; q < n; ++q) {
    assignment[vars_.row(q)] = (row >> (n - 1 - q)) & 1u;
    assignment[vars_.col(q)] = (col >> (n - 1 - q)) & 1u;
  }
  ZOmega z;
  for (int p = 0; p < 4; ++p) z.c[p] = decode(channels_[p], assignment, *manager_);
  return AlgebraicComplex(std::move(z), exponent_);
}

DenseMatrix AlgebraicMatrix::to_dense(std::uint32_t max_qubits) const {
  const std::uint32_t n = qubits();
  if (n > max_qubits) {
    throw ResourceLimitError("to_dense: " + std::to_string(n) + " qubits exceeds the bound of " +
                             std::to_string(max_qubits));
  }
  DenseMatrix out(n, exponent_);
  std::vector<bool> assignment(manager_->variable_count(), false);
  for (std::size_t i = 0; i < out.dim(); ++i) {
    for (std::size_t j = 0; j < out.dim(); ++j) {
      for (Qubit q = 0; q < n; ++q) {
        assignment[vars_.row(q)] = (i >> (n - 1 - q)) & 1u;
        assignment[vars_.col(q)] = (j >> (n - 1 - q)) & 1u;
      }
      ZOmega& z = out.raw(i, j);
      for (int p = 0; p < 4; ++p) z.c[p] = decode(channels_[p], assignment, *manager_);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Width and exponent bookkeeping

void AlgebraicMatrix::extend(std::size_t extra) {
  for (Slices& c : channels_) {
    const Bdd sign = c.back();
    c.insert(c.end(), extra, sign);
  }
}

void AlgebraicMatrix::normalize_width() {
  while (slice_width() > 1) {
    const std::size_t r = slice_width();
    for (const Slices& c : channels_) {
      if (!(c[r - 1] == c[r - 2])) return;
    }
    for (Slices& c : channels_) c.pop_back();
  }
}

void AlgebraicMatrix::reduce_common_factor() {
  while (exponent_ >= 2 && slice_width() >= 2) {
    for (const Slices& c : channels_) {
      if (!c[0].is_false()) return;
    }
    for (Slices& c : channels_) c.erase(c.begin());
    exponent_ -= 2;
    normalize_width();
  }
}

void AlgebraicMatrix::multiply_two() {
  const Bdd zero = manager_->constant(false);
  for (Slices& c : channels_) c.insert(c.begin(), zero);
  exponent_ += 2;
}

void AlgebraicMatrix::multiply_sqrt2() {
  BddManager& mgr = *manager_;
  extend(1);
  const Bdd no_carry = mgr.constant(false);
  const Bdd borrow = mgr.constant(true);
  const auto& [c0, c1, c2, c3] = channels_;
  // √2 = ω − ω³: (c3,c2,c1,c0) ← (c2−c0, c3+c1, c2+c0, c1−c3)
  std::array<Slices, 4> next{
      ripple_add(mgr, c1, c3, true, borrow),
      ripple_add(mgr, c2, c0, false, no_carry),
      ripple_add(mgr, c3, c1, false, no_carry),
      ripple_add(mgr, c2, c0, true, borrow),
  };
  channels_ = std::move(next);
  ++exponent_;
  normalize_width();
}

// ---------------------------------------------------------------------------
// Entry-wise helpers

void AlgebraicMatrix::restrict_to(const Bdd& keep) {
  for (Slices& c : channels_) {
    for (Bdd& b : c) b = manager_->apply_and(b, keep);
  }
  normalize_width();
}

void AlgebraicMatrix::cofactor(BddVar v, bool polarity) {
  for (Slices& c : channels_) {
    for (Bdd& b : c) b = manager_->cofactor(b, v, polarity);
  }
  normalize_width();
}

Bdd AlgebraicMatrix::guard(std::span<const Qubit> qubits, bool columns) const {
  Bdd g = manager_->constant(true);
  for (const Qubit q : qubits) g &= manager_->var(index_var(q, columns));
  return g;
}

void AlgebraicMatrix::negate_where(const Bdd& guard) {
  extend(1);
  for (Slices& c : channels_) c = negated_where(*manager_, c, guard);
  normalize_width();
}

void AlgebraicMatrix::rotate_omega(int power, const Bdd& guard) {
  power %= 8;
  if (power < 0) power += 8;
  if (power == 0) return;
  if (power == 4) {
    negate_where(guard);
    return;
  }
  BddManager& mgr = *manager_;
  extend(1);
  const bool flip = power >= 4;
  const int shift = power % 4;
  // ω^shift · Σ c_p ω^p moves c_p to ω^(p+shift); wrapping past ω³ negates.
  std::array<Slices, 4> rotated;
  for (int p = 0; p < 4; ++p) {
    int src = p - shift;
    bool neg = flip;
    if (src < 0) {
      src += 4;
      neg = !neg;
    }
    rotated[p] = neg ? negated(mgr, channels_[src]) : channels_[src];
  }
  if (guard.is_true()) {
    channels_ = std::move(rotated);
  } else {
    for (int p = 0; p < 4; ++p) channels_[p] = select(mgr, guard, rotated[p], channels_[p]);
  }
  normalize_width();
}

void AlgebraicMatrix::swap_branches(BddVar v, const Bdd& guard) {
  for (Slices& c : channels_) {
    for (Bdd& b : c) {
      Bdd swapped = manager_->swap_variable_branches(b, v);
      b = guard.is_true() ? std::move(swapped) : manager_->ite(guard, swapped, b);
    }
  }
}

void AlgebraicMatrix::hadamard(BddVar v) {
  BddManager& mgr = *manager_;
  const Bdd xv = mgr.var(v);
  const Bdd no_carry = mgr.constant(false);
  const Bdd borrow = mgr.constant(true);
  extend(1);
  for (Slices& c : channels_) {
    Slices top, bottom;
    top.reserve(c.size());
    bottom.reserve(c.size());
    for (const Bdd& b : c) {
      top.push_back(mgr.cofactor(b, v, false));
      bottom.push_back(mgr.cofactor(b, v, true));
    }
    // Index pair (i0, i1) becomes (i0 + i1, i0 − i1) / √2.
    const Slices sum = ripple_add(mgr, top, bottom, false, no_carry);
    const Slices diff = ripple_add(mgr, top, bottom, true, borrow);
    c = select(mgr, xv, diff, sum);
  }
  ++exponent_;
  normalize_width();
  reduce_common_factor();
}

// ---------------------------------------------------------------------------
// Gate application

void AlgebraicMatrix::act(const Gate& g, bool columns) {
  BddManager& mgr = *manager_;
  const Bdd always = mgr.constant(true);
  const auto on = [&](Qubit q) { return mgr.var(index_var(q, columns)); };
  switch (g.kind) {
    case GateKind::X: swap_branches(index_var(g.target(), columns), always); break;
    case GateKind::Y:
      // Y = iXZ
      negate_where(on(g.target()));
      swap_branches(index_var(g.target(), columns), always);
      rotate_omega(2, always);
      break;
    case GateKind::Z: negate_where(on(g.target())); break;
    case GateKind::H: hadamard(index_var(g.target(), columns)); break;
    case GateKind::S: rotate_omega(2, on(g.target())); break;
    case GateKind::Sdg: rotate_omega(6, on(g.target())); break;
    case GateKind::T: rotate_omega(1, on(g.target())); break;
    case GateKind::Tdg: rotate_omega(7, on(g.target())); break;
    case GateKind::CNOT:
    case GateKind::CCX:
    case GateKind::MCX: swap_branches(index_var(g.target(), columns), guard(g.controls(), columns)); break;
    case GateKind::CZ: negate_where(guard(g.qubits, columns)); break;
    case GateKind::Swap: {
      const BddVar a = index_var(g.qubits[0], columns);
      const BddVar b = index_var(g.qubits[1], columns);
      for (Slices& c : channels_) {
        for (Bdd& s : c) s = mgr.exchange_variables(s, a, b);
      }
      break;
    }
  }
}

void AlgebraicMatrix::apply(const Gate& g) {
  validate_gate(g, qubits());
  act(g, false);
}

void AlgebraicMatrix::apply_adjoint_right(const Gate& g) {
  validate_gate(g, qubits());
  // (M·U†)ᵀ = conj(U)·Mᵀ: the entrywise conjugate of g acts on the column index.
  switch (g.kind) {
    case GateKind::S: act(Gate{GateKind::Sdg, g.qubits}, true); break;
    case GateKind::Sdg: act(Gate{GateKind::S, g.qubits}, true); break;
    case GateKind::T: act(Gate{GateKind::Tdg, g.qubits}, true); break;
    case GateKind::Tdg: act(Gate{GateKind::T, g.qubits}, true); break;
    case GateKind::Y:
      act(g, true);
      rotate_omega(4, manager_->constant(true));
      break;
    default: act(g, true); break;
  }
}

void AlgebraicMatrix::apply(const Circuit& c) {
  if (c.qubits() > qubits()) throw std::invalid_argument("circuit is wider than the matrix");
  for (const Gate& g : c.gates()) apply(g);
}

void AlgebraicMatrix::apply_inverse(const Circuit& c) {
  if (c.qubits() > qubits()) throw std::invalid_argument("circuit is wider than the matrix");
  for (auto it = c.gates().rbegin(); it != c.gates().rend(); ++it) apply(inverse(*it));
}

bool equal_matrices(const AlgebraicMatrix& a, const AlgebraicMatrix& b) {
  if (a.manager_ != b.manager_) throw std::invalid_argument("equal_matrices: operands use different managers");
  if (a.qubits() != b.qubits()) throw std::invalid_argument("equal_matrices: qubit counts differ");
  AlgebraicMatrix x = a;
  AlgebraicMatrix y = b;
  auto lift = [](AlgebraicMatrix& low, int target) {
    while (low.exponent_ < target) {
      if (target - low.exponent_ >= 2) {
        low.multiply_two();
      } else {
        low.multiply_sqrt2();
      }
    }
  };
  lift(x, y.exponent_);
  lift(y, x.exponent_);

  auto even = [](const AlgebraicMatrix& m) {
    if (m.slice_width() < 2) return false;
    for (const Slices& c : m.channels_) {
      if (!c[0].is_false()) return false;
    }
    return true;
  };
  while (x.exponent_ >= 2 && even(x) && even(y)) {
    for (Slices& c : x.channels_) c.erase(c.begin());
    for (Slices& c : y.channels_) c.erase(c.begin());
    x.exponent_ -= 2;
    y.exponent_ -= 2;
  }

  const std::size_t width = std::max(x.slice_width(), y.slice_width());
  x.extend(width - x.slice_width());
  y.extend(width - y.slice_width());
  for (int p = 0; p < 4; ++p) {
    for (std::size_t i = 0; i < width; ++i) {
      if (!(x.channels_[p][i] == y.channels_[p][i])) return false;
    }
  }
  return true;
}

AlgebraicMatrix apply_gate(AlgebraicMatrix m, const Gate& g) {
  m.apply(g);
  return m;
}

AlgebraicMatrix apply_circuit(AlgebraicMatrix m, const Circuit& c) {
  m.apply(c);
  return m;
}

AlgebraicMatrix apply_inverse_circuit(AlgebraicMatrix m, const Circuit& c) {
  m.apply_inverse(c);
  return m;
}

AlgebraicMatrix multiply_sqrt2(AlgebraicMatrix m) {
  m.multiply_sqrt2();
  return m;
}

}  // namespace pec
