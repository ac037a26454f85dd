#include "pec/checker.hpp"

#include <algorithm>
#include <chrono>
#include <string>
#include <vector>

#include "pec/bdd.hpp"

namespace pec {

namespace {

using Clock = std::chrono::steady_clock;

class Session {
 public:
  Session(std::uint32_t qubits, const CheckOptions& options)
      : start_(Clock::now()), manager_(2 * qubits, matrix_variable_order(qubits, options.order)) {
    if (options.timeout_seconds) {
      manager_.set_deadline(start_ + std::chrono::duration_cast<Clock::duration>(
                                         std::chrono::duration<double>(*options.timeout_seconds)));
    }
    if (options.node_limit) manager_.set_node_limit(options.node_limit);
  }

  BddManager& manager() { return manager_; }

  AlgebraicMatrix build(std::uint32_t qubits, std::span<const Gate> gates) {
    AlgebraicMatrix f = AlgebraicMatrix::identity(manager_, qubits);
    for (const Gate& g : gates) {
      f.apply(g);
      note(f);
    }
    return f;
  }

  /// U_a · U_b† grown from the middle: gates of `a` multiply on the left and
  /// adjoints of `b` on the right, interleaved in proportion to the gate
  /// counts, so matching prefixes cancel while they are applied.
  AlgebraicMatrix miter(const Circuit& a, const Circuit& b) {
    AlgebraicMatrix f = AlgebraicMatrix::identity(manager_, a.qubits());
    const std::size_t n1 = a.gate_count();
    const std::size_t n2 = b.gate_count();
    std::size_t i = 0, j = 0;
    while (i < n1 || j < n2) {
      if (j >= n2 || (i < n1 && i * n2 <= j * n1)) {
        f.apply(a.gates()[i++]);
      } else {
        f.apply_adjoint_right(b.gates()[j++]);
      }
      note(f);
    }
    return f;
  }

  void note(const AlgebraicMatrix& f) { max_width_ = std::max(max_width_, f.slice_width()); }

  Verdict finish(Algorithm a, bool equivalent) const {
    Verdict v;
    v.algorithm = a;
    v.equivalent = equivalent;
    v.stats.peak_nodes = manager_.peak_nodes();
    v.stats.max_slice_width = max_width_;
    v.stats.seconds = std::chrono::duration<double>(Clock::now() - start_).count();
    return v;
  }

 private:
  Clock::time_point start_;
  BddManager manager_;
  std::size_t max_width_ = 0;
};

/// Conjunction of ¬(x_i ⊕ y_i) (or the disjunction of x_i ⊕ y_i) over i < count.
Bdd diagonal_agreement(BddManager& mgr, const MatrixVariableMap& vars, std::uint32_t count) {
  Bdd agree = mgr.constant(true);
  for (Qubit i = 0; i < count; ++i) agree &= ~(mgr.var(vars.row(i)) ^ mgr.var(vars.col(i)));
  return agree;
}

bool all_slices_vanish(const AlgebraicMatrix& f, const Bdd& region) {
  for (int p = 0; p < 4; ++p) {
    for (const Bdd& s : f.channel(p)) {
      if (!(s & region).is_false()) return false;
    }
  }
  return true;
}

std::pair<Circuit, Circuit> ancilla_free_pair(const Circuit& c1, const Circuit& c2) {
  auto pair = harmonize(c1, c2);
  if (pair.first.ancilla_qubits() != 0) throw CircuitError("this test requires circuits without ancillas");
  return pair;
}

bool diagonal_single(GateKind k) {
  return k == GateKind::Z || k == GateKind::S || k == GateKind::Sdg || k == GateKind::T || k == GateKind::Tdg;
}

/// Drops gates that are the identity because some ancilla they read is
/// still |0⟩. An ancilla stays pristine until a gate could change it.
std::vector<Gate> without_inert_gates(const Circuit& c) {
  const std::uint32_t d = c.data_qubits();
  std::vector<bool> pristine(c.qubits(), false);
  for (Qubit q = d; q < c.qubits(); ++q) pristine[q] = true;
  std::vector<Gate> kept;
  for (const Gate& g : c.gates()) {
    bool inert = false;
    switch (g.kind) {
      case GateKind::CNOT:
      case GateKind::CCX:
      case GateKind::MCX:
        for (const Qubit q : g.controls()) inert = inert || pristine[q];
        break;
      case GateKind::CZ: inert = pristine[g.qubits[0]] || pristine[g.qubits[1]]; break;
      default: inert = diagonal_single(g.kind) && pristine[g.qubits[0]]; break;
    }
    if (inert) continue;
    // Controls of a kept gate are read only; every other operand may change.
    const bool controlled = g.kind == GateKind::CNOT || g.kind == GateKind::CCX || g.kind == GateKind::MCX;
    if (controlled) {
      pristine[g.target()] = false;
    } else {
      for (const Qubit q : g.qubits) pristine[q] = false;
    }
    kept.push_back(g);
  }
  return kept;
}

}  // namespace

std::pair<Circuit, Circuit> eliminate_inert_ancillas(const Circuit& c1, const Circuit& c2) {
  const auto [a, b] = harmonize(c1, c2);
  const std::uint32_t n = a.qubits();
  const std::uint32_t d = a.data_qubits();
  std::vector<Gate> g1 = without_inert_gates(a);
  std::vector<Gate> g2 = without_inert_gates(b);
  std::vector<bool> used(n, false);
  for (const auto* gates : {&g1, &g2}) {
    for (const Gate& g : *gates) {
      for (const Qubit q : g.qubits) used[q] = true;
    }
  }
  // Surviving ancillas keep their order after the data qubits. Measured
  // ancillas always survive so the outcome register is unchanged.
  const std::uint32_t keep_below = std::max(d, a.measured_qubits());
  std::vector<Qubit> index(n);
  Qubit next = 0;
  for (Qubit q = 0; q < n; ++q) {
    if (q < keep_below || used[q]) index[q] = next++;
  }
  for (auto* gates : {&g1, &g2}) {
    for (Gate& g : *gates) {
      for (Qubit& q : g.qubits) q = index[q];
    }
  }
  return {Circuit(next, std::move(g1), d, a.measured_qubits()), Circuit(next, std::move(g2), d, a.measured_qubits())};
}

Verdict pec_general(const Circuit& c1, const Circuit& c2, const CheckOptions& options) {
  const auto [h1, h2] = harmonize(c1, c2);
  const std::uint32_t extra =
      h1.measured_qubits() > h1.ancilla_qubits() ? h1.measured_qubits() - h1.ancilla_qubits() : 0;
  const Circuit a = pad_ancillas(h1, extra);
  const Circuit b = pad_ancillas(h2, extra);
  const std::uint32_t n = a.qubits();
  const std::uint32_t d = a.data_qubits();
  const std::uint32_t m = a.measured_qubits();
  const std::uint32_t k = a.ancilla_qubits();

  Session session(n, options);
  BddManager& mgr = session.manager();
  const MatrixVariableMap vars{n};

  // Row block t keeps only intra-block column offset t; when m < k the
  // offsets at or above 2^m are cleared as well.
  Bdd placement = mgr.constant(true);
  for (Qubit i = 0; i < m; ++i) placement &= ~(mgr.var(vars.row(i)) ^ mgr.var(vars.col(d + k - m + i)));
  for (Qubit i = d; i + m < d + k; ++i) placement &= ~mgr.var(vars.col(i));
  // Top row of every data row part.
  Bdd top_rows = mgr.constant(true);
  for (Qubit i = d; i < d + k; ++i) top_rows &= ~mgr.var(vars.row(i));

  auto reduce_circuit = [&](const Circuit& c) {
    // Every column of a part becomes a copy of its leftmost column. Gates act
    // on row variables only, so the cofactor is taken on the identity first.
    AlgebraicMatrix f = AlgebraicMatrix::identity(mgr, n);
    for (Qubit i = d; i < d + k; ++i) f.cofactor(vars.col(i), false);
    for (const Gate& g : c.gates()) {
      f.apply(g);
      session.note(f);
    }
    f.restrict_to(placement);
    for (auto it = c.gates().rbegin(); it != c.gates().rend(); ++it) {
      f.apply(inverse(*it));
      session.note(f);
    }
    f.restrict_to(top_rows);
    return f;
  };

  const AlgebraicMatrix f1 = reduce_circuit(a);
  const AlgebraicMatrix f2 = reduce_circuit(b);
  return session.finish(Algorithm::General, equal_matrices(f1, f2));
}

Verdict pec_zero_ancilla(const Circuit& c1, const Circuit& c2, const CheckOptions& options) {
  const auto [a, b] = ancilla_free_pair(c1, c2);
  const std::uint32_t n = a.qubits();
  Session session(n, options);
  BddManager& mgr = session.manager();
  const AlgebraicMatrix f = session.miter(a, b);
  const Bdd off_block = ~diagonal_agreement(mgr, f.variables(), a.measured_qubits());
  return session.finish(Algorithm::ZeroAncilla, all_slices_vanish(f, off_block));
}

Verdict total_equivalence(const Circuit& c1, const Circuit& c2, const CheckOptions& options) {
  const auto [a, b] = ancilla_free_pair(c1, c2);
  const std::uint32_t n = a.qubits();
  Session session(n, options);
  BddManager& mgr = session.manager();
  const AlgebraicMatrix f = session.miter(a, b);
  const Bdd diagonal = diagonal_agreement(mgr, f.variables(), n);
  if (!all_slices_vanish(f, ~diagonal)) return session.finish(Algorithm::Total, false);
  // With the off-diagonal part zero, a constant diagonal means every slice is
  // either the full diagonal or empty.
  bool scalar = true;
  for (int p = 0; p < 4 && scalar; ++p) {
    for (const Bdd& s : f.channel(p)) {
      if (!s.is_false() && !(s == diagonal)) {
        scalar = false;
        break;
      }
    }
  }
  return session.finish(Algorithm::Total, scalar);
}

Verdict check(const Circuit& c1, const Circuit& c2, CheckMode mode, const CheckOptions& options) {
  Verdict v;
  switch (mode) {
    case CheckMode::Auto: {
      const auto [h1, h2] = harmonize(c1, c2);
      const auto [a, b] = eliminate_inert_ancillas(h1, h2);
      v = a.ancilla_qubits() == 0 ? pec_zero_ancilla(a, b, options) : pec_general(a, b, options);
      if (a.ancilla_qubits() < h1.ancilla_qubits()) {
        v.detail = std::to_string(h1.ancilla_qubits() - a.ancilla_qubits()) + " of " +
                   std::to_string(h1.ancilla_qubits()) + " ancillas were inert and removed";
      }
      break;
    }
    case CheckMode::General: v = pec_general(c1, c2, options); break;
    case CheckMode::ZeroAncilla: v = pec_zero_ancilla(c1, c2, options); break;
    case CheckMode::Total: v = total_equivalence(c1, c2, options); break;
    case CheckMode::Dense: {
      const auto start = Clock::now();
      v = theorem1_check(c1, c2, options.dense_bound);
      v.stats.seconds = std::chrono::duration<double>(Clock::now() - start).count();
      break;
    }
    case CheckMode::MonteCarlo: {
      const auto start = Clock::now();
      MonteCarloOptions mc;
      mc.samples = options.samples;
      mc.seed = options.seed;
      mc.max_qubits = options.dense_bound;
      v.algorithm = Algorithm::MonteCarlo;
      v.counterexample = monte_carlo_falsify(c1, c2, mc);
      v.equivalent = !v.counterexample;
      v.conclusive = v.counterexample.has_value();
      if (!v.conclusive) v.detail = "no violation in " + std::to_string(mc.samples) + " samples";
      v.stats.seconds = std::chrono::duration<double>(Clock::now() - start).count();
      return v;
    }
  }
  if (!v.equivalent && options.witness && mode != CheckMode::Total) {
    const auto [a, b] = harmonize(c1, c2);
    if (a.qubits() <= options.witness_bound) {
      MonteCarloOptions mc;
      mc.samples = std::min<std::size_t>(options.samples, 64);
      mc.seed = options.seed;
      v.counterexample = monte_carlo_falsify(a, b, mc);
    }
  }
  return v;
}

std::string_view mode_name(CheckMode mode) noexcept {
  switch (mode) {
    case CheckMode::Auto: return "auto";
    case CheckMode::General: return "general";
    case CheckMode::ZeroAncilla: return "zero-ancilla";
    case CheckMode::Total: return "total";
    case CheckMode::Dense: return "dense";
    case CheckMode::MonteCarlo: return "monte-carlo";
  }
  return "auto";
}

std::optional<CheckMode> parse_mode(std::string_view text) noexcept {
  std::string s(text);
  std::replace(s.begin(), s.end(), '_', '-');
  for (const CheckMode m : {CheckMode::Auto, CheckMode::General, CheckMode::ZeroAncilla, CheckMode::Total,
                            CheckMode::Dense, CheckMode::MonteCarlo}) {
    if (s == mode_name(m)) return m;
  }
  return std::nullopt;
}

}  // namespace pec
