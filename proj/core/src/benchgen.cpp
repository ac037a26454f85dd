#include "pec/benchgen.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "pec/oracle.hpp"

namespace pec {

namespace {

/// Unbiased draw from [0, bound) that does not depend on the standard
/// library's distribution implementation.
std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

std::vector<Qubit> distinct(std::mt19937_64& rng, std::uint32_t count, std::uint32_t pool, Qubit offset) {
  std::vector<Qubit> all(pool);
  for (std::uint32_t i = 0; i < pool; ++i) all[i] = offset + i;
  // Partial Fisher-Yates.
  for (std::uint32_t i = 0; i < count; ++i) std::swap(all[i], all[i + draw(rng, pool - i)]);
  all.resize(count);
  return all;
}

/// Uniform gate from {H, S, T, CNOT, CCX} on qubits offset..offset+width−1,
/// skipping kinds that need more qubits than available.
Gate random_gate(std::mt19937_64& rng, std::uint32_t width, Qubit offset) {
  static constexpr GateKind kinds[] = {GateKind::H, GateKind::S, GateKind::T, GateKind::CNOT, GateKind::CCX};
  const std::size_t available = width >= 3 ? 5 : width == 2 ? 4 : 3;
  const GateKind kind = kinds[draw(rng, available)];
  const std::uint32_t arity = kind == GateKind::CCX ? 3 : kind == GateKind::CNOT ? 2 : 1;
  return Gate{kind, distinct(rng, arity, width, offset)};
}

std::vector<Gate> random_block(std::mt19937_64& rng, std::size_t count, std::uint32_t width, Qubit offset) {
  std::vector<Gate> gates;
  if (width == 0) return gates;
  gates.reserve(count);
  for (std::size_t i = 0; i < count; ++i) gates.push_back(random_gate(rng, width, offset));
  return gates;
}

std::vector<Gate> remap(const std::vector<Gate>& gates, Qubit offset) {
  std::vector<Gate> out = gates;
  for (Gate& g : out) {
    for (Qubit& q : g.qubits) q += offset;
  }
  return out;
}

/// Row-phase canonical form: each row scaled by the conjugate of its first
/// nonzero entry, rounded to a 1e−9 grid. Two unitaries share it when
/// U1 = D·U2 for a diagonal unitary D; grouping is confirmed exactly later.
std::vector<long long> row_phase_signature(const DenseMatrix& u) {
  const std::vector<std::complex<double>> values = u.to_complex();
  const std::size_t dim = u.dim();
  std::vector<long long> key;
  key.reserve(2 * values.size());
  for (std::size_t r = 0; r < dim; ++r) {
    std::size_t first = 0;
    while (u.raw(r, first).is_zero()) ++first;
    const std::complex<double> pivot = std::conj(values[r * dim + first]);
    for (std::size_t c = 0; c < dim; ++c) {
      const std::complex<double> v = pivot * values[r * dim + c];
      key.push_back(std::llround(v.real() * 1e9));
      key.push_back(std::llround(v.imag() * 1e9));
    }
  }
  return key;
}

void append(std::vector<Gate>& out, const std::vector<Gate>& gates) { out.insert(out.end(), gates.begin(), gates.end()); }

struct PairPools {
  std::vector<SubcircuitPair> one;
  std::vector<SubcircuitPair> two;
};

/// Shorter side first, as used by the P block.
const PairPools& pair_pools() {
  static const PairPools pools = [] {
    PairPools p;
    for (auto& pair : find_pe_subcircuit_pairs(1)) {
      if (pair.x1.size() <= pair.x2.size()) p.one.push_back(std::move(pair));
    }
    for (auto& pair : find_pe_subcircuit_pairs(2)) {
      if (pair.x1.size() <= pair.x2.size()) p.two.push_back(std::move(pair));
    }
    return p;
  }();
  return pools;
}

}  // namespace

std::uint32_t GenConfig::measured() const { return m.value_or(std::max<std::uint32_t>(1, d / 2)); }

std::uint32_t GenConfig::ancillas() const {
  if (!with_ancilla) return 0;
  return k.value_or(std::max<std::uint32_t>(1, (d + 9) / 10));
}

void GenConfig::validate() const {
  if (d == 0) throw std::invalid_argument("d must be positive");
  if (measured() == 0 || measured() > d) throw std::invalid_argument("m must satisfy 1 <= m <= d");
  if (with_ancilla && ancillas() == 0) throw std::invalid_argument("ancilla variant needs k >= 1");
}

std::vector<Gate> search_alphabet(std::uint32_t qubits) {
  if (qubits != 1 && qubits != 2) throw std::invalid_argument("search covers one or two qubits");
  std::vector<Gate> alphabet;
  for (Qubit q = 0; q < qubits; ++q) {
    for (const GateKind k : {GateKind::X, GateKind::Z, GateKind::H, GateKind::S, GateKind::T}) {
      alphabet.push_back(Gate{k, {q}});
    }
  }
  if (qubits == 2) {
    alphabet.push_back(Gate::cnot(0, 1));
    alphabet.push_back(Gate::cnot(1, 0));
  }
  return alphabet;
}

std::vector<SubcircuitPair> find_pe_subcircuit_pairs(std::uint32_t qubits, std::size_t max_total_gates) {
  const std::vector<Gate> alphabet = search_alphabet(qubits);

  // All sequences of length ≤ max_total_gates, shortest first.
  std::vector<std::vector<Gate>> sequences{{}};
  for (std::size_t begin = 0, len = 0; len < max_total_gates; ++len) {
    const std::size_t end = sequences.size();
    for (std::size_t i = begin; i < end; ++i) {
      for (const Gate& g : alphabet) {
        std::vector<Gate> s = sequences[i];
        s.push_back(g);
        sequences.push_back(std::move(s));
      }
    }
    begin = end;
  }

  std::map<std::vector<long long>, std::vector<std::size_t>> classes;
  for (std::size_t i = 0; i < sequences.size(); ++i) {
    classes[row_phase_signature(dense_unitary(qubits, sequences[i]))].push_back(i);
  }

  std::vector<std::pair<std::size_t, std::size_t>> index_pairs;
  for (const auto& [key, members] : classes) {
    // Members are in shortest-first order, so the inner scan can stop early.
    for (const std::size_t a : members) {
      for (const std::size_t b : members) {
        if (sequences[a].size() + sequences[b].size() > max_total_gates) break;
        if (a != b) index_pairs.emplace_back(a, b);
      }
    }
  }
  std::sort(index_pairs.begin(), index_pairs.end());

  std::vector<SubcircuitPair> out;
  out.reserve(index_pairs.size());
  for (const auto& [a, b] : index_pairs) {
    SubcircuitPair pair{qubits, sequences[a], sequences[b]};
    const Verdict v = theorem1_check(Circuit::all_data(qubits, pair.x1), Circuit::all_data(qubits, pair.x2));
    if (!v.equivalent) throw std::logic_error("row-phase grouping disagrees with the exact test");
    out.push_back(std::move(pair));
  }
  return out;
}

std::vector<Gate> toffoli_decomposition(Qubit a, Qubit b, Qubit c) {
  return {Gate::h(c),       Gate::cnot(b, c), Gate::tdg(c), Gate::cnot(a, c), Gate::t(c),
          Gate::cnot(b, c), Gate::tdg(c),     Gate::cnot(a, c), Gate::t(b),   Gate::t(c),
          Gate::h(c),       Gate::cnot(a, b), Gate::t(a),   Gate::tdg(b),     Gate::cnot(a, b)};
}

namespace {

struct Builder {
  std::vector<Gate> gates;
  PartBoundaries parts;

  GateRange add(const std::vector<Gate>& block) {
    GateRange r{gates.size(), 0};
    append(gates, block);
    r.end = gates.size();
    return r;
  }
};

std::vector<Gate> decompose_toffolis(const std::vector<Gate>& gates) {
  std::vector<Gate> out;
  for (const Gate& g : gates) {
    if (g.kind == GateKind::CCX) {
      append(out, toffoli_decomposition(g.qubits[0], g.qubits[1], g.qubits[2]));
    } else {
      out.push_back(g);
    }
  }
  return out;
}

/// Blocks H and T, shared by both generators.
void common_prefix(std::mt19937_64& rng, const GenConfig& cfg, Builder& b1, Builder& b2) {
  std::vector<Gate> h;
  for (Qubit q = 0; q < cfg.d; ++q) h.push_back(Gate::h(q));
  b1.parts.h = b1.add(h);
  b2.parts.h = b2.add(h);
  const std::vector<Gate> t = random_block(rng, cfg.part_t_gates.value_or(3 * std::size_t{cfg.d}), cfg.d, 0);
  b1.parts.t = b1.add(t);
  b2.parts.t = b2.add(decompose_toffolis(t));
}

}  // namespace

GeneratedPair gen_pe_pair(const GenConfig& cfg) {
  cfg.validate();
  const std::uint32_t d = cfg.d;
  const std::uint32_t m = cfg.measured();
  const std::uint32_t k = cfg.ancillas();
  std::mt19937_64 rng(cfg.seed);
  Builder b1, b2;
  common_prefix(rng, cfg, b1, b2);

  // P: adjacent groups of one or two data qubits, each given a PE pair.
  const PairPools& pools = pair_pools();
  std::vector<Gate> p1, p2;
  for (Qubit q = 0; q < d;) {
    const bool pair_group = q + 1 < d && draw(rng, 2) == 1;
    const auto& pool = pair_group ? pools.two : pools.one;
    const SubcircuitPair& chosen = pool[draw(rng, pool.size())];
    append(p1, remap(chosen.x1, q));
    append(p2, remap(chosen.x2, q));
    q += pair_group ? 2 : 1;
  }
  b1.parts.p = b1.add(p1);
  b2.parts.p = b2.add(p2);

  // A: independent blocks on the unmeasured data qubits.
  const std::size_t a_gates = cfg.part_a_gates.value_or(d - m);
  b1.parts.a = b1.add(random_block(rng, a_gates, d - m, m));
  b2.parts.a = b2.add(random_block(rng, a_gates, d - m, m));

  // C: one CNOT per ancilla, controlled by the ancilla.
  auto part_c = [&] {
    std::vector<Gate> c;
    for (Qubit a = d; a < d + k; ++a) c.push_back(Gate::cnot(a, static_cast<Qubit>(draw(rng, d))));
    return c;
  };
  b1.parts.c = b1.add(part_c());
  b2.parts.c = b2.add(part_c());

  GeneratedPair out{Circuit(d + k, std::move(b1.gates), d, m), Circuit(d + k, std::move(b2.gates), d, m), b1.parts,
                    b2.parts, false};
  return out;
}

GeneratedPair gen_te_pair(const GenConfig& cfg) {
  const std::uint32_t m = cfg.m.value_or(cfg.d);
  GenConfig c = cfg;
  c.m = m;
  c.with_ancilla = false;
  c.validate();
  std::mt19937_64 rng(cfg.seed);
  Builder b1, b2;
  common_prefix(rng, c, b1, b2);
  for (Builder* b : {&b1, &b2}) {
    const std::size_t end = b->gates.size();
    b->parts.p = b->parts.a = b->parts.c = GateRange{end, end};
  }
  return GeneratedPair{Circuit(c.d, std::move(b1.gates), c.d, m), Circuit(c.d, std::move(b2.gates), c.d, m), b1.parts,
                       b2.parts, true};
}

}  // namespace pec
