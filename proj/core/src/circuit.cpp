#include "pec/circuit.hpp"

#include <algorithm>
#include <sstream>

namespace pec {

std::string_view gate_name(GateKind kind) noexcept {
  switch (kind) {
    case GateKind::X: return "x";
    case GateKind::Y: return "y";
    case GateKind::Z: return "z";
    case GateKind::H: return "h";
    case GateKind::S: return "s";
    case GateKind::Sdg: return "sdg";
    case GateKind::T: return "t";
    case GateKind::Tdg: return "tdg";
    case GateKind::CNOT: return "cx";
    case GateKind::CZ: return "cz";
    case GateKind::Swap: return "swap";
    case GateKind::CCX: return "ccx";
    case GateKind::MCX: return "mcx";
  }
  return "?";
}

std::string to_string(const Gate& g) {
  std::ostringstream s;
  s << gate_name(g.kind);
  for (std::size_t i = 0; i < g.qubits.size(); ++i) s << (i ? "," : " ") << "q[" << g.qubits[i] << "]";
  return s.str();
}

void validate_gate(const Gate& g, std::uint32_t qubit_count) {
  std::size_t expected = 0;
  switch (g.kind) {
    case GateKind::CNOT:
    case GateKind::CZ:
    case GateKind::Swap: expected = 2; break;
    case GateKind::CCX: expected = 3; break;
    case GateKind::MCX: expected = 0; break;
    default: expected = 1; break;
  }
  if (expected != 0 && g.qubits.size() != expected) {
    throw CircuitError(std::string(gate_name(g.kind)) + " takes " + std::to_string(expected) + " operand(s)");
  }
  if (g.kind == GateKind::MCX && g.qubits.size() < 2) {
    throw CircuitError("mcx needs at least one control and a target");
  }
  for (std::size_t i = 0; i < g.qubits.size(); ++i) {
    if (g.qubits[i] >= qubit_count) {
      throw CircuitError("operand q[" + std::to_string(g.qubits[i]) + "] out of range for " +
                         std::to_string(qubit_count) + " qubits");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (g.qubits[i] == g.qubits[j]) throw CircuitError("duplicate operand in " + to_string(g));
    }
  }
}

Gate inverse(const Gate& g) {
  Gate r = g;
  switch (g.kind) {
    case GateKind::S: r.kind = GateKind::Sdg; break;
    case GateKind::Sdg: r.kind = GateKind::S; break;
    case GateKind::T: r.kind = GateKind::Tdg; break;
    case GateKind::Tdg: r.kind = GateKind::T; break;
    default: break;  // the remaining gates are self-inverse
  }
  return r;
}

Circuit::Circuit(std::uint32_t qubits, std::vector<Gate> gates, std::uint32_t data, std::uint32_t measured)
    : qubits_(qubits), gates_(std::move(gates)) {
  if (data > qubits) {
    throw CircuitError("data-qubit count " + std::to_string(data) + " exceeds " + std::to_string(qubits) + " qubits");
  }
  if (measured < 1 || measured > qubits) {
    throw CircuitError("measured-qubit count must be in [1, " + std::to_string(qubits) + "], got " +
                       std::to_string(measured));
  }
  roles_ = QubitRoles{data, measured, qubits - data};
  for (const Gate& g : gates_) validate_gate(g, qubits_);
}

Circuit Circuit::all_data(std::uint32_t qubits, std::vector<Gate> gates) {
  return Circuit(qubits, std::move(gates), qubits, qubits);
}

Circuit Circuit::with_roles(std::uint32_t data, std::uint32_t measured) const {
  return Circuit(qubits_, gates_, data, measured);
}

Circuit invert(const Circuit& c) {
  std::vector<Gate> gates;
  gates.reserve(c.gate_count());
  for (auto it = c.gates().rbegin(); it != c.gates().rend(); ++it) gates.push_back(inverse(*it));
  return Circuit(c.qubits(), std::move(gates), c.data_qubits(), c.measured_qubits());
}

Circuit pad_ancillas(const Circuit& c, std::uint32_t extra) {
  return Circuit(c.qubits() + extra, c.gates(), c.data_qubits(), c.measured_qubits());
}

Circuit concatenate(const Circuit& first, const Circuit& second) {
  if (first.qubits() != second.qubits()) throw CircuitError("concatenate: register sizes differ");
  std::vector<Gate> gates = first.gates();
  gates.insert(gates.end(), second.gates().begin(), second.gates().end());
  return Circuit(first.qubits(), std::move(gates), first.data_qubits(), first.measured_qubits());
}

std::pair<Circuit, Circuit> harmonize(const Circuit& a, const Circuit& b) {
  if (a.data_qubits() != b.data_qubits() || a.measured_qubits() != b.measured_qubits()) {
    throw CircuitError("circuits disagree on data/measured qubit counts");
  }
  const std::uint32_t n = std::max(a.qubits(), b.qubits());
  return {pad_ancillas(a, n - a.qubits()), pad_ancillas(b, n - b.qubits())};
}

}  // namespace pec
