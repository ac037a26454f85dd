#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pec {

using Qubit = std::uint32_t;

enum class GateKind { X, Y, Z, H, S, Sdg, T, Tdg, CNOT, CZ, Swap, CCX, MCX };

/// Lower-case mnemonic used by the circuit file format.
std::string_view gate_name(GateKind kind) noexcept;

struct Gate {
  GateKind kind = GateKind::X;
  /// Controls first, target last. SWAP and CZ are symmetric.
  std::vector<Qubit> qubits;

  Qubit target() const { return qubits.back(); }
  std::span<const Qubit> controls() const { return std::span<const Qubit>(qubits).first(qubits.size() - 1); }

  friend bool operator==(const Gate&, const Gate&) = default;

  static Gate x(Qubit q) { return {GateKind::X, {q}}; }
  static Gate y(Qubit q) { return {GateKind::Y, {q}}; }
  static Gate z(Qubit q) { return {GateKind::Z, {q}}; }
  static Gate h(Qubit q) { return {GateKind::H, {q}}; }
  static Gate s(Qubit q) { return {GateKind::S, {q}}; }
  static Gate sdg(Qubit q) { return {GateKind::Sdg, {q}}; }
  static Gate t(Qubit q) { return {GateKind::T, {q}}; }
  static Gate tdg(Qubit q) { return {GateKind::Tdg, {q}}; }
  static Gate cnot(Qubit c, Qubit t) { return {GateKind::CNOT, {c, t}}; }
  static Gate cz(Qubit a, Qubit b) { return {GateKind::CZ, {a, b}}; }
  static Gate swap(Qubit a, Qubit b) { return {GateKind::Swap, {a, b}}; }
  static Gate ccx(Qubit c0, Qubit c1, Qubit t) { return {GateKind::CCX, {c0, c1, t}}; }
  static Gate mcx(std::vector<Qubit> controls_then_target) { return {GateKind::MCX, std::move(controls_then_target)}; }
};

std::string to_string(const Gate& g);

/// Throws CircuitError when the operand count or distinctness is wrong.
void validate_gate(const Gate& g, std::uint32_t qubit_count);

Gate inverse(const Gate& g);

class CircuitError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Qubit roles of C = (d, m, k, U): q0..q(d-1) are data qubits, the rest are
/// ancillas starting in |0⟩, and q0..q(m-1) are measured. q0 is the most
/// significant bit of a basis-state index.
struct QubitRoles {
  std::uint32_t data = 0;
  std::uint32_t measured = 0;
  std::uint32_t ancilla = 0;

  std::uint32_t qubits() const noexcept { return data + ancilla; }
  friend bool operator==(const QubitRoles&, const QubitRoles&) = default;
};

/// Immutable gate list plus its qubit-role header.
class Circuit {
 public:
  /// k = qubits - data. Requires data <= qubits and 1 <= measured <= qubits.
  Circuit(std::uint32_t qubits, std::vector<Gate> gates, std::uint32_t data, std::uint32_t measured);

  /// Every qubit is data and measured.
  static Circuit all_data(std::uint32_t qubits, std::vector<Gate> gates);

  std::uint32_t qubits() const noexcept { return qubits_; }
  std::uint32_t data_qubits() const noexcept { return roles_.data; }
  std::uint32_t measured_qubits() const noexcept { return roles_.measured; }
  std::uint32_t ancilla_qubits() const noexcept { return roles_.ancilla; }
  const QubitRoles& roles() const noexcept { return roles_; }
  const std::vector<Gate>& gates() const noexcept { return gates_; }
  std::size_t gate_count() const noexcept { return gates_.size(); }

  Circuit with_roles(std::uint32_t data, std::uint32_t measured) const;

  friend bool operator==(const Circuit&, const Circuit&) = default;

 private:
  std::uint32_t qubits_ = 0;
  std::vector<Gate> gates_;
  QubitRoles roles_;
};

/// Gates reversed, each replaced by its inverse.
Circuit invert(const Circuit& c);

/// Appends `extra` idle ancillas after the existing qubits.
Circuit pad_ancillas(const Circuit& c, std::uint32_t extra);

/// Gates of `first` followed by gates of `second` on the same register.
Circuit concatenate(const Circuit& first, const Circuit& second);

/// Pads the narrower circuit with idle ancillas so both share (d, m, k).
/// Throws CircuitError when the data or measured counts differ.
std::pair<Circuit, Circuit> harmonize(const Circuit& a, const Circuit& b);

// ---------------------------------------------------------------------------
// Circuit file format: an OpenQASM 2.0 subset. One qreg, gates from
// {x,y,z,h,s,sdg,t,tdg,cx,cz,swap,ccx,mcx}. File index i is qubit q_i.

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column);
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

struct Program {
  std::uint32_t qubits = 0;
  std::vector<Gate> gates;
};

Program parse_program(std::string_view text);
Circuit parse_circuit(std::string_view text, std::uint32_t data, std::uint32_t measured);
Circuit load_circuit(const std::filesystem::path& path, std::uint32_t data, std::uint32_t measured);
/// Data and measured counts default to "all qubits" when omitted.
Program load_program(const std::filesystem::path& path);

std::string to_qasm(std::uint32_t qubits, std::span<const Gate> gates);
inline std::string to_qasm(const Circuit& c) { return to_qasm(c.qubits(), c.gates()); }
void save_circuit(const std::filesystem::path& path, const Circuit& c);

}  // namespace pec
