#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "pec/circuit.hpp"

namespace pec {

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

namespace {

enum class Tok { Ident, Integer, Real, String, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_space_and_comments();
    Token t;
    t.line = line_;
    t.column = column_;
    if (pos_ >= text_.size()) return t;
    const char ch = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      t.kind = Tok::Ident;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        t.text += advance();
      }
    } else if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
      t.kind = Tok::Integer;
      while (pos_ < text_.size() &&
             (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.' || text_[pos_] == 'e' ||
              text_[pos_] == 'E')) {
        if (!std::isdigit(static_cast<unsigned char>(text_[pos_]))) t.kind = Tok::Real;
        t.text += advance();
      }
    } else if (ch == '"') {
      t.kind = Tok::String;
      advance();
      while (pos_ < text_.size() && text_[pos_] != '"') t.text += advance();
      if (pos_ >= text_.size()) throw ParseError("unterminated string", t.line, t.column);
      advance();
    } else {
      t.kind = Tok::Punct;
      t.text = std::string(1, advance());
      if (t.text == "-" && pos_ < text_.size() && text_[pos_] == '>') t.text += advance();
    }
    return t;
  }

 private:
  char advance() {
    const char ch = text_[pos_++];
    if (ch == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return ch;
  }

  void skip_space_and_comments() {
    while (pos_ < text_.size()) {
      const char ch = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(ch))) {
        advance();
      } else if (text_.substr(pos_, 2) == "//") {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (text_.substr(pos_, 2) == "/*") {
        const std::size_t l = line_, c = column_;
        advance();
        advance();
        while (pos_ < text_.size() && text_.substr(pos_, 2) != "*/") advance();
        if (pos_ >= text_.size()) throw ParseError("unterminated comment", l, c);
        advance();
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

const std::unordered_map<std::string, GateKind>& gate_table() {
  static const std::unordered_map<std::string, GateKind> table{
      {"x", GateKind::X},     {"y", GateKind::Y},       {"z", GateKind::Z},   {"h", GateKind::H},
      {"s", GateKind::S},     {"sdg", GateKind::Sdg},   {"t", GateKind::T},   {"tdg", GateKind::Tdg},
      {"cx", GateKind::CNOT}, {"cz", GateKind::CZ},     {"swap", GateKind::Swap},
      {"ccx", GateKind::CCX}, {"mcx", GateKind::MCX},
  };
  return table;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : lexer_(text) { bump(); }

  Program parse() {
    if (is_ident("OPENQASM")) {
      bump();
      if (tok_.kind != Tok::Real && tok_.kind != Tok::Integer) fail("expected version number");
      if (tok_.text != "2.0" && tok_.text != "2") fail("unsupported OpenQASM version " + tok_.text);
      bump();
      expect(";");
    }
    while (tok_.kind != Tok::End) statement();
    if (!register_name_) throw ParseError("missing qreg declaration", tok_.line, tok_.column);
    return std::move(program_);
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, tok_.line, tok_.column); }
  [[noreturn]] void fail_at(const Token& t, const std::string& message) const {
    throw ParseError(message, t.line, t.column);
  }

  void bump() { tok_ = lexer_.next(); }
  bool is_ident(std::string_view name) const { return tok_.kind == Tok::Ident && tok_.text == name; }
  bool is_punct(std::string_view p) const { return tok_.kind == Tok::Punct && tok_.text == p; }

  void expect(std::string_view p) {
    if (!is_punct(p)) fail("expected '" + std::string(p) + "'" + (tok_.kind == Tok::End ? " before end of input" : ", found '" + tok_.text + "'"));
    bump();
  }

  std::uint64_t integer() {
    if (tok_.kind != Tok::Integer) fail("expected integer");
    const std::string text = tok_.text;
    if (text.size() > 9) fail("integer too large");
    bump();
    return std::stoull(text);
  }

  std::string identifier() {
    if (tok_.kind != Tok::Ident) fail("expected identifier");
    std::string name = tok_.text;
    bump();
    return name;
  }

  void statement() {
    const Token start = tok_;
    if (tok_.kind != Tok::Ident) fail("expected statement");
    if (start.text == "include") {
      bump();
      if (tok_.kind != Tok::String) fail("expected file name string");
      bump();
      expect(";");
      return;
    }
    if (start.text == "qreg") {
      if (register_name_) fail("only one qreg declaration is supported");
      bump();
      register_name_ = identifier();
      expect("[");
      const Token size_tok = tok_;
      const std::uint64_t size = integer();
      if (size == 0) fail_at(size_tok, "qreg must have at least one qubit");
      expect("]");
      expect(";");
      program_.qubits = static_cast<std::uint32_t>(size);
      return;
    }
    if (start.text == "creg" || start.text == "measure" || start.text == "if" || start.text == "gate" ||
        start.text == "opaque" || start.text == "reset" || start.text == "barrier") {
      fail("unsupported statement '" + start.text + "'");
    }

    const auto it = gate_table().find(start.text);
    if (it == gate_table().end()) fail("unknown gate '" + start.text + "'");
    bump();
    if (is_punct("(")) fail_at(start, "unknown gate '" + start.text + "(...)': parameterized gates are not supported");
    if (!register_name_) fail_at(start, "gate before qreg declaration");

    Gate g{it->second, {}};
    std::vector<Token> operand_tokens;
    do {
      if (!g.qubits.empty()) bump();  // consume ','
      operand_tokens.push_back(tok_);
      const std::string reg = identifier();
      if (reg != *register_name_) fail_at(operand_tokens.back(), "unknown register '" + reg + "'");
      expect("[");
      const std::uint64_t index = integer();
      expect("]");
      if (index >= program_.qubits) {
        fail_at(operand_tokens.back(), "operand " + reg + "[" + std::to_string(index) + "] out of range (qreg has " +
                                           std::to_string(program_.qubits) + " qubits)");
      }
      g.qubits.push_back(static_cast<Qubit>(index));
    } while (is_punct(","));
    expect(";");
    try {
      validate_gate(g, program_.qubits);
    } catch (const CircuitError& e) {
      fail_at(start, e.what());
    }
    program_.gates.push_back(std::move(g));
  }

  Lexer lexer_;
  Token tok_;
  std::optional<std::string> register_name_;
  Program program_;
};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

Program parse_program(std::string_view text) { return Parser(text).parse(); }

Circuit parse_circuit(std::string_view text, std::uint32_t data, std::uint32_t measured) {
  Program p = parse_program(text);
  return Circuit(p.qubits, std::move(p.gates), data, measured);
}

Program load_program(const std::filesystem::path& path) { return parse_program(read_file(path)); }

Circuit load_circuit(const std::filesystem::path& path, std::uint32_t data, std::uint32_t measured) {
  return parse_circuit(read_file(path), data, measured);
}

std::string to_qasm(std::uint32_t qubits, std::span<const Gate> gates) {
  std::ostringstream out;
  out << "OPENQASM 2.0;\nqreg q[" << qubits << "];\n";
  for (const Gate& g : gates) out << to_string(g) << ";\n";
  return out.str();
}

void save_circuit(const std::filesystem::path& path, const Circuit& c) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << to_qasm(c);
}

}  // namespace pec
