#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "pec/bdd.hpp"
#include "pec/benchgen.hpp"
#include "pec/checker.hpp"

namespace pec::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string verdict_word(const Verdict& v) {
  if (!v.conclusive) return "inconclusive";
  return v.equivalent ? "equivalent" : "not_equivalent";
}

int exit_code(const Verdict& v) {
  if (!v.conclusive) return kInconclusive;
  return v.equivalent ? kEquivalent : kNotEquivalent;
}

json range_json(const GateRange& r) { return json::array({r.begin, r.end}); }

json parts_json(const PartBoundaries& p) {
  return {{"H", range_json(p.h)}, {"T", range_json(p.t)}, {"P", range_json(p.p)},
          {"A", range_json(p.a)}, {"C", range_json(p.c)}};
}

void write_json(const std::string& where, const json& j, std::ostream& out) {
  if (where == "-") {
    out << j.dump(2) << '\n';
    return;
  }
  std::ofstream f(where);
  if (!f) throw std::runtime_error("cannot write " + where);
  f << j.dump(2) << '\n';
}

struct CheckArgs {
  std::string c1, c2;
  std::uint32_t d = 0;
  std::uint32_t m = 0;
  std::string algorithm = "auto";
  std::string json_out;
  double timeout = 600.0;
  bool witness = false;
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
};

int cmd_check(const CheckArgs& a, std::ostream& out, std::ostream& err) {
  const std::optional<CheckMode> mode = parse_mode(a.algorithm);
  if (!mode) {
    err << "unknown algorithm: " << a.algorithm << '\n';
    return kUsage;
  }
  std::optional<Circuit> c1, c2;
  try {
    c1 = load_circuit(a.c1, a.d, a.m);
    c2 = load_circuit(a.c2, a.d, a.m);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  CheckOptions options;
  options.timeout_seconds = a.timeout;
  options.witness = a.witness;
  options.samples = a.samples;
  options.seed = a.seed;
  Verdict v;
  try {
    v = check(*c1, *c2, *mode, options);
  } catch (const TimeoutError& e) {
    err << "timeout: " << e.what() << '\n';
    return kResource;
  } catch (const ResourceLimitError& e) {
    err << "resource limit: " << e.what() << '\n';
    return kResource;
  } catch (const CircuitError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  out << verdict_word(v) << " (" << algorithm_name(v.algorithm) << ", " << std::fixed << std::setprecision(3)
      << v.stats.seconds << " s, peak " << v.stats.peak_nodes << " nodes)\n";
  out.unsetf(std::ios::fixed);
  if (!v.detail.empty()) out << "  " << v.detail << '\n';
  if (v.counterexample) {
    out << "  outcome " << v.counterexample->outcome << ": " << v.counterexample->p1 << " vs "
        << v.counterexample->p2 << '\n';
  }
  if (!a.json_out.empty()) {
    try {
      write_json(a.json_out, make_report(v, *c1, *c2), out);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return kUsage;
    }
  }
  return exit_code(v);
}

struct GenArgs {
  std::string kind = "pe";
  std::uint32_t d = 0;
  std::optional<std::uint32_t> m;
  std::optional<std::uint32_t> k;
  bool ancilla = false;
  std::uint64_t seed = 1;
  std::string out_dir;
};

int cmd_gen(const GenArgs& a, std::ostream& out, std::ostream& err) {
  if (a.kind != "pe" && a.kind != "te") {
    err << "kind must be pe or te\n";
    return kUsage;
  }
  GenConfig cfg;
  cfg.d = a.d;
  cfg.m = a.m;
  cfg.k = a.k;
  cfg.with_ancilla = a.ancilla;
  cfg.seed = a.seed;
  std::optional<GeneratedPair> generated;
  try {
    if (a.kind == "te" && a.ancilla) throw std::invalid_argument("te pairs have no ancillas");
    generated = a.kind == "pe" ? gen_pe_pair(cfg) : gen_te_pair(cfg);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  const GeneratedPair& pair = *generated;

  std::error_code ec;
  fs::create_directories(a.out_dir, ec);
  const fs::path dir(a.out_dir);
  try {
    save_circuit(dir / "c1.qasm", pair.c1);
    save_circuit(dir / "c2.qasm", pair.c2);
    const json manifest = {
        {"kind", a.kind},
        {"d", pair.c1.data_qubits()},
        {"m", pair.c1.measured_qubits()},
        {"k", pair.c1.ancilla_qubits()},
        {"n", pair.c1.qubits()},
        {"seed", a.seed},
        {"expected_verdict", "equivalent"},
        {"totally_equivalent", pair.totally_equivalent},
        {"gates_c1", pair.c1.gate_count()},
        {"gates_c2", pair.c2.gate_count()},
        {"parts_c1", parts_json(pair.parts1)},
        {"parts_c2", parts_json(pair.parts2)},
    };
    write_json((dir / "manifest.json").string(), manifest, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  out << "wrote " << (dir / "c1.qasm").string() << ", " << (dir / "c2.qasm").string() << " and manifest.json ("
      << pair.c1.gate_count() << "/" << pair.c2.gate_count() << " gates)\n";
  return kEquivalent;
}

struct BenchArgs {
  std::string d_list;
  std::size_t groups = 20;
  double timeout = 600.0;
  std::string csv;
  bool ancilla = false;
  std::string algorithm = "auto";
  std::uint64_t seed = 1;
};

std::optional<std::vector<std::uint32_t>> parse_list(const std::string& text) {
  std::vector<std::uint32_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long v = std::stol(item, &used);
      if (used != item.size() || v <= 0) return std::nullopt;
      out.push_back(static_cast<std::uint32_t>(v));
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
  if (out.empty()) return std::nullopt;
  return out;
}

int cmd_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
  const auto ds = parse_list(a.d_list);
  if (!ds) {
    err << "bad --d-list: " << a.d_list << '\n';
    return kUsage;
  }
  const std::optional<CheckMode> mode = parse_mode(a.algorithm);
  if (!mode || *mode == CheckMode::MonteCarlo) {
    err << "bench needs a deciding algorithm, got " << a.algorithm << '\n';
    return kUsage;
  }
  if (a.groups == 0) {
    err << "--groups must be positive\n";
    return kUsage;
  }

  std::ostringstream csv;
  csv << "d,m,gates_c1,gates_c2,time_s,peak_nodes,timeouts\n";
  out << std::setw(4) << "d" << std::setw(4) << "m" << std::setw(10) << "gates_c1" << std::setw(10) << "gates_c2"
      << std::setw(12) << "time_s" << std::setw(12) << "peak_nodes" << std::setw(6) << "TO" << '\n';
  bool unsound = false;
  for (const std::uint32_t d : *ds) {
    GenConfig cfg;
    cfg.d = d;
    cfg.with_ancilla = a.ancilla;
    double gates1 = 0, gates2 = 0, seconds = 0, peak = 0;
    std::size_t done = 0, timeouts = 0;
    for (std::size_t g = 0; g < a.groups; ++g) {
      cfg.seed = a.seed + g;
      std::optional<GeneratedPair> generated;
      try {
        generated = gen_pe_pair(cfg);
      } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
      }
      const GeneratedPair& pair = *generated;
      gates1 += static_cast<double>(pair.c1.gate_count());
      gates2 += static_cast<double>(pair.c2.gate_count());
      CheckOptions options;
      options.timeout_seconds = a.timeout;
      try {
        const Verdict v = check(pair.c1, pair.c2, *mode, options);
        if (!v.equivalent) {
          unsound = true;
          err << "d=" << d << " seed=" << cfg.seed << ": generated pair judged not equivalent\n";
        }
        seconds += v.stats.seconds;
        peak += static_cast<double>(v.stats.peak_nodes);
        ++done;
      } catch (const TimeoutError&) {
        ++timeouts;
      } catch (const ResourceLimitError&) {
        ++timeouts;
      }
    }
    const double n = static_cast<double>(a.groups);
    std::ostringstream time_cell, peak_cell;
    if (done > 0) {
      time_cell << std::fixed << std::setprecision(4) << seconds / static_cast<double>(done);
      peak_cell << std::fixed << std::setprecision(0) << peak / static_cast<double>(done);
    } else {
      time_cell << "TO";
      peak_cell << "TO";
    }
    csv << d << ',' << cfg.measured() << ',' << gates1 / n << ',' << gates2 / n << ',' << time_cell.str() << ','
        << peak_cell.str() << ',' << timeouts << '\n';
    out << std::setw(4) << d << std::setw(4) << cfg.measured() << std::setw(10) << gates1 / n << std::setw(10)
        << gates2 / n << std::setw(12) << time_cell.str() << std::setw(12) << peak_cell.str() << std::setw(6)
        << timeouts << '\n';
  }
  if (!a.csv.empty()) {
    std::ofstream f(a.csv);
    if (!f) {
      err << "cannot write " << a.csv << '\n';
      return kUsage;
    }
    f << csv.str();
  }
  return unsound ? kNotEquivalent : kEquivalent;
}

}  // namespace

json make_report(const Verdict& v, const Circuit& c1, const Circuit& c2) {
  const auto [a, b] = harmonize(c1, c2);
  json report = {
      {"verdict", verdict_word(v)},
      {"algorithm", std::string(algorithm_name(v.algorithm))},
      {"circuits",
       {{"n", a.qubits()},
        {"d", a.data_qubits()},
        {"m", a.measured_qubits()},
        {"k", a.ancilla_qubits()},
        {"gates_c1", c1.gate_count()},
        {"gates_c2", c2.gate_count()}}},
      {"time_s", v.stats.seconds},
      {"peak_bdd_nodes", v.stats.peak_nodes},
      {"max_slice_width", v.stats.max_slice_width},
      {"counterexample", nullptr},
  };
  if (!v.detail.empty()) report["detail"] = v.detail;
  if (v.counterexample) {
    json psi = json::array();
    for (const auto& z : v.counterexample->psi) psi.push_back({z.real(), z.imag()});
    report["counterexample"] = {{"psi", psi},
                                {"outcome", v.counterexample->outcome},
                                {"p1", v.counterexample->p1},
                                {"p2", v.counterexample->p2}};
  }
  return report;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Partial equivalence checking of quantum circuits", "pec"};
  app.require_subcommand(1);

  CheckArgs ca;
  CLI::App* check_cmd = app.add_subcommand("check", "Decide whether two circuits are partially equivalent");
  check_cmd->add_option("--c1", ca.c1, "First circuit (OpenQASM 2.0 subset)")->required()->check(CLI::ExistingFile);
  check_cmd->add_option("--c2", ca.c2, "Second circuit")->required()->check(CLI::ExistingFile);
  check_cmd->add_option("-d,--data-qubits", ca.d, "Data qubits q0..q(d-1)")->required();
  check_cmd->add_option("-m,--measured-qubits", ca.m, "Measured qubits q0..q(m-1)")->required();
  check_cmd->add_option("-a,--algorithm", ca.algorithm, "auto, general, zero-ancilla, total, dense or monte-carlo");
  check_cmd->add_option("--json", ca.json_out, "Write a JSON report here ('-' for stdout)");
  check_cmd->add_option("--timeout", ca.timeout, "Seconds before giving up (exit 3)");
  check_cmd->add_flag("--witness", ca.witness, "Search a counterexample state when not equivalent");
  check_cmd->add_option("--samples", ca.samples, "Samples for monte-carlo");
  check_cmd->add_option("--seed", ca.seed, "Seed for sampling");

  GenArgs ga;
  CLI::App* gen_cmd = app.add_subcommand("gen", "Generate a benchmark circuit pair");
  gen_cmd->add_option("kind_pos", ga.kind, "pe or te")->check(CLI::IsMember({"pe", "te"}));
  gen_cmd->add_option("--kind", ga.kind, "pe (partially) or te (totally equivalent)")
      ->check(CLI::IsMember({"pe", "te"}));
  gen_cmd->add_option("--d", ga.d, "Data qubits")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--m", ga.m, "Measured qubits");
  gen_cmd->add_option("--k", ga.k, "Ancillas for --ancilla");
  gen_cmd->add_flag("--ancilla", ga.ancilla, "Add ancillas and the CNOT block");
  gen_cmd->add_option("--seed", ga.seed, "RNG seed");
  gen_cmd->add_option("--out", ga.out_dir, "Output directory")->required();

  BenchArgs ba;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Generate and check pairs, one table row per d");
  bench_cmd->add_option("--d-list", ba.d_list, "Comma-separated data-qubit counts")->required();
  bench_cmd->add_option("--groups", ba.groups, "Pairs per d");
  bench_cmd->add_option("--timeout-secs", ba.timeout, "Per-check limit; exceeding it counts as TO");
  bench_cmd->add_option("--csv", ba.csv, "Write the table as CSV");
  bench_cmd->add_flag("--ancilla", ba.ancilla, "Use the variant with ancillas");
  bench_cmd->add_option("-a,--algorithm", ba.algorithm, "Checker mode");
  bench_cmd->add_option("--seed", ba.seed, "First seed");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kUsage;
  }

  if (*check_cmd) return cmd_check(ca, out, err);
  if (*gen_cmd) return cmd_gen(ga, out, err);
  return cmd_bench(ba, out, err);
}

}  // namespace pec::cli
