#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "pec/circuit.hpp"
#include "pec/verdict.hpp"

namespace pec::cli {

enum ExitCode : int {
  kEquivalent = 0,
  kNotEquivalent = 1,
  kUsage = 2,
  kResource = 3,
  kInconclusive = 4,
};

/// JSON report of one check. `verdict` is "equivalent", "not_equivalent" or
/// "inconclusive".
nlohmann::json make_report(const Verdict& v, const Circuit& c1, const Circuit& c2);

/// args excludes the program name. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pec::cli
