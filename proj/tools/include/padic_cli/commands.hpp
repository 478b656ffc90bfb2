#pragma once

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace padic::cli {

// 0 pass or computed, 1 falsified with a witness, 2 inconclusive or out of
// budget, 3 usage or spec error.
enum ExitCode { Pass = 0, Fail = 1, Inconclusive = 2, UsageError = 3 };

struct RunResult {
  nlohmann::ordered_json report;
  int exit_code = Pass;
  std::optional<std::string> json_out; // --json OUT
  std::string help;                    // set when --help was requested
};

// args excludes the program name.
RunResult run(const std::vector<std::string> &args);

// Reports are rendered with this; byte-stable for fixed inputs.
std::string render(const nlohmann::ordered_json &report);

} // namespace padic::cli
