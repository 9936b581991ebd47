#pragma once

// Command orchestration: validate -> endo -> wedderburn -> cone -> reduction
// -> pushdown, producing a JSON report, human text and an exit code.

#include "conecrafter/document.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace conecrafter {

enum ExitCode : int {
  kExitPass = 0,
  kExitValidation = 2,
  kExitTiling = 3,
  kExitParse = 4,
};

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<int> max_steps;
  std::optional<std::vector<Rational>> reduce_class;  // for "reduce"
};

struct CommandResult {
  nlohmann::ordered_json report;
  std::string text;
  int exit_code = kExitPass;
};

/// command is one of check, endo, cone, funddom, reduce, verify.
CommandResult run_command(const std::string& command, const ProblemDocument& doc,
                          const RunOptions& options);

/// Parses "[p/q, r, ...]".
std::vector<Rational> parse_class_list(const std::string& text);

}  // namespace conecrafter
