#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nlheat {

struct RunOptions {
  std::filesystem::path config;
  std::filesystem::path out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
};

/// exit_code: 0 all non-skipped checks pass, 1 a check failed, 2 configuration
/// error (message carries the line and column), 3 solver failure.
struct RunOutcome {
  int exit_code = 0;
  std::string message;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t skipped = 0;
};

inline constexpr int kReportSchemaVersion = 1;

/// Parses the JSON scenario, solves, audits and writes report.json,
/// fields.csv and constants_vs_h.csv into out_dir.
RunOutcome run_scenario(const RunOptions& options);

/// Audit names accepted in a scenario's "audits" list with the check ids
/// each one emits.
std::vector<std::pair<std::string, std::vector<std::string>>> scenario_checks();

}  // namespace nlheat
