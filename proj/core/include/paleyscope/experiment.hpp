#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "paleyscope/config.hpp"
#include "paleyscope/report.hpp"

namespace paleyscope {

struct CheckResult {
  std::string name;
  bool pass = true;
  std::string detail;
};

struct SuiteResult {
  std::string suite;
  nlohmann::json report;          // without the "checks"/"status" keys
  std::optional<CsvTable> csv;
  std::vector<CheckResult> checks;

  bool failed() const;
  /// report plus "checks" and "status".
  nlohmann::json full_report() const;
};

/// Runs the configured suite. Numerical failures inside one item become
/// failed checks; ConfigError propagates.
SuiteResult run_suite(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                      std::ostream& log);

/// Writes <out_dir>/<stem>.json (and .csv when the suite has a table), where
/// stem is cfg.report_name or the suite name. Returns 0 if every asserted
/// check passed and 1 otherwise.
int run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                   std::ostream& log);

}  // namespace paleyscope
