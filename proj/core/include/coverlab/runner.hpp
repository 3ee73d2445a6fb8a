#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "coverlab/report.hpp"
#include "coverlab/scenario.hpp"

namespace coverlab {

inline constexpr const char* kToolVersion = "0.3.0";

/// Process exit statuses.
enum class ExitStatus : int { ok = 0, input_error = 1, audit_failure = 2, budget_exhausted = 3 };

std::string to_string(ExitStatus s);
/// Batch aggregation order: audit failure, then input error, then budget exhaustion.
ExitStatus worst(ExitStatus a, ExitStatus b);

struct RunOptions {
  std::optional<std::uint64_t> seed;
  /// Point budget for enumerations; defaults to $COVERLAB_BUDGET, then the library default.
  std::optional<std::size_t> budget;
  /// Overrides the scenario's window radius (and the Følner search radius).
  std::optional<int> radius;
  bool timing = false;
};

/// Value of COVERLAB_BUDGET if set. Throws InputError on a malformed value.
std::optional<std::size_t> budget_from_env();

struct RunResult {
  std::string name;
  std::string task;
  ExitStatus status = ExitStatus::ok;
  nlohmann::json report;
  CsvTable csv{{}};
  std::string outcome;
  std::string key_numbers;
};

/// CSV columns of a task's report.
std::vector<std::string> csv_columns(Task task);

RunResult run_scenario(const Scenario& scenario, const RunOptions& options = {});
/// Input errors become a result with status input_error instead of an exception.
RunResult run_file(const std::filesystem::path& path, const RunOptions& options = {});

/// Pretty JSON with a trailing newline; byte-identical for identical inputs.
std::string report_text(const RunResult& r);

struct BatchRow {
  std::string file;
  std::string name;
  std::string task;
  ExitStatus status = ExitStatus::ok;
  std::string outcome;
  std::string key_numbers;
};

struct BatchSummary {
  std::vector<BatchRow> rows;  ///< sorted by file name
  ExitStatus status = ExitStatus::ok;

  CsvTable table() const;
};

/// Runs every *.json scenario in `dir`. Throws InputError for an empty
/// directory or duplicate scenario names. Per-scenario reports go to `out`
/// as <name>.json and <name>.csv, with summary.csv alongside.
BatchSummary run_batch(const std::filesystem::path& dir, unsigned jobs,
                       const std::optional<std::filesystem::path>& out, const RunOptions& options = {});

}  // namespace coverlab
