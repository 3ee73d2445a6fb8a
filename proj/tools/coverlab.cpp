// coverlab: run scenario files and write JSON/CSV reports.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "coverlab/errors.hpp"
#include "coverlab/runner.hpp"

namespace {

int write_output(const std::optional<std::string>& out, const std::string& text) {
  if (!out) {
    std::cout << text;
    return 0;
  }
  std::ofstream f(*out, std::ios::binary);
  if (!f) {
    std::cerr << "error: cannot write " << *out << "\n";
    return static_cast<int>(coverlab::ExitStatus::input_error);
  }
  f << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral positivity under graph coverings: scenario runner"};
  app.set_version_flag("--version", std::string(coverlab::kToolVersion));
  app.require_subcommand(1);

  coverlab::RunOptions opts;
  std::string path;
  std::optional<std::string> out;
  std::string format = "json";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> budget;
  std::optional<int> radius;
  bool timing = false;

  auto* run = app.add_subcommand("run", "Run one scenario file");
  run->add_option("path", path, "Scenario file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out, "Write the report here instead of stdout");
  run->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  run->add_option("--seed", seed, "Seed recorded in the report");
  run->add_option("--budget", budget, "Point budget for enumerations (default $COVERLAB_BUDGET or 1000000)")
      ->check(CLI::PositiveNumber);
  run->add_option("--radius", radius, "Override the window / search radius")->check(CLI::NonNegativeNumber);
  run->add_flag("--timing", timing, "Include wall-clock timing in the JSON report");

  std::string dir;
  std::optional<std::string> out_dir;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  auto* batch = app.add_subcommand("batch", "Run every *.json scenario in a directory");
  batch->add_option("dir", dir, "Scenario directory")->required();
  batch->add_option("--jobs", jobs, "Scenarios run concurrently")->check(CLI::PositiveNumber);
  batch->add_option("--out", out_dir, "Directory for per-scenario reports and summary.csv");
  batch->add_option("--seed", seed, "Seed recorded in every report");
  batch->add_option("--budget", budget, "Point budget for enumerations")->check(CLI::PositiveNumber);
  batch->add_flag("--timing", timing, "Include wall-clock timing in the JSON reports");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(coverlab::ExitStatus::input_error);
  }

  opts.seed = seed;
  opts.budget = budget;
  opts.radius = radius;
  opts.timing = timing;

  try {
    if (*run) {
      const auto r = coverlab::run_file(path, opts);
      if (r.status == coverlab::ExitStatus::input_error) std::cerr << "error: " << r.key_numbers << "\n";
      const int w = write_output(out, format == "csv" ? r.csv.str() : coverlab::report_text(r));
      return w != 0 ? w : static_cast<int>(r.status);
    }
    const auto summary =
        coverlab::run_batch(dir, jobs, out_dir ? std::optional<std::filesystem::path>(*out_dir) : std::nullopt, opts);
    std::cout << summary.table().str();
    return static_cast<int>(summary.status);
  } catch (const coverlab::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(coverlab::ExitStatus::input_error);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(coverlab::ExitStatus::audit_failure);
  }
}
