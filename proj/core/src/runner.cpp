#include "coverlab/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "coverlab/errors.hpp"
#include "coverlab/spectrum.hpp"
#include "coverlab/transfer.hpp"

namespace coverlab {

using nlohmann::json;

std::string to_string(ExitStatus s) {
  switch (s) {
    case ExitStatus::ok: return "ok";
    case ExitStatus::input_error: return "input_error";
    case ExitStatus::audit_failure: return "audit_failure";
    case ExitStatus::budget_exhausted: return "budget_exhausted";
  }
  return "unknown";
}

namespace {

int severity(ExitStatus s) {
  switch (s) {
    case ExitStatus::audit_failure: return 3;
    case ExitStatus::input_error: return 2;
    case ExitStatus::budget_exhausted: return 1;
    case ExitStatus::ok: return 0;
  }
  return 0;
}

}  // namespace

ExitStatus worst(ExitStatus a, ExitStatus b) { return severity(a) >= severity(b) ? a : b; }

std::optional<std::size_t> budget_from_env() {
  const char* v = std::getenv("COVERLAB_BUDGET");
  if (v == nullptr || *v == '\0') return std::nullopt;
  char* end = nullptr;
  const unsigned long long n = std::strtoull(v, &end, 10);
  if (*end != '\0' || n == 0) throw InputError("COVERLAB_BUDGET", std::string("'") + v + "' is not a positive integer");
  return static_cast<std::size_t>(n);
}

std::vector<std::string> csv_columns(Task task) {
  switch (task) {
    case Task::folner:
      return {"scenario", "epsilon", "found", "set_size", "max_ratio", "boundary_ratio", "radius_reached",
              "sets_examined", "best_ratio_found"};
    case Task::spectrum: return {"scenario", "kind", "a", "radius", "value", "residual", "method"};
    case Task::interval:
      return {"scenario", "a", "lambda_min_base", "base_class", "radius", "window_value", "cover_class", "lower",
              "upper", "endpoint_tolerance"};
    case Task::transfer:
      return {"scenario", "a", "lambda_min_base", "r_star", "epsilon_used", "b", "c", "Q_cover", "final_bound",
              "outcome"};
    case Task::counterexample:
      return {"scenario", "a", "lambda_min_base", "radius", "window_value", "r_star", "best_collar_ratio", "outcome"};
    case Task::corollary:
      return {"scenario", "a", "lambda_min", "constant_rayleigh", "lower", "upper", "endpoint_tolerance", "passed"};
  }
  return {};
}

namespace {

constexpr double kWindowSlack = 1e-9;

struct Context {
  const Scenario& sc;
  SearchBudget budget;
  DirichletOptions windows;
  std::vector<int> radii;
  ExitStatus status = ExitStatus::ok;
  json outcome = json::object();
  CsvTable csv;
  std::string summary;
  std::string keys;

  void flag(ExitStatus s) { status = worst(status, s); }
};

std::string fmt(double x) { return format_real(x); }

/// 0, 1, 2, 4, … below R, then R.
std::vector<int> window_ladder(int R) {
  std::vector<int> out;
  for (int r = 0; r < R; r = r == 0 ? 1 : 2 * r) out.push_back(r);
  out.push_back(R);
  return out;
}

bool amenable_by_construction(const GroupAction& a) {
  return a.kind() == ActionKind::lattice || a.kind() == ActionKind::finite_permutation;
}

void check_monotone(const std::vector<DirichletValue>& seq) {
  std::vector<DirichletValue> sorted = seq;
  std::sort(sorted.begin(), sorted.end(), [](const auto& x, const auto& y) { return x.radius < y.radius; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].value > sorted[i - 1].value + kWindowSlack * std::max(1.0, std::abs(sorted[i - 1].value))) {
      throw AuditFailure("Dirichlet values increase from radius " + std::to_string(sorted[i - 1].radius) + " to " +
                         std::to_string(sorted[i].radius));
    }
  }
}

void run_folner(Context& cx) {
  const auto& action = *cx.sc.action;
  const auto seq = folner_sequence(action, cx.sc.params.epsilons, cx.budget);
  json entries = json::array();
  const auto& eps = cx.sc.params.epsilons;
  for (std::size_t i = 0; i < seq.certificates.size(); ++i) {
    const auto& c = seq.certificates[i];
    verify_certificate(action, c.points, c.epsilon);
    // ♯∂E/♯E ≤ n·ε for a certified set.
    if (Rational(action.generator_count()) * c.epsilon < c.boundary_ratio) {
      throw AuditFailure("boundary ratio " + c.boundary_ratio.str() + " exceeds n*epsilon");
    }
    entries.push_back({{"epsilon", rational_json(c.epsilon)},
                       {"found", true},
                       {"set_size", c.size()},
                       {"max_ratio", rational_json(c.max_ratio())},
                       {"boundary_ratio", rational_json(c.boundary_ratio)},
                       {"certificate", certificate_to_json(c)}});
    cx.csv.add_row({cx.sc.name, c.epsilon.str(), "true", std::to_string(c.size()), c.max_ratio().str(),
                    c.boundary_ratio.str(), "", "", ""});
    cx.keys += (cx.keys.empty() ? "" : " ") + ("eps=" + c.epsilon.str() + ":|E|=" + std::to_string(c.size()));
  }
  if (seq.truncated_by) {
    const auto& ex = *seq.truncated_by;
    const auto& e = eps[seq.certificates.size()];
    entries.push_back({{"epsilon", rational_json(e)}, {"found", false}, {"exhaustion", to_json(ex)}});
    cx.csv.add_row({cx.sc.name, e.str(), "false", "", "", "", std::to_string(ex.radius_reached),
                    std::to_string(ex.sets_examined), ex.best_ratio_found.str()});
    cx.keys += (cx.keys.empty() ? "" : " ") + ("eps=" + e.str() + ":best=" + ex.best_ratio_found.str());
    cx.flag(ExitStatus::budget_exhausted);
    cx.summary = seq.certificates.empty() ? "exhausted: " + ex.message() : "truncated: " + ex.message();
  } else {
    cx.summary = "certified";
  }
  cx.outcome["action"] = action.describe();
  cx.outcome["results"] = std::move(entries);
  json mins = json::array();
  for (const auto& r : seq.running_min_ratios()) mins.push_back(rational_json(r));
  cx.outcome["running_min_ratios"] = std::move(mins);
}

void run_spectrum(Context& cx) {
  const auto& sc = cx.sc;
  json base = json::array();
  for (double a : sc.params.a_samples) {
    const auto r = min_eigenvalue(*sc.base, *sc.potential, a, cx.windows.spectral);
    if (r.residual > cx.windows.spectral.residual_tolerance) {
      throw AuditFailure("eigensolve residual " + fmt(r.residual) + " above tolerance");
    }
    base.push_back(to_json(r, a));
    cx.csv.add_row({sc.name, "base", fmt(a), "", fmt(r.lambda_min), fmt(r.residual),
                    sc.base->vertex_count() <= cx.windows.spectral.dense_limit ? "dense" : "sparse"});
    cx.keys += (cx.keys.empty() ? "" : " ") + ("lambda_min(" + fmt(a) + ")=" + fmt(r.lambda_min));
  }
  cx.outcome["base"] = std::move(base);
  cx.summary = "base spectrum computed";
  if (!sc.has_cover()) return;
  const auto cover = sc.cover();
  json windows = json::array();
  bool refuted = false;
  for (double a : sc.params.a_samples) {
    const auto seq = dirichlet_sequence(cover, cx.radii, *sc.potential, a, cx.windows);
    check_monotone(seq);
    json vals = json::array();
    for (const auto& d : seq) {
      vals.push_back(to_json(d));
      refuted = refuted || d.value < -kWindowSlack;
      cx.csv.add_row({sc.name, "window", fmt(a), std::to_string(d.radius), fmt(d.value), "", d.method});
    }
    windows.push_back({{"a", fmt(a)}, {"values", std::move(vals)}});
  }
  cx.outcome["windows"] = std::move(windows);
  const int R = *std::max_element(cx.radii.begin(), cx.radii.end());
  cx.summary = refuted ? "cover refuted by a negative window" : "no obstruction up to radius " + std::to_string(R);
}

void run_interval(Context& cx) {
  const auto& sc = cx.sc;
  const auto I = stability_interval(*sc.base, *sc.potential, sc.params.tolerance, cx.windows.spectral);
  cx.outcome["interval"] = to_json(I);
  cx.summary = "I = [" + fmt(I.lower) + ", " + fmt(I.upper) + "]";
  cx.keys = "lower=" + fmt(I.lower) + " upper=" + fmt(I.upper);
  if (!sc.has_cover()) {
    cx.csv.add_row({sc.name, "", "", "", "", "", "", fmt(I.lower), fmt(I.upper), fmt(I.endpoint_tolerance)});
    return;
  }
  const auto cover = sc.cover();
  const int R = cx.radii.front();
  TransferOptions t;
  t.alpha = sc.params.alpha;
  t.folner = cx.budget;
  t.spectral = cx.windows.spectral;
  const auto cmp = interval_comparison(cover, *sc.potential, sc.params.a_samples, R,
                                       amenable_by_construction(cover.fiber()), t, cx.windows);
  const auto ladder = window_ladder(R);
  const auto easy = easy_direction_check(cover, *sc.potential, sc.params.a_samples, ladder, cx.windows);
  cx.outcome["comparison"] = to_json(cmp);
  cx.outcome["easy_direction"] = to_json(easy);
  for (const auto& r : cmp.rows) {
    cx.csv.add_row({sc.name, fmt(r.a), fmt(r.base_lambda), r.base_nonnegative ? "non-negative" : "negative",
                    std::to_string(R), fmt(r.window.value), r.cover_refuted ? "refuted" : "no obstruction",
                    fmt(I.lower), fmt(I.upper), fmt(I.endpoint_tolerance)});
  }
  cx.summary += "; cover comparison: " + cmp.verdict;
  if (!cmp.inclusion_holds || !easy.passed) {
    cx.flag(ExitStatus::audit_failure);
    cx.summary += "; a cover window is negative where the base is non-negative";
  }
}

void run_transfer(Context& cx) {
  const auto& sc = cx.sc;
  const auto cover = sc.cover();
  const double a = sc.params.a_samples.front();
  TransferOptions t;
  t.alpha = sc.params.alpha;
  t.folner = cx.budget;
  t.spectral = cx.windows.spectral;
  const auto out = transfer_negativity(cover, *sc.potential, a, t);
  cx.outcome["a"] = fmt(a);
  cx.outcome["transfer"] = to_json(out);
  std::string label = out.witness_found ? "witness" : "inconclusive";
  if (out.witness) {
    const auto& w = out.witness->report;
    cx.outcome["chain_guaranteed"] = w.degree_dominated;
    if (w.degree_dominated && !w.chain_holds()) {
      cx.flag(ExitStatus::audit_failure);
      label = "audit_failure";
    }
    cx.csv.add_row({sc.name, fmt(a), fmt(out.lambda_min_base), fmt(out.r_star), fmt(out.epsilon_used),
                    std::to_string(w.b), std::to_string(w.c), fmt(w.Q_cover), fmt(w.final_bound), label});
    cx.keys = "b/c=" + std::to_string(w.b) + "/" + std::to_string(w.c) + " r*=" + fmt(out.r_star) +
              " Q_cover=" + fmt(w.Q_cover);
  } else {
    cx.flag(ExitStatus::budget_exhausted);
    cx.csv.add_row({sc.name, fmt(a), fmt(out.lambda_min_base), fmt(out.r_star), fmt(out.epsilon_used), "", "", "", "",
                    label});
    cx.keys = "r*=" + fmt(out.r_star) + " best_b/c=" + fmt(out.best_collar_ratio);
  }
  if (!cx.radii.empty()) {
    const auto d = dirichlet_lambda0(cover, cx.radii.back(), *sc.potential, a, cx.windows);
    cx.outcome["cross_check"] = to_json(d);
    cx.outcome["cross_check_negative"] = d.value < 0;
    cx.keys += " window(" + std::to_string(d.radius) + ")=" + fmt(d.value);
  }
  if (sc.params.a_samples.size() > 1 && !cx.radii.empty()) {
    const auto easy = easy_direction_check(cover, *sc.potential, sc.params.a_samples,
                                           window_ladder(cx.radii.back()), cx.windows);
    cx.outcome["easy_direction"] = to_json(easy);
    if (!easy.passed) cx.flag(ExitStatus::audit_failure);
  }
  cx.summary = out.message;
}

void run_counterexample(Context& cx) {
  const auto& sc = cx.sc;
  const auto cover = sc.cover();
  const double a = sc.params.a_samples.front();
  const auto base = min_eigenvalue(*sc.base, *sc.potential, a, cx.windows.spectral);
  const auto seq = dirichlet_sequence(cover, cx.radii, *sc.potential, a, cx.windows);
  check_monotone(seq);
  double min_window = std::numeric_limits<double>::infinity();
  for (const auto& d : seq) min_window = std::min(min_window, d.value);

  std::optional<TransferOutcome> out;
  if (base.lambda_min < 0) {
    TransferOptions t;
    t.alpha = sc.params.alpha;
    t.folner = cx.budget;
    t.spectral = cx.windows.spectral;
    out = transfer_negativity(cover, *sc.potential, a, t);
  }
  std::string verdict;
  if (base.lambda_min >= 0) {
    verdict = "vacuous: base is non-negative";
  } else if (min_window < -kWindowSlack) {
    verdict = "cover refuted";
  } else if (out && out->witness_found) {
    verdict = "witness found";
  } else {
    verdict = "strict inclusion";
  }
  json windows = json::array();
  for (const auto& d : seq) {
    windows.push_back(to_json(d));
    cx.csv.add_row({sc.name, fmt(a), fmt(base.lambda_min), std::to_string(d.radius), fmt(d.value),
                    out ? fmt(out->r_star) : "", out ? fmt(out->best_collar_ratio) : "", verdict});
  }
  cx.outcome["a"] = fmt(a);
  cx.outcome["base"] = to_json(base, a);
  cx.outcome["windows"] = std::move(windows);
  cx.outcome["min_window"] = fmt(min_window);
  if (out) cx.outcome["transfer"] = to_json(*out);
  const auto easy = easy_direction_check(cover, *sc.potential, sc.params.a_samples, cx.radii, cx.windows);
  cx.outcome["easy_direction"] = to_json(easy);
  if (!easy.passed) cx.flag(ExitStatus::audit_failure);
  cx.outcome["verdict"] = verdict;
  cx.summary = verdict;
  cx.keys = "lambda_min_base=" + fmt(base.lambda_min) + " min_window=" + fmt(min_window);
  if (out) cx.keys += " r*=" + fmt(out->r_star) + " best_b/c=" + fmt(out->best_collar_ratio);
}

void run_corollary(Context& cx) {
  const auto& sc = cx.sc;
  const auto rep = corollary_check(*sc.base, *sc.potential, sc.params.tolerance, cx.windows.spectral);
  cx.outcome["corollary"] = to_json(rep);
  const auto& I = rep.interval;
  if (rep.samples.empty()) {
    cx.csv.add_row({sc.name, "", "", "", fmt(I.lower), fmt(I.upper), fmt(I.endpoint_tolerance),
                    rep.passed ? "true" : "false"});
  }
  for (const auto& s : rep.samples) {
    cx.csv.add_row({sc.name, fmt(s.a), fmt(s.lambda_min), fmt(s.constant_rayleigh), fmt(I.lower), fmt(I.upper),
                    fmt(I.endpoint_tolerance), rep.passed ? "true" : "false"});
  }
  cx.summary = rep.passed ? (rep.potential_vanishes ? "I = R" : "I = [0, 0]") : "corollary check failed";
  cx.keys = "lower=" + fmt(I.lower) + " upper=" + fmt(I.upper);
  if (!rep.passed) cx.flag(ExitStatus::audit_failure);
}

json envelope(const std::string& name, const std::string& task, std::uint64_t seed, ExitStatus status) {
  return {{"tool", "coverlab"},
          {"version", kToolVersion},
          {"scenario", name},
          {"task", task},
          {"seed", seed},
          {"status", to_string(status)},
          {"exit_status", static_cast<int>(status)}};
}

RunResult failure(const std::string& name, const std::string& task, std::uint64_t seed, ExitStatus status,
                  const std::string& message, std::vector<std::string> columns) {
  RunResult r;
  r.name = name;
  r.task = task;
  r.status = status;
  r.outcome = to_string(status);
  r.key_numbers = message;
  r.report = envelope(name, task, seed, status);
  r.report["error"] = message;
  r.csv = CsvTable(std::move(columns));
  return r;
}

}  // namespace

RunResult run_scenario(const Scenario& scenario, const RunOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  const std::uint64_t seed = options.seed.value_or(scenario.params.seed);
  const auto task = to_string(scenario.task);
  const auto columns = csv_columns(scenario.task);

  Context cx{scenario, scenario.params.budget, {}, scenario.params.radii, ExitStatus::ok, json::object(),
             CsvTable(columns), {}, {}};
  try {
    const auto budget = options.budget ? options.budget : budget_from_env();
    if (budget) cx.budget.max_points = *budget;
    if (options.radius) {
      if (*options.radius < 0) throw InputError("--radius", "radius must be non-negative");
      cx.budget.max_radius = *options.radius;
      if (!cx.radii.empty()) cx.radii = {*options.radius};
    }
    cx.windows.max_tiles = cx.budget.max_points;

    switch (scenario.task) {
      case Task::folner: run_folner(cx); break;
      case Task::spectrum: run_spectrum(cx); break;
      case Task::interval: run_interval(cx); break;
      case Task::transfer: run_transfer(cx); break;
      case Task::counterexample: run_counterexample(cx); break;
      case Task::corollary: run_corollary(cx); break;
    }
  } catch (const InputError& e) {
    return failure(scenario.name, task, seed, ExitStatus::input_error, e.what(), columns);
  } catch (const ArgumentError& e) {
    return failure(scenario.name, task, seed, ExitStatus::input_error, e.what(), columns);
  } catch (const BudgetExceeded& e) {
    return failure(scenario.name, task, seed, ExitStatus::budget_exhausted, e.what(), columns);
  } catch (const std::exception& e) {
    // Audit failures, failed verifications and anything unexpected.
    return failure(scenario.name, task, seed, ExitStatus::audit_failure, e.what(), columns);
  }

  RunResult r;
  r.name = scenario.name;
  r.task = task;
  r.status = cx.status;
  r.report = envelope(scenario.name, task, seed, cx.status);
  r.report["summary"] = cx.summary;
  r.report["outcome"] = std::move(cx.outcome);
  if (options.timing) {
    const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    r.report["timing_ms"] = format_real(std::round(ms * 1000) / 1000);
  }
  r.csv = std::move(cx.csv);
  r.outcome = cx.summary;
  r.key_numbers = cx.keys;
  return r;
}

RunResult run_file(const std::filesystem::path& path, const RunOptions& options) {
  Scenario sc;
  try {
    sc = load_scenario(path);
  } catch (const InputError& e) {
    return failure(path.stem().string(), "unknown", options.seed.value_or(0), ExitStatus::input_error, e.what(),
                   {"scenario", "error"});
  }
  return run_scenario(sc, options);
}

std::string report_text(const RunResult& r) { return r.report.dump(2) + "\n"; }

CsvTable BatchSummary::table() const {
  CsvTable t({"file", "scenario", "task", "status", "exit_status", "outcome", "key_numbers"});
  for (const auto& r : rows) {
    t.add_row({r.file, r.name, r.task, to_string(r.status), std::to_string(static_cast<int>(r.status)), r.outcome,
               r.key_numbers});
  }
  return t;
}

namespace {

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw InputError(p.string(), "cannot write output file");
  out << text;
}

}  // namespace

BatchSummary run_batch(const std::filesystem::path& dir, unsigned jobs,
                       const std::optional<std::filesystem::path>& out, const RunOptions& options) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw InputError(dir.string(), "not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw InputError(dir.string(), "directory contains no scenario files");

  // Parse everything first so name collisions are caught before any work starts.
  struct Item {
    std::filesystem::path file;
    std::optional<Scenario> scenario;
    RunResult result;
  };
  std::vector<Item> items(files.size());
  std::map<std::string, std::filesystem::path> names;
  for (std::size_t i = 0; i < files.size(); ++i) {
    items[i].file = files[i];
    try {
      items[i].scenario = load_scenario(files[i]);
    } catch (const InputError& e) {
      items[i].result = failure(files[i].stem().string(), "unknown", options.seed.value_or(0), ExitStatus::input_error,
                                e.what(), {"scenario", "error"});
      continue;
    }
    auto [it, inserted] = names.emplace(items[i].scenario->name, files[i]);
    if (!inserted) {
      throw InputError("batch", "duplicate scenario name '" + items[i].scenario->name + "' in " +
                                    it->second.filename().string() + " and " + files[i].filename().string());
    }
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < items.size(); i = next++) {
      if (items[i].scenario) items[i].result = run_scenario(*items[i].scenario, options);
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(items.size())));
  {
    std::vector<std::jthread> pool;
    for (unsigned k = 1; k < n; ++k) pool.emplace_back(worker);
    worker();
  }

  BatchSummary summary;
  for (const auto& item : items) {
    const auto& r = item.result;
    summary.rows.push_back({item.file.filename().string(), r.name, r.task, r.status, r.outcome, r.key_numbers});
    summary.status = worst(summary.status, r.status);
  }
  if (out) {
    std::filesystem::create_directories(*out, ec);
    if (ec) throw InputError(out->string(), "cannot create output directory");
    for (const auto& item : items) {
      write_file(*out / (item.result.name + ".json"), report_text(item.result));
      write_file(*out / (item.result.name + ".csv"), item.result.csv.str());
    }
    write_file(*out / "summary.csv", summary.table().str());
  }
  return summary;
}

}  // namespace coverlab
