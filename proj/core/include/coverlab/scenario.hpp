#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "coverlab/folner.hpp"
#include "coverlab/geometry.hpp"
#include "coverlab/rational.hpp"

namespace coverlab {

enum class Task { folner, spectrum, interval, transfer, counterexample, corollary };

std::string to_string(Task task);
Task task_from_string(const std::string& s);

struct ScenarioParams {
  std::vector<Rational> epsilons;  ///< folner
  int alpha = 1;
  std::vector<double> a_samples;   ///< a single "a" is stored as one sample
  std::vector<int> radii;          ///< Dirichlet windows; "radius" is stored as one entry
  double tolerance = 1e-6;
  std::uint64_t seed = 0;
  SearchBudget budget{};
};

/// A validated scenario. Graph-based tasks carry `base`, `potential` and,
/// when a cover is involved, `fiber` and per-edge `voltages`.
struct Scenario {
  std::string name;
  Task task = Task::folner;
  std::optional<GroupAction> action;
  std::optional<WeightedGraph> base;
  std::vector<std::string> vertex_ids;
  std::optional<Potential> potential;
  std::optional<GroupAction> fiber;
  std::vector<Word> voltages;
  ScenarioParams params;

  bool has_cover() const { return base.has_value() && fiber.has_value(); }
  VoltageCover cover() const;
};

/// Action sub-schema: {"kind": "lattice", "dimension": 2}, {"kind": "free_group", "rank": 2},
/// {"kind": "finite_permutation", "generators": [[1,0,2], ...]},
/// {"kind": "quotient", "inner": {...}, "images": [[1], []]}.
GroupAction parse_action(const nlohmann::json& j, const std::string& field);

/// Throws InputError naming the offending field.
Scenario parse_scenario(const nlohmann::json& j);
/// Reads and parses a file; JSON syntax errors report line and column.
Scenario load_scenario(const std::filesystem::path& path);

/// Real numbers in scenarios are decimal strings, e.g. "-0.05".
double parse_real(const nlohmann::json& j, const std::string& field);

}  // namespace coverlab
