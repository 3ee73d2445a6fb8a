#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "coverlab/errors.hpp"
#include "coverlab/group_actions.hpp"
#include "coverlab/rational.hpp"

namespace coverlab {

struct GeneratorRatio {
  Generator generator;
  Rational ratio;  ///< ♯(E △ γ·E) / ♯E
};

/// A finite set E together with its exact translation ratios.
struct FolnerCertificate {
  std::vector<Point> points;  ///< canonical order
  Rational epsilon;
  std::vector<GeneratorRatio> ratios;  ///< one per symmetric generator
  Rational boundary_ratio;             ///< ♯∂E / ♯E

  Rational max_ratio() const;
  std::size_t size() const { return points.size(); }
};

/// Thrown by verify_certificate when some translate moves too much of E.
class VerificationFailed : public Error {
 public:
  VerificationFailed(Generator g, Rational ratio, Rational epsilon);
  Generator generator() const { return generator_; }
  const Rational& ratio() const { return ratio_; }

 private:
  Generator generator_;
  Rational ratio_;
};

/// Exact ratios for E, with no acceptance threshold applied.
FolnerCertificate measure_set(const GroupAction& action, std::span<const Point> E);

/// Checks ♯(E △ γ·E) ≤ ε·♯E for every symmetric generator γ.
/// Throws ArgumentError for empty E or ε outside (0, 1].
FolnerCertificate verify_certificate(const GroupAction& action, std::span<const Point> E, const Rational& epsilon);

struct BoundaryBound {
  std::int64_t lhs = 0;  ///< ♯∂E
  std::int64_t rhs = 0;  ///< Σᵢ (♯E − ♯(E ∩ αᵢ⁻¹·E)) over the symmetric generators
};

BoundaryBound folner_boundary_bound(const GroupAction& action, std::span<const Point> E);

struct SearchBudget {
  int max_radius = 1000;
  std::size_t max_points = kDefaultPointBudget;
  /// Largest connected subset examined by the exhaustive phase.
  int subset_cap = 14;
  std::uint64_t max_subsets = 2'000'000'000;
};

/// Evidence gathered when no certificate was found. Never a proof of non-amenability.
struct Exhaustion {
  Rational best_ratio_found;
  std::vector<Point> best_set;
  std::uint64_t sets_examined = 0;
  int radius_reached = -1;
  /// Size bound actually covered by the exhaustive subset phase (0 if skipped).
  int subset_size_reached = 0;
  bool subset_search_complete = false;

  std::string message() const;
};

struct SearchReport {
  std::variant<FolnerCertificate, Exhaustion> outcome;

  bool found() const { return std::holds_alternative<FolnerCertificate>(outcome); }
  const FolnerCertificate& certificate() const { return std::get<FolnerCertificate>(outcome); }
  const Exhaustion& exhaustion() const { return std::get<Exhaustion>(outcome); }
};

/// Searches boxes (lattice actions), then orbit balls around the origin, then
/// connected subsets containing the origin. Deterministic for a given budget.
SearchReport search_folner(const GroupAction& action, const Rational& epsilon, const SearchBudget& budget = {});

struct FolnerSequence {
  std::vector<FolnerCertificate> certificates;
  std::optional<Exhaustion> truncated_by;

  /// Running minimum of the certificates' max ratios.
  std::vector<Rational> running_min_ratios() const;
};

/// One search per ε; epsilons must be positive and strictly decreasing.
FolnerSequence folner_sequence(const GroupAction& action, std::span<const Rational> epsilons,
                               const SearchBudget& budget = {});

/// Certificate record: points, ε and every ratio as exact fractions.
nlohmann::json certificate_to_json(const FolnerCertificate& cert);
FolnerCertificate certificate_from_json(const nlohmann::json& j);

}  // namespace coverlab
