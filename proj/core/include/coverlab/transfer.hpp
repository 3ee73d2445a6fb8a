#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coverlab/folner.hpp"
#include "coverlab/geometry.hpp"
#include "coverlab/spectrum.hpp"

namespace coverlab {

/// Every term of the cutoff-witness estimate, evaluated by direct summation.
struct WitnessReport {
  std::size_t c = 0;  ///< ♯E
  std::size_t b = 0;  ///< ♯collar tiles
  double epsilon_used = 0;
  int alpha = 1;

  double Q_base = 0;
  double Q_cover = 0;
  double term_grad = 0;
  double bound_grad = 0;
  double term_pot = 0;
  double bound_pot = 0;
  double final_bound = 0;

  double mass = 0;           ///< Σ f²μ on the base
  double gradient = 0;       ///< Σ |df|² w on the base
  double negative_part = 0;  ///< Σ (aV)₋ f²μ on the base

  /// μ ≥ weighted degree on the base. The gradient estimate is only
  /// guaranteed under this condition.
  bool degree_dominated = false;
  /// ♯(E ∩ tiles within α steps of ∂E); always ≥ b.
  std::size_t boundary_neighbourhood = 0;

  double collar_ratio() const { return c == 0 ? 0.0 : static_cast<double>(b) / static_cast<double>(c); }
  bool grad_holds() const;
  bool pot_holds() const;
  bool final_holds() const;
  bool chain_holds() const { return grad_holds() && pot_holds() && final_holds(); }
};

struct Witness {
  CutoffFunction cutoff;
  CompactFunction values;  ///< ξ·f̂ on cutoff.window
  WitnessReport report;
};

/// ξ·f̂ over the tiles E with collar width α, plus the audit of its energy.
Witness build_witness(const VoltageCover& cover, const CompactFunction& f, std::span<const Point> E, int alpha,
                      const Potential& V, double a, double epsilon_used = 0);
Witness build_witness(const VoltageCover& cover, const CompactFunction& f, const FolnerCertificate& cert, int alpha,
                      const Potential& V, double a);

/// r* = −Q_base / (α⁻²Σf²μ + (2/α)(Σ|df|²w·Σf²μ)^{1/2} + Σ(aV)₋f²μ).
/// ArgumentError when Q_base ≥ 0.
double required_ratio(const WeightedGraph& base, const CompactFunction& f, int alpha, const Potential& V, double a);

struct TransferOptions {
  int alpha = 1;
  SearchBudget folner{};
  /// Retries with ε/2 when a built witness misses r*.
  int max_halvings = 16;
  /// Upper size for windows used to measure collar ratios after exhaustion.
  std::size_t collar_probe_vertices = 200'000;
  SpectralOptions spectral{};
};

struct TransferOutcome {
  bool witness_found = false;
  double lambda_min_base = 0;
  double r_star = 0;
  double epsilon_used = 0;
  int attempts = 0;
  std::optional<Witness> witness;
  std::optional<Exhaustion> exhaustion;
  /// Smallest b/c seen over the examined sets (inconclusive case).
  double best_collar_ratio = 0;
  std::string message;
};

/// Transfers a negative base eigenfunction to a compactly supported negative
/// witness on the cover when the tile action has small enough Følner sets.
/// ArgumentError if the base operator is non-negative; AuditFailure if a
/// witness with b/c < r* fails to be negative.
TransferOutcome transfer_negativity(const VoltageCover& cover, const Potential& V, double a,
                                    const TransferOptions& options = {});

struct EasyDirectionRow {
  double a = 0;
  double base_lambda = 0;
  bool base_nonnegative = false;
  std::vector<DirichletValue> windows;  ///< empty when the base is negative
  double min_margin = 0;                ///< smallest window value
  bool passed = true;
};

struct EasyDirectionReport {
  std::vector<EasyDirectionRow> rows;
  bool passed = true;
};

/// For each sampled a with a non-negative base, every window must be ≥ −1e-9.
EasyDirectionReport easy_direction_check(const VoltageCover& cover, const Potential& V,
                                         std::span<const double> a_samples, std::span<const int> radii,
                                         const DirichletOptions& options = {});

struct IntervalRow {
  double a = 0;
  double base_lambda = 0;
  bool base_nonnegative = false;
  DirichletValue window;
  bool cover_refuted = false;
  std::optional<bool> witness_found;  ///< set when a transfer was attempted
  bool agree() const { return base_nonnegative != cover_refuted; }
};

struct IntervalComparison {
  std::vector<IntervalRow> rows;
  int radius = 0;
  bool inclusion_holds = true;  ///< base non-negative ⇒ cover not refuted
  bool all_agree = true;
  std::string verdict;  ///< "agreement" or "strict inclusion"
};

IntervalComparison interval_comparison(const VoltageCover& cover, const Potential& V,
                                       std::span<const double> a_samples, int radius, bool attempt_transfer,
                                       const TransferOptions& transfer = {}, const DirichletOptions& options = {});

}  // namespace coverlab
