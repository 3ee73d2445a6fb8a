#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "coverlab/geometry.hpp"

namespace coverlab {

struct SpectralOptions {
  std::size_t max_vertices = 5000;
  /// Dense symmetric eigensolve at or below this size, sparse shift-invert above.
  std::size_t dense_limit = 600;
  double residual_tolerance = 1e-9;
};

struct SpectralResult {
  double lambda_min = 0;
  std::vector<double> eigenvector;  ///< μ-normalised: Σ f² μ = 1
  double residual = 0;
};

/// Smallest λ with L f + aVμ f = λ μ f. Throws ArgumentError for a
/// disconnected graph and BudgetExceeded above `max_vertices`.
SpectralResult min_eigenvalue(const WeightedGraph& g, const Potential& V, double a,
                              const SpectralOptions& options = {});

/// quadratic_form / Σ f²μ; ArgumentError for f = 0.
double rayleigh(const WeightedGraph& g, const Potential& V, double a, const CompactFunction& f);

struct DirichletOptions {
  std::size_t max_tiles = kDefaultPointBudget;
  std::size_t max_vertices = 200'000;
  /// Use the tile-tree block elimination when the cover is a tree cover.
  bool allow_tree_route = true;
  SpectralOptions spectral{};
};

struct DirichletValue {
  int radius = 0;
  double value = 0;
  std::string method;  ///< "tile-tree" or "window"
  double window_vertices = 0;
};

/// Bottom of the spectrum of the cover operator restricted to functions
/// supported on the tiles within `radius` tile steps of the root tile.
DirichletValue dirichlet_lambda0(const VoltageCover& cover, int radius, const Potential& V, double a,
                                 const DirichletOptions& options = {});

std::vector<DirichletValue> dirichlet_sequence(const VoltageCover& cover, std::span<const int> radii,
                                               const Potential& V, double a, const DirichletOptions& options = {});

struct StabilityInterval {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  double endpoint_tolerance = 0;

  bool contains(double a) const { return lower <= a && a <= upper; }
};

/// Decides λ_min(a) ≥ 0 using the computed ground state as test function:
/// a negative quadratic form on it certifies a ∉ I.
bool nonnegative_at(const WeightedGraph& g, const Potential& V, double a, const SpectralOptions& options = {});

/// I = {a : λ_min(a) ≥ 0} by exponential bracketing and bisection to width `tol`.
/// Reported endpoints lie on the inside of the true endpoints.
StabilityInterval stability_interval(const WeightedGraph& g, const Potential& V, double tol,
                                     const SpectralOptions& options = {});

struct CorollarySample {
  double a = 0;
  double lambda_min = 0;
  double constant_rayleigh = 0;
};

struct CorollaryReport {
  bool potential_vanishes = false;
  std::vector<CorollarySample> samples;
  StabilityInterval interval;
  double tolerance = 0;
  bool passed = false;
};

/// Requires Σ V μ = 0 (relative tolerance 1e-12). V ≡ 0 must give ℝ; otherwise
/// the constant function has zero energy, λ_min(±1), λ_min(±0.5) < 0 and I = [0,0].
CorollaryReport corollary_check(const WeightedGraph& g, const Potential& V, double tol = 1e-6,
                                const SpectralOptions& options = {});

}  // namespace coverlab
