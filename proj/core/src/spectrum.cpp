#include "coverlab/spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "coverlab/errors.hpp"
#include "eigensolvers.hpp"

namespace coverlab {

namespace {

SpectralResult to_result(const WeightedGraph& g, const detail::Eigenpair& pair) {
  SpectralResult r;
  r.lambda_min = pair.value;
  r.residual = pair.residual;
  r.eigenvector.resize(pair.vector.size());
  for (std::size_t v = 0; v < pair.vector.size(); ++v) r.eigenvector[v] = pair.vector[v] / std::sqrt(g.mu(v));
  return r;
}

SpectralResult solve(const WeightedGraph& g, const Potential& V, double a, const SpectralOptions& options) {
  const auto problem = detail::symmetrize(g, V, a);
  return to_result(g, detail::lowest_eigenpair(problem, options.dense_limit, options.residual_tolerance));
}

}  // namespace

SpectralResult min_eigenvalue(const WeightedGraph& g, const Potential& V, double a, const SpectralOptions& options) {
  if (g.vertex_count() > options.max_vertices) throw BudgetExceeded("min_eigenvalue graph size", g.vertex_count());
  if (!g.connected()) throw ArgumentError("min_eigenvalue needs a connected graph");
  return solve(g, V, a, options);
}

double rayleigh(const WeightedGraph& g, const Potential& V, double a, const CompactFunction& f) {
  if (f.is_zero()) throw ArgumentError("Rayleigh quotient of the zero function");
  return quadratic_form(g, V, a, f) / mass(g, f);
}

DirichletValue dirichlet_lambda0(const VoltageCover& cover, int radius, const Potential& V, double a,
                                 const DirichletOptions& options) {
  if (radius < 0) throw ArgumentError("Dirichlet window radius must be non-negative");
  if (V.size() != cover.base().vertex_count()) throw ArgumentError("potential size does not match the base");
  const std::size_t nb = cover.base().vertex_count();
  DirichletValue out;
  out.radius = radius;

  if (options.allow_tree_route && cover.is_tree_cover()) {
    const double k = 2.0 * cover.fiber().generator_count();
    double tiles = 1, sphere = 1;
    for (int r = 1; r <= radius; ++r) {
      sphere *= r == 1 ? k : k - 1;
      tiles += sphere;
    }
    out.value = detail::tree_window_lambda(cover, V, a, radius);
    out.method = "tile-tree";
    out.window_vertices = tiles * static_cast<double>(nb);
    return out;
  }

  const auto ball = cover.tile_ball(cover.root_tile(), radius, options.max_tiles);
  const std::size_t n = ball->size() * nb;
  if (n > options.max_vertices) throw BudgetExceeded("Dirichlet window size", n);
  const auto window = cover.window(*ball);
  const auto problem = detail::symmetrize(window.graph, lift_potential(window, V), a);
  out.value = detail::lowest_eigenpair(problem, options.spectral.dense_limit, options.spectral.residual_tolerance).value;
  out.method = "window";
  out.window_vertices = static_cast<double>(n);
  return out;
}

std::vector<DirichletValue> dirichlet_sequence(const VoltageCover& cover, std::span<const int> radii,
                                               const Potential& V, double a, const DirichletOptions& options) {
  std::vector<DirichletValue> out;
  out.reserve(radii.size());
  for (int r : radii) out.push_back(dirichlet_lambda0(cover, r, V, a, options));
  return out;
}

bool nonnegative_at(const WeightedGraph& g, const Potential& V, double a, const SpectralOptions& options) {
  const auto r = min_eigenvalue(g, V, a, options);
  // The energy of the ground state via edge differences keeps O(a²) values accurate.
  return quadratic_form(g, V, a, CompactFunction(r.eigenvector)) >= 0;
}

namespace {

constexpr double kBracketLimit = 1152921504606846976.0;  // 2^60

// Moves from a ∈ I (sign +1 or −1) outward; returns the endpoint or ±∞.
double find_endpoint(const WeightedGraph& g, const Potential& V, double tol, double direction,
                     const SpectralOptions& options, double& width) {
  double inside = 0;
  double outside = direction;
  while (nonnegative_at(g, V, outside, options)) {
    inside = outside;
    outside *= 2;
    if (std::abs(outside) > kBracketLimit) {
      width = 0;
      return direction * std::numeric_limits<double>::infinity();
    }
  }
  while (std::abs(outside - inside) > tol) {
    const double mid = 0.5 * (inside + outside);
    if (mid == inside || mid == outside) break;
    (nonnegative_at(g, V, mid, options) ? inside : outside) = mid;
  }
  width = std::abs(outside - inside);
  return inside;
}

}  // namespace

StabilityInterval stability_interval(const WeightedGraph& g, const Potential& V, double tol,
                                     const SpectralOptions& options) {
  if (!(tol > 0)) throw ArgumentError("stability interval tolerance must be positive");
  if (V.size() != g.vertex_count()) throw ArgumentError("potential size does not match the graph");
  if (g.vertex_count() > options.max_vertices) throw BudgetExceeded("stability interval graph size", g.vertex_count());
  if (!g.connected()) throw ArgumentError("stability interval needs a connected graph");
  StabilityInterval I;
  double w_lo = 0, w_hi = 0;
  // Exact sign scan: a vertex with aV(v) → −∞ drives its indicator's energy negative.
  if (!V.nonnegative()) I.upper = find_endpoint(g, V, tol, +1.0, options, w_hi);
  if (!V.nonpositive()) I.lower = find_endpoint(g, V, tol, -1.0, options, w_lo);
  I.endpoint_tolerance = std::max(w_lo, w_hi);
  return I;
}

CorollaryReport corollary_check(const WeightedGraph& g, const Potential& V, double tol,
                                const SpectralOptions& options) {
  if (V.size() != g.vertex_count()) throw ArgumentError("potential size does not match the graph");
  double total = 0, scale = 0;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    total += V[v] * g.mu(v);
    scale += std::abs(V[v]) * g.mu(v);
  }
  if (std::abs(total) > 1e-12 * std::max(scale, 1.0)) {
    throw ArgumentError("corollary check needs a balanced potential (sum of V mu is " + std::to_string(total) + ")");
  }
  CorollaryReport rep;
  rep.tolerance = tol;
  rep.potential_vanishes = V.vanishes();
  rep.interval = stability_interval(g, V, tol, options);
  if (rep.potential_vanishes) {
    rep.passed = std::isinf(rep.interval.lower) && std::isinf(rep.interval.upper);
    return rep;
  }
  const CompactFunction one(std::vector<double>(g.vertex_count(), 1.0));
  bool ok = true;
  for (double a : {-1.0, -0.5, 0.5, 1.0}) {
    CorollarySample s;
    s.a = a;
    s.lambda_min = min_eigenvalue(g, V, a, options).lambda_min;
    s.constant_rayleigh = rayleigh(g, V, a, one);
    ok = ok && s.lambda_min < 0 && std::abs(s.constant_rayleigh) <= 1e-12 * std::max(1.0, scale);
    rep.samples.push_back(s);
  }
  ok = ok && std::abs(rep.interval.lower) <= tol && std::abs(rep.interval.upper) <= tol;
  rep.passed = ok;
  return rep;
}

}  // namespace coverlab
