#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coverlab/group_actions.hpp"

namespace coverlab {

struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
  double w = 1.0;
};

/// Finite graph with vertex measure μ > 0 and edge conductances w > 0.
///
/// `exterior_weight(v)` is the total conductance of edges from v to vertices
/// outside the graph on which every function vanishes. It is zero for a base
/// graph and carries the Dirichlet condition for windows cut out of a cover.
class WeightedGraph {
 public:
  struct Neighbor {
    std::size_t vertex;
    double w;
  };

  WeightedGraph() = default;
  WeightedGraph(std::vector<double> mu, std::vector<Edge> edges, std::vector<double> exterior_weight = {});

  std::size_t vertex_count() const { return mu_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  double mu(std::size_t v) const { return mu_[v]; }
  const std::vector<double>& measure() const { return mu_; }
  const std::vector<Edge>& edges() const { return edges_; }
  double exterior_weight(std::size_t v) const { return exterior_[v]; }
  /// Sum of incident conductances, exterior stubs included.
  double weighted_degree(std::size_t v) const { return degree_[v]; }
  std::span<const Neighbor> neighbors(std::size_t v) const;

  bool connected() const;
  /// μ(v) ≥ weighted degree at every vertex.
  bool degree_dominated() const;

 private:
  std::vector<double> mu_;
  std::vector<Edge> edges_;
  std::vector<double> exterior_;
  std::vector<double> degree_;
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> adjacency_;
};

/// Vertex potential V = V₊ − V₋.
class Potential {
 public:
  Potential() = default;
  explicit Potential(std::vector<double> values);
  static Potential zero(std::size_t n) { return Potential(std::vector<double>(n, 0.0)); }

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t v) const { return values_[v]; }
  double positive(std::size_t v) const { return values_[v] > 0 ? values_[v] : 0.0; }
  double negative(std::size_t v) const { return values_[v] < 0 ? -values_[v] : 0.0; }
  const std::vector<double>& values() const { return values_; }
  bool nonnegative() const;
  bool nonpositive() const;
  bool vanishes() const;

 private:
  std::vector<double> values_;
};

/// Function on the vertices of a finite graph with its support recorded.
class CompactFunction {
 public:
  CompactFunction() = default;
  explicit CompactFunction(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t v) const { return values_[v]; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<std::size_t>& support() const { return support_; }
  bool is_zero() const { return support_.empty(); }

 private:
  std::vector<double> values_;
  std::vector<std::size_t> support_;
};

struct EnergyTerms {
  double gradient = 0.0;   ///< Σ w (f(u) − f(v))², exterior stubs included
  double potential = 0.0;  ///< a Σ V f² μ
  double total() const { return gradient + potential; }
};

EnergyTerms energy_terms(const WeightedGraph& g, const Potential& V, double a, const CompactFunction& f);
/// Σ_edges w (df)² + a Σ_v V f² μ.
double quadratic_form(const WeightedGraph& g, const Potential& V, double a, const CompactFunction& f);
/// Σ f² μ.
double mass(const WeightedGraph& g, const CompactFunction& f);

/// Finite set of tiles cut out of a cover, materialised as a graph with
/// Dirichlet stubs. Cover vertex (v, x) has index tile_index(x) * base_size + v.
struct CoverWindow {
  std::vector<Point> tiles;  ///< canonical order
  std::size_t base_size = 0;
  WeightedGraph graph;

  std::size_t vertex(std::size_t tile, std::size_t v) const { return tile * base_size + v; }
  std::size_t tile_of(std::size_t p) const { return p / base_size; }
  std::size_t project(std::size_t p) const { return p % base_size; }
  /// npos when x is not one of the window's tiles.
  std::size_t tile_index(const Point& x) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

/// Covering graph of a finite base built from voltages.
///
/// Each base edge u→v (as stored) carries a word in the fiber action's
/// generators; the cover joins (u, x) to (v, word·x). Tiles Ω_x = {(v, x)}
/// are indexed by fiber points and the tile action is generated by the
/// distinct non-identity voltages.
class VoltageCover {
 public:
  VoltageCover(WeightedGraph base, GroupAction fiber, std::vector<Word> voltages, std::optional<Point> root_tile = {});

  const WeightedGraph& base() const { return base_; }
  const GroupAction& fiber() const { return fiber_; }
  /// Action on tiles generated by the monodromies (symmetrised).
  const GroupAction& tile_action() const { return tile_action_; }
  const std::vector<Word>& voltages() const { return voltages_; }
  const Point& root_tile() const { return root_; }
  /// Signed tile-action generator carried by edge e in its stored orientation; 0 for the identity.
  int edge_generator(std::size_t e) const { return edge_generator_[e]; }
  const std::vector<Word>& tile_generators() const { return tile_generators_; }

  /// Image of tile x under edge e traversed forward (u→v) or backward.
  Point monodromy(std::size_t e, bool forward, const Point& x) const;

  /// Tiles within `radius` tile-action steps of `centre`, canonical order.
  /// Results for the root tile are memoised.
  std::shared_ptr<const std::vector<Point>> tile_ball(const Point& centre, int radius,
                                                      std::size_t budget = kDefaultPointBudget) const;

  CoverWindow window(std::span<const Point> tiles) const;

  /// True when the cover is the universal cover of the base: free-group fiber
  /// acting on itself and every voltage a single letter, each generator used.
  bool is_tree_cover() const;

 private:
  WeightedGraph base_;
  GroupAction fiber_;
  std::vector<Word> voltages_;
  Point root_;
  std::vector<Word> tile_generators_;
  std::vector<int> edge_generator_;
  GroupAction tile_action_;

  struct BallCache {
    std::mutex mutex;
    std::map<int, std::shared_ptr<const std::vector<Point>>> balls;
  };
  std::shared_ptr<BallCache> cache_;
};

/// Validates the base (finite, connected) and the voltages (valid words for the fiber).
VoltageCover build_cover(WeightedGraph base, GroupAction fiber, std::vector<Word> voltages,
                         std::optional<Point> root_tile = {});

/// The action of the cover's monodromy group on tiles.
GroupAction fiber_action(const VoltageCover& cover);

/// V̂ = V ∘ ρ on a window.
Potential lift_potential(const CoverWindow& window, const Potential& V);

struct CoverFunction {
  CoverWindow window;
  CompactFunction values;
};

/// f̂(v, x) = f(v) on the listed tiles, zero elsewhere.
CoverFunction lift_function(const VoltageCover& cover, const CompactFunction& f, std::span<const Point> tiles);

/// ξ = min(1, d(·, complement of Ω)/α) on Ω = ∪_{x∈E} Ω_x, zero outside.
struct CutoffFunction {
  int alpha = 1;
  std::vector<Point> omega;  ///< the tile set E, canonical order
  CoverWindow window;        ///< window over E
  std::vector<double> xi;    ///< per window vertex
  std::vector<int> distance; ///< hop distance to the complement (kUnreachable if none)
  std::vector<Point> collar_tiles;

  static constexpr int kUnreachable = -1;

  /// Largest |ξ(p) − ξ(q)| over window edges and edges leaving Ω.
  double max_jump() const;
};

CutoffFunction cutoff(const VoltageCover& cover, std::span<const Point> E, int alpha);

}  // namespace coverlab
