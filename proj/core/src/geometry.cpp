#include "coverlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <unordered_map>

#include "coverlab/errors.hpp"

namespace coverlab {

WeightedGraph::WeightedGraph(std::vector<double> mu, std::vector<Edge> edges, std::vector<double> exterior_weight)
    : mu_(std::move(mu)), edges_(std::move(edges)), exterior_(std::move(exterior_weight)) {
  const std::size_t n = mu_.size();
  if (exterior_.empty()) exterior_.assign(n, 0.0);
  if (exterior_.size() != n) throw ArgumentError("exterior weights do not match the vertex count");
  for (std::size_t v = 0; v < n; ++v) {
    if (!(mu_[v] > 0) || !std::isfinite(mu_[v])) {
      throw ArgumentError("vertex " + std::to_string(v) + " has non-positive measure");
    }
    if (!(exterior_[v] >= 0) || !std::isfinite(exterior_[v])) {
      throw ArgumentError("vertex " + std::to_string(v) + " has a negative exterior weight");
    }
  }
  degree_ = exterior_;
  std::vector<std::size_t> count(n, 0);
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    const auto& e = edges_[k];
    if (e.u >= n || e.v >= n) throw ArgumentError("edge " + std::to_string(k) + " refers to an undefined vertex");
    if (e.u == e.v) throw ArgumentError("edge " + std::to_string(k) + " is a loop");
    if (!(e.w > 0) || !std::isfinite(e.w)) {
      throw ArgumentError("edge " + std::to_string(k) + " has non-positive conductance");
    }
    degree_[e.u] += e.w;
    degree_[e.v] += e.w;
    ++count[e.u];
    ++count[e.v];
  }
  offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) offsets_[v + 1] = offsets_[v] + count[v];
  adjacency_.resize(offsets_[n]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& e : edges_) {
    adjacency_[fill[e.u]++] = {e.v, e.w};
    adjacency_[fill[e.v]++] = {e.u, e.w};
  }
}

std::span<const WeightedGraph::Neighbor> WeightedGraph::neighbors(std::size_t v) const {
  return {adjacency_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
}

bool WeightedGraph::connected() const {
  const std::size_t n = vertex_count();
  if (n == 0) return false;
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    for (const auto& nb : neighbors(v)) {
      if (!seen[nb.vertex]) {
        seen[nb.vertex] = 1;
        ++reached;
        stack.push_back(nb.vertex);
      }
    }
  }
  return reached == n;
}

bool WeightedGraph::degree_dominated() const {
  for (std::size_t v = 0; v < vertex_count(); ++v) {
    if (mu_[v] < degree_[v]) return false;
  }
  return true;
}

Potential::Potential(std::vector<double> values) : values_(std::move(values)) {
  for (double x : values_) {
    if (!std::isfinite(x)) throw ArgumentError("potential values must be finite");
  }
}

bool Potential::nonnegative() const {
  return std::all_of(values_.begin(), values_.end(), [](double x) { return x >= 0; });
}

bool Potential::nonpositive() const {
  return std::all_of(values_.begin(), values_.end(), [](double x) { return x <= 0; });
}

bool Potential::vanishes() const {
  return std::all_of(values_.begin(), values_.end(), [](double x) { return x == 0; });
}

CompactFunction::CompactFunction(std::vector<double> values) : values_(std::move(values)) {
  for (std::size_t v = 0; v < values_.size(); ++v) {
    if (!std::isfinite(values_[v])) throw ArgumentError("function values must be finite");
    if (values_[v] != 0) support_.push_back(v);
  }
}

namespace {

void check_sizes(const WeightedGraph& g, const Potential& V, const CompactFunction& f) {
  if (V.size() != g.vertex_count()) throw ArgumentError("potential size does not match the graph");
  if (f.size() != g.vertex_count()) throw ArgumentError("function size does not match the graph");
}

}  // namespace

EnergyTerms energy_terms(const WeightedGraph& g, const Potential& V, double a, const CompactFunction& f) {
  check_sizes(g, V, f);
  EnergyTerms t;
  // Only edges touching the support contribute.
  for (auto v : f.support()) {
    const double fv = f[v];
    for (const auto& nb : g.neighbors(v)) {
      const double d = fv - f[nb.vertex];
      // Interior edges with both ends in the support are visited twice.
      t.gradient += (f[nb.vertex] != 0 ? 0.5 : 1.0) * nb.w * d * d;
    }
    t.gradient += g.exterior_weight(v) * fv * fv;
    t.potential += a * V[v] * fv * fv * g.mu(v);
  }
  return t;
}

double quadratic_form(const WeightedGraph& g, const Potential& V, double a, const CompactFunction& f) {
  return energy_terms(g, V, a, f).total();
}

double mass(const WeightedGraph& g, const CompactFunction& f) {
  if (f.size() != g.vertex_count()) throw ArgumentError("function size does not match the graph");
  double s = 0;
  for (auto v : f.support()) s += f[v] * f[v] * g.mu(v);
  return s;
}

std::size_t CoverWindow::tile_index(const Point& x) const {
  auto it = std::lower_bound(tiles.begin(), tiles.end(), x);
  if (it == tiles.end() || *it != x) return npos;
  return static_cast<std::size_t>(it - tiles.begin());
}

VoltageCover::VoltageCover(WeightedGraph base, GroupAction fiber, std::vector<Word> voltages,
                           std::optional<Point> root_tile)
    : base_(std::move(base)),
      fiber_(std::move(fiber)),
      voltages_(std::move(voltages)),
      root_(root_tile ? *root_tile : fiber_.origin()),
      tile_action_(GroupAction::lattice(1)),
      cache_(std::make_shared<BallCache>()) {
  if (voltages_.size() != base_.edge_count()) throw ArgumentError("one voltage per base edge is required");
  if (!fiber_.contains(root_)) throw ArgumentError("root tile is not a fiber point");
  edge_generator_.assign(voltages_.size(), 0);
  for (std::size_t e = 0; e < voltages_.size(); ++e) {
    for (int letter : voltages_[e]) {
      if (letter == 0 || std::abs(letter) > fiber_.generator_count()) {
        throw ArgumentError("voltage on edge " + std::to_string(e) + " uses generator " + std::to_string(letter) +
                            " outside the fiber action");
      }
    }
    Word r = reduce_word(voltages_[e]);
    voltages_[e] = r;
    if (r.empty()) continue;
    const Word inv = inverse_word(r);
    int found = 0;
    for (std::size_t k = 0; k < tile_generators_.size() && found == 0; ++k) {
      if (tile_generators_[k] == r) found = static_cast<int>(k + 1);
      else if (tile_generators_[k] == inv) found = -static_cast<int>(k + 1);
    }
    if (found == 0) {
      tile_generators_.push_back(r);
      found = static_cast<int>(tile_generators_.size());
    }
    edge_generator_[e] = found;
  }
  tile_action_ = tile_generators_.empty() ? GroupAction::quotient(fiber_, {Word{}})
                                          : GroupAction::quotient(fiber_, tile_generators_);
}

Point VoltageCover::monodromy(std::size_t e, bool forward, const Point& x) const {
  const int g = edge_generator_.at(e);
  if (g == 0) return x;
  return tile_action_.act(Generator{forward ? g : -g}, x);
}

std::shared_ptr<const std::vector<Point>> VoltageCover::tile_ball(const Point& centre, int radius,
                                                                  std::size_t budget) const {
  const bool memo = centre == root_;
  if (memo) {
    std::lock_guard lock(cache_->mutex);
    auto it = cache_->balls.find(radius);
    if (it != cache_->balls.end() && it->second->size() <= budget) return it->second;
  }
  auto ball = std::make_shared<const std::vector<Point>>(orbit_ball(tile_action_, centre, radius, budget).points);
  if (memo) {
    std::lock_guard lock(cache_->mutex);
    // First writer wins so every reader sees the same object.
    auto [it, inserted] = cache_->balls.emplace(radius, ball);
    return it->second;
  }
  return ball;
}

CoverWindow VoltageCover::window(std::span<const Point> tiles) const {
  CoverWindow w;
  w.tiles.assign(tiles.begin(), tiles.end());
  std::sort(w.tiles.begin(), w.tiles.end());
  w.tiles.erase(std::unique(w.tiles.begin(), w.tiles.end()), w.tiles.end());
  for (const auto& x : w.tiles) {
    if (!fiber_.contains(x)) throw ArgumentError("window tile is not a fiber point");
  }
  const std::size_t nb = base_.vertex_count();
  w.base_size = nb;
  const std::size_t n = w.tiles.size() * nb;
  std::vector<double> mu(n);
  std::vector<double> ext(n, 0.0);
  std::vector<Edge> edges;
  edges.reserve(w.tiles.size() * base_.edge_count());
  for (std::size_t t = 0; t < w.tiles.size(); ++t) {
    for (std::size_t v = 0; v < nb; ++v) mu[w.vertex(t, v)] = base_.mu(v);
  }
  for (std::size_t t = 0; t < w.tiles.size(); ++t) {
    const auto& x = w.tiles[t];
    for (std::size_t e = 0; e < base_.edge_count(); ++e) {
      const auto& be = base_.edges()[e];
      const std::size_t p = w.vertex(t, be.u);
      const std::size_t tq = w.tile_index(monodromy(e, true, x));
      if (tq != CoverWindow::npos) {
        edges.push_back({p, w.vertex(tq, be.v), be.w});
      } else {
        ext[p] += be.w;
      }
      // The same cover edge seen from its v end; added above when its u end is inside.
      if (w.tile_index(monodromy(e, false, x)) == CoverWindow::npos) ext[w.vertex(t, be.v)] += be.w;
    }
  }
  w.graph = WeightedGraph(std::move(mu), std::move(edges), std::move(ext));
  return w;
}

bool VoltageCover::is_tree_cover() const {
  if (fiber_.kind() != ActionKind::free_group) return false;
  const int rank = fiber_.generator_count();
  std::vector<int> uses(static_cast<std::size_t>(rank) + 1, 0);
  for (const auto& v : voltages_) {
    if (v.size() > 1) return false;
    if (v.size() == 1) ++uses[static_cast<std::size_t>(std::abs(v[0]))];
  }
  // The cover is a tree iff the identity-voltage edges form a spanning tree
  // and the remaining edges carry distinct free generators.
  const std::size_t tree_edges = static_cast<std::size_t>(
      std::count_if(voltages_.begin(), voltages_.end(), [](const Word& w) { return w.empty(); }));
  if (tree_edges + 1 != base_.vertex_count()) return false;
  for (int g = 1; g <= rank; ++g) {
    if (uses[static_cast<std::size_t>(g)] != 1) return false;
  }
  // Identity edges must connect the base.
  std::vector<std::size_t> parent(base_.vertex_count());
  for (std::size_t v = 0; v < parent.size(); ++v) parent[v] = v;
  auto find = [&](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (std::size_t e = 0; e < voltages_.size(); ++e) {
    if (!voltages_[e].empty()) continue;
    const auto a = find(base_.edges()[e].u);
    const auto b = find(base_.edges()[e].v);
    if (a == b) return false;
    parent[a] = b;
  }
  return true;
}

VoltageCover build_cover(WeightedGraph base, GroupAction fiber, std::vector<Word> voltages,
                         std::optional<Point> root_tile) {
  if (base.vertex_count() == 0) throw ArgumentError("base graph has no vertices");
  if (!base.connected()) throw ArgumentError("base graph is not connected");
  for (std::size_t v = 0; v < base.vertex_count(); ++v) {
    if (base.exterior_weight(v) != 0) throw ArgumentError("base graph must not carry exterior stubs");
  }
  return VoltageCover(std::move(base), std::move(fiber), std::move(voltages), std::move(root_tile));
}

GroupAction fiber_action(const VoltageCover& cover) { return cover.tile_action(); }

Potential lift_potential(const CoverWindow& window, const Potential& V) {
  if (V.size() != window.base_size) throw ArgumentError("potential size does not match the base");
  std::vector<double> out(window.graph.vertex_count());
  for (std::size_t p = 0; p < out.size(); ++p) out[p] = V[window.project(p)];
  return Potential(std::move(out));
}

CoverFunction lift_function(const VoltageCover& cover, const CompactFunction& f, std::span<const Point> tiles) {
  if (f.size() != cover.base().vertex_count()) throw ArgumentError("function size does not match the base");
  CoverFunction out{cover.window(tiles), {}};
  std::vector<double> values(out.window.graph.vertex_count());
  for (std::size_t p = 0; p < values.size(); ++p) values[p] = f[out.window.project(p)];
  out.values = CompactFunction(std::move(values));
  return out;
}

double CutoffFunction::max_jump() const {
  double m = 0;
  const auto& g = window.graph;
  for (const auto& e : g.edges()) m = std::max(m, std::abs(xi[e.u] - xi[e.v]));
  for (std::size_t p = 0; p < g.vertex_count(); ++p) {
    if (g.exterior_weight(p) > 0) m = std::max(m, xi[p]);
  }
  return m;
}

CutoffFunction cutoff(const VoltageCover& cover, std::span<const Point> E, int alpha) {
  if (E.empty()) throw ArgumentError("cutoff needs a nonempty tile set");
  if (alpha < 1) throw ArgumentError("collar width must be a positive integer");
  CutoffFunction c;
  c.alpha = alpha;
  c.window = cover.window(E);
  c.omega = c.window.tiles;
  const auto& g = c.window.graph;
  const std::size_t n = g.vertex_count();

  // Multi-source BFS: vertices with an edge leaving Ω are one hop from the complement.
  c.distance.assign(n, CutoffFunction::kUnreachable);
  std::deque<std::size_t> queue;
  for (std::size_t p = 0; p < n; ++p) {
    if (g.exterior_weight(p) > 0) {
      c.distance[p] = 1;
      queue.push_back(p);
    }
  }
  while (!queue.empty()) {
    const auto p = queue.front();
    queue.pop_front();
    for (const auto& nb : g.neighbors(p)) {
      if (c.distance[nb.vertex] == CutoffFunction::kUnreachable) {
        c.distance[nb.vertex] = c.distance[p] + 1;
        queue.push_back(nb.vertex);
      }
    }
  }

  c.xi.assign(n, 1.0);
  for (std::size_t p = 0; p < n; ++p) {
    const int d = c.distance[p];
    if (d != CutoffFunction::kUnreachable && d < alpha) c.xi[p] = static_cast<double>(d) / alpha;
  }

  std::vector<char> collar(c.window.tiles.size(), 0);
  for (std::size_t p = 0; p < n; ++p) {
    if (c.xi[p] < 1.0 || g.exterior_weight(p) > 0) collar[c.window.tile_of(p)] = 1;
  }
  for (const auto& e : g.edges()) {
    if (c.xi[e.u] != c.xi[e.v]) {
      collar[c.window.tile_of(e.u)] = 1;
      collar[c.window.tile_of(e.v)] = 1;
    }
  }
  for (std::size_t t = 0; t < collar.size(); ++t) {
    if (collar[t]) c.collar_tiles.push_back(c.window.tiles[t]);
  }
  return c;
}

}  // namespace coverlab
