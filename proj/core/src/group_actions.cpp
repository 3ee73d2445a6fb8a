#include "coverlab/group_actions.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "coverlab/errors.hpp"

namespace coverlab {

Word reduce_word(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (int letter : w) {
    if (letter == 0) throw ArgumentError("word contains the invalid letter 0");
    if (!out.empty() && out.back() == -letter) {
      out.pop_back();
    } else {
      out.push_back(letter);
    }
  }
  return out;
}

Word inverse_word(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (int& letter : out) letter = -letter;
  return out;
}

std::string to_string(ActionKind kind) {
  switch (kind) {
    case ActionKind::lattice: return "lattice";
    case ActionKind::free_group: return "free_group";
    case ActionKind::finite_permutation: return "finite_permutation";
    case ActionKind::quotient: return "quotient";
  }
  return "unknown";
}

namespace {

class LatticeRule final : public ActionRule {
 public:
  explicit LatticeRule(int dim) : dim_(dim) {}
  ActionKind kind() const override { return ActionKind::lattice; }
  int generator_count() const override { return dim_; }
  Point apply(int g, const Point& x) const override {
    Point y = x;
    y[static_cast<std::size_t>(std::abs(g) - 1)] += g > 0 ? 1 : -1;
    return y;
  }
  Point origin() const override { return Point(static_cast<std::size_t>(dim_), 0); }
  bool contains(const Point& x) const override { return x.size() == static_cast<std::size_t>(dim_); }
  std::string describe() const override { return "Z^" + std::to_string(dim_) + " by translations"; }

 private:
  int dim_;
};

class FreeGroupRule final : public ActionRule {
 public:
  explicit FreeGroupRule(int rank) : rank_(rank) {}
  ActionKind kind() const override { return ActionKind::free_group; }
  int generator_count() const override { return rank_; }
  Point apply(int g, const Point& x) const override {
    if (!x.empty() && x.front() == -g) return Point(x.begin() + 1, x.end());
    Point y;
    y.reserve(x.size() + 1);
    y.push_back(g);
    y.insert(y.end(), x.begin(), x.end());
    return y;
  }
  Point origin() const override { return {}; }
  bool contains(const Point& x) const override {
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] == 0 || std::abs(x[i]) > rank_) return false;
      if (i > 0 && x[i] == -x[i - 1]) return false;
    }
    return true;
  }
  std::string describe() const override { return "F_" + std::to_string(rank_) + " on reduced words"; }

 private:
  int rank_;
};

class PermutationRule final : public ActionRule {
 public:
  explicit PermutationRule(std::vector<std::vector<int>> gens) : forward_(std::move(gens)) {
    if (forward_.empty()) throw ArgumentError("finite permutation action needs at least one generator");
    degree_ = forward_.front().size();
    if (degree_ == 0) throw ArgumentError("finite permutation action on an empty set");
    for (std::size_t k = 0; k < forward_.size(); ++k) {
      const auto& p = forward_[k];
      if (p.size() != degree_) throw ArgumentError("generator permutations have different degrees");
      std::vector<int> inv(degree_, -1);
      for (std::size_t i = 0; i < degree_; ++i) {
        const int img = p[i];
        if (img < 0 || static_cast<std::size_t>(img) >= degree_ || inv[static_cast<std::size_t>(img)] != -1) {
          throw ArgumentError("generator " + std::to_string(k + 1) + " is not a bijection");
        }
        inv[static_cast<std::size_t>(img)] = static_cast<int>(i);
      }
      inverse_.push_back(std::move(inv));
    }
  }
  ActionKind kind() const override { return ActionKind::finite_permutation; }
  int generator_count() const override { return static_cast<int>(forward_.size()); }
  Point apply(int g, const Point& x) const override {
    const auto& table = g > 0 ? forward_[static_cast<std::size_t>(g - 1)] : inverse_[static_cast<std::size_t>(-g - 1)];
    return {table[static_cast<std::size_t>(x[0])]};
  }
  Point origin() const override { return {0}; }
  bool contains(const Point& x) const override {
    return x.size() == 1 && x[0] >= 0 && static_cast<std::size_t>(x[0]) < degree_;
  }
  std::string describe() const override {
    return std::to_string(forward_.size()) + " permutations of " + std::to_string(degree_) + " points";
  }
  std::size_t degree() const { return degree_; }

 private:
  std::vector<std::vector<int>> forward_;
  std::vector<std::vector<int>> inverse_;
  std::size_t degree_ = 0;
};

class QuotientRule final : public ActionRule {
 public:
  QuotientRule(GroupAction inner, std::vector<Word> images) : inner_(std::move(inner)) {
    if (images.empty()) throw ArgumentError("quotient action needs at least one generator image");
    for (auto& w : images) {
      for (int letter : w) {
        if (letter == 0 || std::abs(letter) > inner_.generator_count()) {
          throw ArgumentError("surjection table refers to generator " + std::to_string(letter) +
                              " outside the inner action");
        }
      }
      Word r = reduce_word(w);
      inverse_.push_back(inverse_word(r));
      forward_.push_back(std::move(r));
    }
  }
  ActionKind kind() const override { return ActionKind::quotient; }
  int generator_count() const override { return static_cast<int>(forward_.size()); }
  Point apply(int g, const Point& x) const override {
    const auto& w = g > 0 ? forward_[static_cast<std::size_t>(g - 1)] : inverse_[static_cast<std::size_t>(-g - 1)];
    return inner_.act(w, x);
  }
  Point origin() const override { return inner_.origin(); }
  bool contains(const Point& x) const override { return inner_.contains(x); }
  std::string describe() const override {
    std::ostringstream os;
    os << forward_.size() << " generators acting through [" << inner_.describe() << "]";
    return os.str();
  }

 private:
  GroupAction inner_;
  std::vector<Word> forward_;
  std::vector<Word> inverse_;
};

}  // namespace

GroupAction::GroupAction(std::shared_ptr<const ActionRule> rule) : rule_(std::move(rule)) {
  if (!rule_) throw ArgumentError("null action rule");
  if (rule_->generator_count() <= 0) throw ArgumentError("an action needs a positive generator count");
}

GroupAction GroupAction::lattice(int dimension) {
  if (dimension <= 0) throw ArgumentError("lattice dimension must be positive");
  return GroupAction(std::make_shared<LatticeRule>(dimension));
}

GroupAction GroupAction::free_group(int rank) {
  if (rank <= 0) throw ArgumentError("free group rank must be positive");
  return GroupAction(std::make_shared<FreeGroupRule>(rank));
}

GroupAction GroupAction::finite_permutation(std::vector<std::vector<int>> generators) {
  return GroupAction(std::make_shared<PermutationRule>(std::move(generators)));
}

GroupAction GroupAction::quotient(GroupAction inner, std::vector<Word> images) {
  return GroupAction(std::make_shared<QuotientRule>(std::move(inner), std::move(images)));
}

std::vector<Generator> GroupAction::symmetric_generators() const {
  std::vector<Generator> out;
  for (int i = 1; i <= generator_count(); ++i) {
    out.push_back(Generator{i});
    out.push_back(Generator{-i});
  }
  return out;
}

Point GroupAction::act(Generator g, const Point& x) const {
  if (g.index == 0 || std::abs(g.index) > generator_count()) {
    throw ArgumentError("invalid generator index " + std::to_string(g.index) + " for an action with " +
                        std::to_string(generator_count()) + " generators");
  }
  return rule_->apply(g.index, x);
}

Point GroupAction::act(const Word& w, const Point& x) const {
  Point y = x;
  for (auto it = w.rbegin(); it != w.rend(); ++it) y = act(Generator{*it}, y);
  return y;
}

Point act(const GroupAction& action, Generator g, const Point& x) { return action.act(g, x); }

std::size_t OrbitGraph::index_of(const Point& p) const {
  auto it = std::lower_bound(points.begin(), points.end(), p);
  if (it == points.end() || *it != p) return LabeledEdge::npos;
  return static_cast<std::size_t>(it - points.begin());
}

std::size_t OrbitGraph::interior_edge_count() const {
  return static_cast<std::size_t>(
      std::count_if(edges.begin(), edges.end(), [](const LabeledEdge& e) { return !e.exterior(); }));
}

OrbitGraph orbit_ball(const GroupAction& action, const Point& center, int radius, std::size_t budget) {
  if (radius < 0) throw ArgumentError("orbit ball radius must be non-negative");
  if (!action.contains(center)) throw ArgumentError("centre is not a point of the action");

  const auto gens = action.symmetric_generators();
  std::unordered_map<Point, int, PointHash> seen;
  std::vector<Point> frontier{center};
  seen.emplace(center, 0);
  for (int d = 1; d <= radius && !frontier.empty(); ++d) {
    std::vector<Point> next;
    for (const auto& x : frontier) {
      for (auto g : gens) {
        Point y = action.act(g, x);
        if (seen.emplace(y, d).second) {
          if (seen.size() > budget) throw BudgetExceeded("orbit ball enumeration", seen.size());
          next.push_back(std::move(y));
        }
      }
    }
    frontier = std::move(next);
  }

  OrbitGraph ball;
  ball.generator_count = action.generator_count();
  ball.points.reserve(seen.size());
  for (const auto& [p, d] : seen) ball.points.push_back(p);
  std::sort(ball.points.begin(), ball.points.end());
  ball.depth.reserve(ball.points.size());
  for (const auto& p : ball.points) ball.depth.push_back(seen.at(p));

  ball.edges.reserve(ball.points.size() * gens.size());
  for (std::size_t i = 0; i < ball.points.size(); ++i) {
    for (auto g : gens) {
      ball.edges.push_back({i, g, ball.index_of(action.act(g, ball.points[i]))});
    }
  }
  return ball;
}

std::vector<Point> boundary(const GroupAction& action, std::span<const Point> E) {
  std::unordered_set<Point, PointHash> members(E.begin(), E.end());
  const auto gens = action.symmetric_generators();
  std::vector<Point> out;
  for (const auto& x : members) {
    for (auto g : gens) {
      if (!members.contains(action.act(g, x))) {
        out.push_back(x);
        break;
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::size_t> boundary(const OrbitGraph& graph, std::span<const std::size_t> members) {
  std::vector<char> in(graph.points.size(), 0);
  for (auto m : members) {
    if (m >= graph.points.size()) throw ArgumentError("boundary: member index outside the window");
    in[m] = 1;
  }
  std::vector<char> on_boundary(graph.points.size(), 0);
  for (const auto& e : graph.edges) {
    if (in[e.from] && (e.exterior() || !in[e.to])) on_boundary[e.from] = 1;
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < on_boundary.size(); ++i) {
    if (on_boundary[i]) out.push_back(i);
  }
  return out;
}

}  // namespace coverlab
