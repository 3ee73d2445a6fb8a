#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace coverlab {

/// Canonical encoding of a point acted on by a group: lattice coordinates,
/// the letters of a reduced word, or a one-element vector for permutation
/// actions. Lexicographic order on encodings is the canonical point order.
using Point = std::vector<std::int64_t>;

struct PointHash {
  std::size_t operator()(const Point& p) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL ^ p.size();
    for (auto x : p) {
      h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

/// Signed generator index. `-i` is the inverse of generator `i`; zero is invalid.
struct Generator {
  int index = 0;

  constexpr Generator inverse() const noexcept { return Generator{-index}; }
  friend constexpr bool operator==(Generator, Generator) = default;
};

/// A group element written in generator letters, e.g. {1, -2} = a·b⁻¹.
/// Acting on a point applies the rightmost letter first.
using Word = std::vector<int>;

/// Freely reduces adjacent inverse pairs.
Word reduce_word(const Word& w);
Word inverse_word(const Word& w);

enum class ActionKind { lattice, free_group, finite_permutation, quotient };

std::string to_string(ActionKind kind);

/// Rule interface behind GroupAction. Implementations are immutable.
class ActionRule {
 public:
  virtual ~ActionRule() = default;
  virtual ActionKind kind() const = 0;
  virtual int generator_count() const = 0;
  /// `g` is a validated nonzero index with |g| <= generator_count().
  virtual Point apply(int g, const Point& x) const = 0;
  virtual Point origin() const = 0;
  virtual bool contains(const Point& x) const = 0;
  virtual std::string describe() const = 0;
};

/// A finitely generated group acting on a countable set through a symmetric
/// system of generators. Cheap to copy; the rule is shared and immutable.
class GroupAction {
 public:
  explicit GroupAction(std::shared_ptr<const ActionRule> rule);

  /// ℤⁿ acting on itself by unit translations; generator i moves coordinate i-1.
  static GroupAction lattice(int dimension);
  /// Free group of the given rank acting on reduced words by left multiplication.
  static GroupAction free_group(int rank);
  /// Permutations of {0,…,m-1} in one-line notation, perm[i] = image of i.
  static GroupAction finite_permutation(std::vector<std::vector<int>> generators);
  /// Pulls `inner` back along a map sending generator i to the word images[i-1]
  /// in the inner generators (an empty word acts as the identity).
  static GroupAction quotient(GroupAction inner, std::vector<Word> images);

  ActionKind kind() const { return rule_->kind(); }
  int generator_count() const { return rule_->generator_count(); }
  /// {+1, -1, +2, -2, …}.
  std::vector<Generator> symmetric_generators() const;
  Point origin() const { return rule_->origin(); }
  bool contains(const Point& x) const { return rule_->contains(x); }
  std::string describe() const { return rule_->describe(); }
  const ActionRule& rule() const { return *rule_; }

  Point act(Generator g, const Point& x) const;
  Point act(const Word& w, const Point& x) const;

 private:
  std::shared_ptr<const ActionRule> rule_;
};

Point act(const GroupAction& action, Generator g, const Point& x);

struct LabeledEdge {
  std::size_t from = 0;
  Generator generator;
  /// Index into OrbitGraph::points, or npos when the image lies outside the ball.
  std::size_t to = 0;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  bool exterior() const { return to == npos; }
};

/// Finite window onto the Cayley graph of an action.
struct OrbitGraph {
  std::vector<Point> points;       ///< sorted by canonical encoding
  std::vector<int> depth;          ///< generator distance from the centre
  std::vector<LabeledEdge> edges;  ///< one per (point, symmetric generator)
  int generator_count = 0;

  std::size_t index_of(const Point& p) const;  ///< npos if absent
  std::size_t interior_edge_count() const;
};

inline constexpr std::size_t kDefaultPointBudget = 1'000'000;

/// Every point within `radius` generator steps of `center`.
/// Throws BudgetExceeded when more than `budget` points are reached.
OrbitGraph orbit_ball(const GroupAction& action, const Point& center, int radius,
                      std::size_t budget = kDefaultPointBudget);

/// Points of E that some symmetric generator moves outside E, in canonical order.
std::vector<Point> boundary(const GroupAction& action, std::span<const Point> E);
/// Same on a finite window; `members` are indices into graph.points.
std::vector<std::size_t> boundary(const OrbitGraph& graph, std::span<const std::size_t> members);

}  // namespace coverlab
