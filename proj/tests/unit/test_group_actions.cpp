#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "coverlab/errors.hpp"
#include "coverlab/folner.hpp"
#include "coverlab/group_actions.hpp"
#include "oracles.hpp"

using namespace coverlab;

namespace {

GroupAction coset_z() { return GroupAction::quotient(GroupAction::lattice(1), {{1}, {}}); }

std::vector<GroupAction> builtin_actions() {
  return {GroupAction::lattice(1), GroupAction::lattice(2), GroupAction::free_group(2),
          GroupAction::finite_permutation({{1, 2, 3, 4, 0}, {1, 0, 2, 3, 4}}), coset_z()};
}

}  // namespace

TEST(Act, LatticeTranslation) {
  auto z = GroupAction::lattice(1);
  EXPECT_EQ(z.act(Generator{1}, Point{5}), (Point{6}));
  EXPECT_EQ(act(z, Generator{-1}, Point{5}), (Point{4}));
}

TEST(Act, FreeGroupPrependsAndReduces) {
  auto f2 = GroupAction::free_group(2);  // a = 1, b = 2
  EXPECT_EQ(f2.act(Generator{1}, Point{2}), (Point{1, 2}));
  EXPECT_EQ(f2.act(Generator{-1}, Point{1, 2}), (Point{2}));
}

TEST(Act, CosetActionIdentityImage) {
  auto q = coset_z();
  EXPECT_EQ(q.act(Generator{2}, Point{7}), (Point{7}));
  EXPECT_EQ(q.act(Generator{1}, Point{7}), (Point{8}));
}

TEST(Act, InvalidGeneratorIsArgumentError) {
  auto z2 = GroupAction::lattice(2);
  EXPECT_THROW(z2.act(Generator{0}, Point{0, 0}), ArgumentError);
  EXPECT_THROW(z2.act(Generator{3}, Point{0, 0}), ArgumentError);
  EXPECT_THROW(z2.act(Generator{-3}, Point{0, 0}), ArgumentError);
}

TEST(Act, NonBijectivePermutationRejected) {
  EXPECT_THROW(GroupAction::finite_permutation({{0, 0, 1}}), ArgumentError);
  EXPECT_THROW(GroupAction::finite_permutation({{0, 1}, {0, 1, 2}}), ArgumentError);
}

TEST(Act, WordsApplyRightmostFirst) {
  auto f2 = GroupAction::free_group(2);
  EXPECT_EQ(f2.act(Word{1, 2}, f2.origin()), (Point{1, 2}));
  EXPECT_EQ(reduce_word({1, 2, -2, -1, 2}), (Word{2}));
  EXPECT_EQ(inverse_word({1, -2}), (Word{2, -1}));
}

TEST(GroupActionProperty, GeneratorRoundTripOnRadiusFiveBalls) {
  for (const auto& action : builtin_actions()) {
    const auto ball = orbit_ball(action, action.origin(), 5);
    for (const auto& x : ball.points) {
      for (auto g : action.symmetric_generators()) {
        EXPECT_EQ(action.act(g.inverse(), action.act(g, x)), x) << action.describe();
      }
    }
  }
}

TEST(GroupActionProperty, BallsAreNested) {
  for (const auto& action : builtin_actions()) {
    for (int r = 0; r < 5; ++r) {
      const auto small = orbit_ball(action, action.origin(), r).points;
      const auto big = orbit_ball(action, action.origin(), r + 1).points;
      EXPECT_TRUE(std::includes(big.begin(), big.end(), small.begin(), small.end())) << action.describe();
    }
  }
}

TEST(OrbitBall, IntervalWithSixInteriorEdges) {
  const auto ball = orbit_ball(GroupAction::lattice(1), Point{0}, 3);
  ASSERT_EQ(ball.points.size(), 7u);
  EXPECT_EQ(ball.points.front(), (Point{-3}));
  EXPECT_EQ(ball.points.back(), (Point{3}));
  // Each of the 6 undirected edges appears once per orientation.
  EXPECT_EQ(ball.interior_edge_count(), 12u);
  EXPECT_EQ(ball.edges.size(), 14u);
}

TEST(OrbitBall, FreeGroupRadiusTwoMatchesWordEnumeration) {
  const auto ball = orbit_ball(GroupAction::free_group(2), {}, 2);
  auto words = oracle::reduced_words(2, 2);
  ASSERT_EQ(words.size(), 17u);
  std::set<Point> expected;
  for (const auto& w : words) expected.insert(Point(w.begin(), w.end()));
  EXPECT_EQ(std::set<Point>(ball.points.begin(), ball.points.end()), expected);
}

TEST(OrbitBall, LatticeBallsMatchL1Count) {
  EXPECT_EQ(oracle::l1_ball_count(2, 2), 13u);
  for (int r = 0; r <= 6; ++r) {
    EXPECT_EQ(orbit_ball(GroupAction::lattice(2), {0, 0}, r).points.size(), oracle::l1_ball_count(2, r));
    EXPECT_EQ(orbit_ball(GroupAction::lattice(3), {0, 0, 0}, r).points.size(), oracle::l1_ball_count(3, r));
  }
}

TEST(OrbitBall, FreeGroupSizesMatchEnumeration) {
  for (int rank = 1; rank <= 3; ++rank) {
    for (int r = 0; r <= 4; ++r) {
      EXPECT_EQ(orbit_ball(GroupAction::free_group(rank), {}, r).points.size(),
                oracle::reduced_words(rank, r).size());
    }
  }
}

TEST(OrbitBall, OrderingIsCanonicalAndEdgesFlagged) {
  const auto ball = orbit_ball(GroupAction::lattice(2), {0, 0}, 3);
  EXPECT_TRUE(std::is_sorted(ball.points.begin(), ball.points.end()));
  for (const auto& e : ball.edges) {
    const auto image = GroupAction::lattice(2).act(e.generator, ball.points[e.from]);
    if (e.exterior()) {
      EXPECT_EQ(ball.index_of(image), LabeledEdge::npos);
    } else {
      EXPECT_EQ(ball.points[e.to], image);
    }
  }
}

TEST(OrbitBall, BudgetExceededCarriesPartialCount) {
  try {
    orbit_ball(GroupAction::free_group(2), {}, 20, 1000);
    FAIL() << "expected BudgetExceeded";
  } catch (const BudgetExceeded& e) {
    EXPECT_GE(e.partial_count(), 1000u);
  }
  EXPECT_THROW(orbit_ball(GroupAction::lattice(1), {0}, -1), ArgumentError);
}

TEST(Boundary, IntervalEndpoints) {
  std::vector<Point> E;
  for (int i = 1; i <= 100; ++i) E.push_back({i});
  EXPECT_EQ(boundary(GroupAction::lattice(1), E), (std::vector<Point>{{1}, {100}}));
  EXPECT_TRUE(boundary(GroupAction::lattice(1), std::vector<Point>{}).empty());
}

TEST(Boundary, BoxPerimeter) {
  std::vector<Point> E;
  for (int x = 0; x < 40; ++x)
    for (int y = 0; y < 40; ++y) E.push_back({x, y});
  const auto b = boundary(GroupAction::lattice(2), E);
  EXPECT_EQ(b.size(), 156u);
  EXPECT_EQ(Rational(static_cast<std::int64_t>(b.size()), 1600), Rational(975, 10000));
}

TEST(Boundary, FreeGroupBallIsOuterSphere) {
  const auto f2 = GroupAction::free_group(2);
  const auto ball = orbit_ball(f2, {}, 2);
  const auto b = boundary(f2, ball.points);
  // Oracle: words whose every one-letter extension stays in the ball.
  std::size_t inner = 0;
  for (const auto& w : oracle::reduced_words(2, 2)) inner += w.size() < 2;
  EXPECT_EQ(b.size(), ball.points.size() - inner);
  EXPECT_EQ(b.size(), 12u);
  for (const auto& p : b) EXPECT_EQ(p.size(), 2u);

  std::vector<std::size_t> all(ball.points.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  EXPECT_EQ(boundary(ball, all).size(), 12u);
}

TEST(GroupActionProperty, BoundarySubadditivityOnRandomSets) {
  std::mt19937_64 rng(20240917);
  for (const auto& action : builtin_actions()) {
    const auto ball = orbit_ball(action, action.origin(), 6);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<Point> E;
      const double keep = std::uniform_real_distribution<double>(0.05, 0.95)(rng);
      for (const auto& p : ball.points) {
        if (std::uniform_real_distribution<double>(0, 1)(rng) < keep) E.push_back(p);
      }
      if (E.empty()) E.push_back(action.origin());
      const auto bb = folner_boundary_bound(action, E);
      EXPECT_LE(bb.lhs, bb.rhs) << action.describe();
      EXPECT_EQ(bb.lhs, static_cast<std::int64_t>(boundary(action, E).size()));
    }
  }
}
