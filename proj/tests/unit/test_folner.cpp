#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <random>
#include <set>

#include "coverlab/errors.hpp"
#include "coverlab/folner.hpp"
#include "oracles.hpp"

using namespace coverlab;

namespace {

std::vector<Point> interval(int lo, int hi) {
  std::vector<Point> E;
  for (int i = lo; i <= hi; ++i) E.push_back({i});
  return E;
}

// Oracle ratio: ♯(E △ γE)/♯E computed with std::set.
Rational brute_ratio(const GroupAction& action, const std::vector<Point>& E, Generator g) {
  std::set<Point> S(E.begin(), E.end()), T;
  for (const auto& x : E) T.insert(action.act(g, x));
  std::int64_t sym = 0;
  for (const auto& x : S) sym += !T.contains(x);
  for (const auto& x : T) sym += !S.contains(x);
  return Rational(sym, static_cast<std::int64_t>(E.size()));
}

}  // namespace

TEST(RationalParse, ExactDecimalsAndFractions) {
  EXPECT_EQ(Rational::parse("0.05"), Rational(1, 20));
  EXPECT_EQ(Rational::parse("1/20"), Rational(1, 20));
  EXPECT_EQ(Rational::parse("-3"), Rational(-3));
  EXPECT_EQ(Rational::parse("2.5e-3"), Rational(1, 400));
  EXPECT_EQ(Rational::parse("0.1"), Rational(1, 10));
  EXPECT_THROW(Rational::parse(""), ArgumentError);
  EXPECT_THROW(Rational::parse("abc"), ArgumentError);
  EXPECT_THROW(Rational::parse("1/0"), ArgumentError);
  EXPECT_THROW(Rational::parse("0.1x"), ArgumentError);
}

TEST(RationalParse, OrderingAndFloor) {
  EXPECT_LT(Rational(1, 3), Rational(1, 2));
  EXPECT_EQ(Rational(2, 4), Rational(1, 2));
  EXPECT_EQ(Rational(3, -6), Rational(-1, 2));
  EXPECT_LE(Rational::floor_of(1.0 / 3.0, 1000).to_double(), 1.0 / 3.0);
  EXPECT_EQ(Rational::floor_of(0.5, 1000), Rational(1, 2));
}

TEST(VerifyCertificate, IntervalOfLengthTwenty) {
  const auto cert = verify_certificate(GroupAction::lattice(1), interval(0, 19), Rational(1, 10));
  EXPECT_EQ(cert.size(), 20u);
  EXPECT_EQ(cert.max_ratio(), Rational(1, 10));
  EXPECT_EQ(cert.boundary_ratio, Rational(1, 10));
  ASSERT_EQ(cert.ratios.size(), 2u);
  for (const auto& gr : cert.ratios)
    EXPECT_EQ(gr.ratio, brute_ratio(GroupAction::lattice(1), cert.points, gr.generator));
}

TEST(VerifyCertificate, FreeGroupBallFails) {
  const auto f2 = GroupAction::free_group(2);
  const auto ball = orbit_ball(f2, {}, 3).points;
  try {
    verify_certificate(f2, ball, Rational(3, 10));
    FAIL() << "expected VerificationFailed";
  } catch (const VerificationFailed& e) {
    EXPECT_GT(e.ratio(), Rational(3, 10));
    EXPECT_EQ(e.ratio(), brute_ratio(f2, ball, e.generator()));
  }
}

TEST(VerifyCertificate, ArgumentChecks) {
  const auto z = GroupAction::lattice(1);
  EXPECT_THROW(verify_certificate(z, std::vector<Point>{}, Rational(1, 2)), ArgumentError);
  EXPECT_THROW(verify_certificate(z, interval(0, 3), Rational(0)), ArgumentError);
  EXPECT_THROW(verify_certificate(z, interval(0, 3), Rational(3, 2)), ArgumentError);
}

TEST(MeasureSet, MatchesBruteForceOnRandomSets) {
  std::mt19937_64 rng(7);
  const std::vector<GroupAction> actions{GroupAction::lattice(2), GroupAction::free_group(2),
                                         GroupAction::finite_permutation({{1, 2, 3, 0}, {1, 0, 2, 3}})};
  for (const auto& action : actions) {
    const auto ball = orbit_ball(action, action.origin(), 4).points;
    for (int t = 0; t < 30; ++t) {
      std::vector<Point> E;
      for (const auto& p : ball)
        if (rng() % 3 == 0) E.push_back(p);
      if (E.empty()) continue;
      const auto cert = measure_set(action, E);
      for (const auto& gr : cert.ratios) EXPECT_EQ(gr.ratio, brute_ratio(action, E, gr.generator));
    }
  }
}

TEST(BoundaryBound, Examples) {
  const auto b = folner_boundary_bound(GroupAction::lattice(1), interval(1, 100));
  EXPECT_EQ(b.lhs, 2);
  EXPECT_EQ(b.rhs, 2);
  const auto f2 = GroupAction::free_group(2);
  const auto ball = orbit_ball(f2, {}, 2).points;
  const auto bb = folner_boundary_bound(f2, ball);
  EXPECT_EQ(bb.lhs, 12);
  EXPECT_GE(bb.rhs, bb.lhs);
}

TEST(SearchFolner, IntegersAtOnePercent) {
  const auto r = search_folner(GroupAction::lattice(1), Rational(1, 100));
  ASSERT_TRUE(r.found());
  EXPECT_GE(r.certificate().size(), 200u);
  EXPECT_LE(r.certificate().max_ratio(), Rational(1, 100));
  verify_certificate(GroupAction::lattice(1), r.certificate().points, Rational(1, 100));
}

TEST(SearchFolner, PlaneAtTenPercent) {
  const auto z2 = GroupAction::lattice(2);
  const auto r = search_folner(z2, Rational(1, 10));
  ASSERT_TRUE(r.found());
  EXPECT_LE(r.certificate().max_ratio(), Rational(1, 10));
  EXPECT_NO_THROW(verify_certificate(z2, r.certificate().points, Rational(1, 10)));
}

TEST(SearchFolner, FiniteActionCertifiesWithWholeOrbit) {
  const auto s4 = GroupAction::finite_permutation({{1, 2, 3, 0}, {1, 0, 2, 3}});
  const auto r = search_folner(s4, Rational(1, 1000));
  ASSERT_TRUE(r.found());
  EXPECT_EQ(r.certificate().size(), 4u);
  EXPECT_EQ(r.certificate().max_ratio(), Rational(0));
}

TEST(SearchFolner, CosetActionCertifies) {
  const auto q = GroupAction::quotient(GroupAction::lattice(1), {{1}, {}});
  for (const auto eps : {Rational(1, 10), Rational(1, 100)}) {
    const auto r = search_folner(q, eps);
    ASSERT_TRUE(r.found());
    EXPECT_LE(r.certificate().max_ratio(), eps);
  }
}

TEST(SearchFolner, FreeGroupExhaustsAboveOneHalf) {
  SearchBudget budget;
  budget.max_radius = 6;
  budget.subset_cap = 8;
  const auto r = search_folner(GroupAction::free_group(2), Rational(3, 10), budget);
  ASSERT_FALSE(r.found());
  const auto& ex = r.exhaustion();
  EXPECT_GE(ex.best_ratio_found, Rational(1, 2));
  EXPECT_EQ(ex.radius_reached, 6);
  EXPECT_EQ(ex.subset_size_reached, 8);
  EXPECT_TRUE(ex.subset_search_complete);
  EXPECT_EQ(measure_set(GroupAction::free_group(2), ex.best_set).max_ratio(), ex.best_ratio_found);
  EXPECT_FALSE(ex.message().empty());
}

// Brute force over connected subsets of the radius-2 ball containing the origin.
TEST(SearchFolner, SubsetPhaseMatchesBruteForce) {
  const auto f2 = GroupAction::free_group(2);
  const auto words = oracle::reduced_words(2, 2);
  std::vector<Point> pts;
  for (const auto& w : words) pts.emplace_back(w.begin(), w.end());
  std::sort(pts.begin(), pts.end());
  const std::size_t n = pts.size();
  const int cap = 3;
  Rational best(2);
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    if (std::popcount(mask) > cap) continue;
    std::vector<Point> E;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1u) E.push_back(pts[i]);
    if (!std::binary_search(E.begin(), E.end(), Point{})) continue;
    // connectivity by flood fill
    std::set<Point> S(E.begin(), E.end()), seen{Point{}};
    std::vector<Point> stack{Point{}};
    while (!stack.empty()) {
      auto x = stack.back();
      stack.pop_back();
      for (auto g : f2.symmetric_generators()) {
        auto y = f2.act(g, x);
        if (S.contains(y) && seen.insert(y).second) stack.push_back(y);
      }
    }
    if (seen.size() != E.size()) continue;
    Rational worst(0);
    for (auto g : f2.symmetric_generators()) worst = std::max(worst, brute_ratio(f2, E, g));
    best = std::min(best, worst);
  }
  EXPECT_EQ(best, Rational(4, 3));
  SearchBudget budget;
  budget.max_radius = 0;
  budget.subset_cap = cap;
  const auto r = search_folner(f2, Rational(1, 10), budget);
  ASSERT_FALSE(r.found());
  EXPECT_EQ(r.exhaustion().best_ratio_found, best);
}

TEST(FolnerSequence, RunningMinimumDecreases) {
  const std::vector<Rational> eps{Rational(1, 2), Rational(1, 10), Rational(1, 50)};
  const auto seq = folner_sequence(GroupAction::lattice(1), eps);
  ASSERT_EQ(seq.certificates.size(), 3u);
  EXPECT_FALSE(seq.truncated_by.has_value());
  const auto mins = seq.running_min_ratios();
  for (std::size_t i = 0; i < mins.size(); ++i) {
    EXPECT_LE(mins[i], eps[i]);
    if (i > 0) {
      EXPECT_LE(mins[i], mins[i - 1]);
    }
  }
  const std::vector<Rational> bad{Rational(1, 10), Rational(1, 2)};
  EXPECT_THROW(folner_sequence(GroupAction::lattice(1), bad), ArgumentError);
}

TEST(FolnerSequence, TruncatedOnFreeGroup) {
  SearchBudget budget;
  budget.max_radius = 4;
  budget.subset_cap = 5;
  // Every finite set in F2 has some generator ratio above 1.
  const std::vector<Rational> eps{Rational(1, 1), Rational(1, 10)};
  const auto seq = folner_sequence(GroupAction::free_group(2), eps, budget);
  EXPECT_TRUE(seq.certificates.empty());
  EXPECT_TRUE(seq.truncated_by.has_value());
}

TEST(CertificateJson, RoundTripReverifies) {
  const auto z2 = GroupAction::lattice(2);
  const auto cert = search_folner(z2, Rational(1, 5)).certificate();
  const auto j = certificate_to_json(cert);
  const auto back = certificate_from_json(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(back.points, cert.points);
  EXPECT_EQ(back.epsilon, cert.epsilon);
  EXPECT_EQ(back.max_ratio(), cert.max_ratio());
  EXPECT_NO_THROW(verify_certificate(z2, back.points, back.epsilon));
}
