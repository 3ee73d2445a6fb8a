#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "coverlab/errors.hpp"
#include "coverlab/transfer.hpp"
#include "oracles.hpp"

using namespace coverlab;

namespace {

WeightedGraph k4(double mu = 1) {
  return WeightedGraph({mu, mu, mu, mu}, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}, {1, 2, 1}, {1, 3, 1}, {2, 3, 1}});
}

WeightedGraph triangle() { return WeightedGraph({1, 1, 1}, {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}}); }

VoltageCover triangle_cover() { return build_cover(triangle(), GroupAction::lattice(1), {{}, {}, {1}}); }

VoltageCover tree_cover() { return build_cover(k4(), GroupAction::free_group(3), {{}, {}, {}, {1}, {2}, {3}}); }

Potential uniform(std::size_t n, double v) { return Potential(std::vector<double>(n, v)); }

std::vector<Point> line_tiles(int lo, int hi) {
  std::vector<Point> t;
  for (int i = lo; i <= hi; ++i) t.push_back({i});
  return t;
}

}  // namespace

TEST(RequiredRatio, ConstantFunctionOnK4) {
  const CompactFunction f({1, 1, 1, 1});
  EXPECT_NEAR(required_ratio(k4(), f, 4, uniform(4, -0.1), 1), 0.4 / 0.65, 1e-15);
  EXPECT_NEAR(required_ratio(k4(), f, 1, uniform(4, -0.1), 1), 0.4 / 4.4, 1e-15);
}

TEST(RequiredRatio, GrowsWithCollarWidth) {
  const CompactFunction f({1, 1, 0.9});
  const Potential V({-1, -0.5, 0.1});
  double prev = 0;
  for (int alpha = 1; alpha <= 6; ++alpha) {
    const double r = required_ratio(triangle(), f, alpha, V, 1);
    EXPECT_GT(r, prev);
    prev = r;
  }
}

TEST(RequiredRatio, NonNegativeEnergyRejected) {
  EXPECT_THROW(required_ratio(k4(), CompactFunction({1, 1, 1, 1}), 1, uniform(4, 0.1), 1), ArgumentError);
  EXPECT_THROW(required_ratio(k4(), CompactFunction({1, 1, 1, 1}), 0, uniform(4, -0.1), 1), ArgumentError);
}

TEST(BuildWitness, TrivialCoverReproducesBase) {
  const auto cover = build_cover(k4(3), GroupAction::lattice(1), {{}, {}, {}, {}, {}, {}});
  const CompactFunction f({1, -0.5, 0.25, 2});
  const Potential V({-1, 0.5, 0.2, -0.3});
  const auto w = build_witness(cover, f, std::vector<Point>{{0}}, 2, V, 1.0);
  EXPECT_EQ(w.report.c, 1u);
  EXPECT_EQ(w.report.b, 0u);
  EXPECT_NEAR(w.report.Q_cover, w.report.Q_base, 1e-12);
  EXPECT_NEAR(w.report.final_bound, w.report.Q_base, 1e-12);
  EXPECT_TRUE(w.report.chain_holds());
}

TEST(BuildWitness, TriangleIntervalHasTwoCollarTiles) {
  const CompactFunction f({1, 1, 1});
  for (int alpha = 1; alpha <= 3; ++alpha) {
    const auto w = build_witness(triangle_cover(), f, line_tiles(0, 99), alpha, uniform(3, -0.05), 1.0);
    EXPECT_EQ(w.report.c, 100u);
    EXPECT_LE(w.report.b, 4u);
    EXPECT_GE(w.report.boundary_neighbourhood, w.report.b);
    EXPECT_TRUE(w.report.chain_holds());
    EXPECT_LT(w.report.Q_cover, 0.0);
  }
}

// μ = 1 on K4 is below the weighted degree 3, and the gradient estimate fails.
TEST(BuildWitness, GradientBoundNeedsDegreeDomination) {
  const auto w = build_witness(tree_cover(), CompactFunction({0.5, 0.5, 0.5, 0.5}), std::vector<Point>{{}}, 1,
                               uniform(4, -0.1), 1.0);
  EXPECT_FALSE(w.report.degree_dominated);
  EXPECT_DOUBLE_EQ(w.report.term_grad, 1.5);
  EXPECT_DOUBLE_EQ(w.report.bound_grad, 1.0);
  EXPECT_FALSE(w.report.grad_holds());
}

TEST(BuildWitness, WitnessValuesAreCutoffTimesLift) {
  const CompactFunction f({0.3, -1, 2});
  const auto w = build_witness(triangle_cover(), f, line_tiles(-2, 5), 2, uniform(3, -0.05), 1.0);
  for (std::size_t p = 0; p < w.values.size(); ++p)
    EXPECT_DOUBLE_EQ(w.values[p], w.cutoff.xi[p] * f[w.cutoff.window.project(p)]);
  EXPECT_THROW(build_witness(triangle_cover(), CompactFunction({0, 0, 0}), line_tiles(0, 1), 1, uniform(3, -1), 1),
               ArgumentError);
}

TEST(BuildWitnessProperty, ChainHoldsWhenDegreeDominated) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 2 + rng() % 7;
    const auto raw = oracle::random_connected_edges(n, 0.4, rng, false);
    std::vector<Edge> edges;
    std::vector<double> deg(n, 0);
    for (const auto& e : raw) {
      edges.push_back({e.u, e.v, e.w});
      deg[e.u] += e.w;
      deg[e.v] += e.w;
    }
    std::vector<double> mu(n), V(n), f(n);
    for (std::size_t i = 0; i < n; ++i) {
      mu[i] = deg[i] * (1 + 0.5 * (U(rng) + 1));
      V[i] = U(rng);
      f[i] = U(rng);
    }
    const int dim = 1 + static_cast<int>(rng() % 2);
    std::vector<Word> volt(edges.size());
    for (auto& w : volt) {
      const int g = static_cast<int>(rng() % static_cast<unsigned>(2 * dim + 1)) - dim;
      if (g != 0) w = {g};
    }
    const auto cover = build_cover(WeightedGraph(mu, edges), GroupAction::lattice(dim), volt);
    const auto ball = cover.tile_ball(cover.root_tile(), 4);
    std::vector<Point> E;
    for (const auto& x : *ball)
      if (rng() % 3) E.push_back(x);
    if (E.empty()) E.push_back(cover.root_tile());
    const int alpha = 1 + static_cast<int>(rng() % 3);
    const auto w = build_witness(cover, CompactFunction(f), E, alpha, Potential(V), U(rng) * 2);
    ASSERT_TRUE(w.report.degree_dominated);
    EXPECT_TRUE(w.report.grad_holds()) << w.report.term_grad << " > " << w.report.bound_grad;
    EXPECT_TRUE(w.report.pot_holds()) << w.report.term_pot << " > " << w.report.bound_pot;
    EXPECT_TRUE(w.report.final_holds()) << w.report.Q_cover << " > " << w.report.final_bound;
  }
}

TEST(TransferNegativity, TriangleFindsWitness) {
  const auto out = transfer_negativity(triangle_cover(), uniform(3, -0.05), 1.0);
  ASSERT_TRUE(out.witness_found);
  EXPECT_NEAR(out.lambda_min_base, -0.05, 1e-12);
  ASSERT_TRUE(out.witness.has_value());
  const auto& r = out.witness->report;
  EXPECT_LT(r.collar_ratio(), out.r_star);
  EXPECT_LT(r.Q_cover, -1e-6);
  EXPECT_LE(r.Q_cover, r.final_bound);
  EXPECT_LT(r.final_bound, 0.0);
  // Independent check: energy of the witness on its own window.
  const auto& cw = out.witness->cutoff.window;
  EXPECT_NEAR(quadratic_form(cw.graph, lift_potential(cw, uniform(3, -0.05)), 1.0, out.witness->values), r.Q_cover,
              1e-12);
}

TEST(TransferNegativity, TreeIsInconclusive) {
  TransferOptions opts;
  opts.folner.max_points = 100'000;
  opts.folner.subset_cap = 6;
  const auto out = transfer_negativity(tree_cover(), uniform(4, -0.1), 1.0, opts);
  EXPECT_FALSE(out.witness_found);
  ASSERT_TRUE(out.exhaustion.has_value());
  EXPECT_NEAR(out.lambda_min_base, -0.1, 1e-9);
  EXPECT_GT(out.best_collar_ratio, out.r_star);
  EXPECT_NE(out.message.find("inconclusive"), std::string::npos);
}

TEST(TransferNegativity, NonNegativeBaseRejected) {
  EXPECT_THROW(transfer_negativity(triangle_cover(), uniform(3, 0.05), 1.0), ArgumentError);
  TransferOptions bad;
  bad.alpha = 0;
  EXPECT_THROW(transfer_negativity(triangle_cover(), uniform(3, -0.05), 1.0, bad), ArgumentError);
}

TEST(TransferNegativity, FiniteCoverUsesWholeFiber) {
  const auto cover = build_cover(triangle(), GroupAction::finite_permutation({{1, 2, 3, 4, 0}}), {{}, {}, {1}});
  const auto out = transfer_negativity(cover, uniform(3, -0.2), 1.0);
  ASSERT_TRUE(out.witness_found);
  EXPECT_EQ(out.witness->report.b, 0u);
  EXPECT_EQ(out.witness->report.c, 5u);
}

TEST(EasyDirection, NonNegativeBasesGiveNonNegativeWindows) {
  const std::vector<double> a{-1, 0, 0.5, 1};
  const std::vector<int> radii{0, 1, 3, 6};
  const auto rep = easy_direction_check(triangle_cover(), uniform(3, -0.05), a, radii);
  EXPECT_TRUE(rep.passed);
  ASSERT_EQ(rep.rows.size(), 4u);
  EXPECT_TRUE(rep.rows[0].base_nonnegative);
  EXPECT_EQ(rep.rows[0].windows.size(), radii.size());
  EXPECT_GE(rep.rows[0].min_margin, -1e-9);
  EXPECT_FALSE(rep.rows[3].base_nonnegative);
  EXPECT_TRUE(rep.rows[3].windows.empty());
}

TEST(EasyDirection, TreeCover) {
  const std::vector<double> a{-1, 0};
  const std::vector<int> radii{0, 2, 5};
  const auto rep = easy_direction_check(tree_cover(), uniform(4, -0.1), a, radii);
  EXPECT_TRUE(rep.passed);
  for (const auto& row : rep.rows) EXPECT_GT(row.min_margin, 0.1);
}

TEST(IntervalComparison, AmenableCoverAgrees) {
  const std::vector<double> a{-1, 0, 0.5, 1};
  const auto c = interval_comparison(triangle_cover(), uniform(3, -0.05), a, 60, true);
  EXPECT_TRUE(c.inclusion_holds);
  EXPECT_TRUE(c.all_agree);
  EXPECT_EQ(c.verdict, "agreement");
  for (const auto& row : c.rows) {
    EXPECT_TRUE(row.agree());
    if (!row.base_nonnegative) {
      ASSERT_TRUE(row.witness_found.has_value());
      EXPECT_TRUE(*row.witness_found);
    }
  }
}

TEST(IntervalComparison, TreeCoverIsStrict) {
  const std::vector<double> a{-1, 0, 1};
  const auto c = interval_comparison(tree_cover(), uniform(4, -0.1), a, 8, false);
  EXPECT_TRUE(c.inclusion_holds);
  EXPECT_FALSE(c.all_agree);
  EXPECT_EQ(c.verdict, "strict inclusion");
  EXPECT_FALSE(c.rows[2].base_nonnegative);
  EXPECT_FALSE(c.rows[2].cover_refuted);
  EXPECT_FALSE(c.rows[2].witness_found.has_value());
}
