#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "coverlab/errors.hpp"
#include "coverlab/spectrum.hpp"
#include "oracles.hpp"

using namespace coverlab;

namespace {

WeightedGraph from_raw(const std::vector<double>& mu, const std::vector<oracle::RawEdge>& raw) {
  std::vector<Edge> edges;
  for (const auto& e : raw) edges.push_back({e.u, e.v, e.w});
  return WeightedGraph(mu, edges);
}

WeightedGraph k4() {
  return WeightedGraph({1, 1, 1, 1}, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}, {1, 2, 1}, {1, 3, 1}, {2, 3, 1}});
}

VoltageCover tree_cover() { return build_cover(k4(), GroupAction::free_group(3), {{}, {}, {}, {1}, {2}, {3}}); }

VoltageCover triangle_cover() {
  return build_cover(WeightedGraph({1, 1, 1}, {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}}), GroupAction::lattice(1),
                     {{}, {}, {1}});
}

struct RandomCase {
  WeightedGraph g;
  std::vector<double> mu, V;
  std::vector<oracle::RawEdge> raw;
};

RandomCase random_case(std::mt19937_64& rng, bool unit) {
  std::uniform_real_distribution<double> U(-1, 1);
  const std::size_t n = 2 + rng() % 9;
  RandomCase c;
  c.raw = oracle::random_connected_edges(n, 0.3, rng, unit);
  c.mu.resize(n);
  c.V.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    c.mu[i] = unit ? 1.0 : 1.0 + 0.5 * U(rng);
    c.V[i] = U(rng);
  }
  c.g = from_raw(c.mu, c.raw);
  return c;
}

}  // namespace

TEST(MinEigenvalue, ClosedFormExamples) {
  const WeightedGraph path({1, 1}, {{0, 1, 1}});
  EXPECT_NEAR(min_eigenvalue(path, Potential::zero(2), 0).lambda_min, 0.0, 1e-12);
  EXPECT_NEAR(min_eigenvalue(k4(), Potential({-1, -1, -1, -1}), 1).lambda_min, -1.0, 1e-12);
  EXPECT_NEAR(min_eigenvalue(path, Potential({1, -1}), 1).lambda_min, 1 - std::sqrt(2.0), 1e-12);
}

TEST(MinEigenvalue, MatchesJacobiOnRandomGraphs) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 40; ++t) {
    auto c = random_case(rng, t % 2 == 0);
    const double a = std::uniform_real_distribution<double>(-2, 2)(rng);
    const auto r = min_eigenvalue(c.g, Potential(c.V), a);
    const double expected = oracle::jacobi_min_eigenvalue(oracle::schrodinger_matrix(c.mu, c.raw, c.V, a));
    EXPECT_NEAR(r.lambda_min, expected, 1e-10);
    EXPECT_LE(r.residual, 1e-9);
    EXPECT_NEAR(mass(c.g, CompactFunction(r.eigenvector)), 1.0, 1e-10);
    EXPECT_NEAR(rayleigh(c.g, Potential(c.V), a, CompactFunction(r.eigenvector)), r.lambda_min, 1e-10);
  }
}

TEST(MinEigenvalue, SparseRouteAgreesWithDense) {
  std::mt19937_64 rng(9);
  SpectralOptions sparse;
  sparse.dense_limit = 0;
  for (int t = 0; t < 10; ++t) {
    auto c = random_case(rng, false);
    const double a = std::uniform_real_distribution<double>(-2, 2)(rng);
    EXPECT_NEAR(min_eigenvalue(c.g, Potential(c.V), a, sparse).lambda_min,
                min_eigenvalue(c.g, Potential(c.V), a).lambda_min, 1e-8);
  }
}

TEST(MinEigenvalue, Errors) {
  EXPECT_THROW(min_eigenvalue(WeightedGraph({1, 1}, {}), Potential::zero(2), 0), ArgumentError);
  SpectralOptions tiny;
  tiny.max_vertices = 3;
  EXPECT_THROW(min_eigenvalue(k4(), Potential::zero(4), 0, tiny), BudgetExceeded);
  EXPECT_THROW(rayleigh(k4(), Potential::zero(4), 0, CompactFunction({0, 0, 0, 0})), ArgumentError);
}

TEST(MinEigenvalueProperty, ConcaveInCoupling) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> U(-3, 3);
  for (int t = 0; t < 50; ++t) {
    auto c = random_case(rng, t % 2 == 0);
    const double a1 = U(rng), a2 = U(rng);
    const Potential V(c.V);
    const double mid = min_eigenvalue(c.g, V, 0.5 * (a1 + a2)).lambda_min;
    const double avg = 0.5 * (min_eigenvalue(c.g, V, a1).lambda_min + min_eigenvalue(c.g, V, a2).lambda_min);
    EXPECT_GE(mid, avg - 1e-10);
  }
}

TEST(MinEigenvalueProperty, RayleighDominatesMinimum) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int t = 0; t < 30; ++t) {
    auto c = random_case(rng, false);
    std::vector<double> f(c.mu.size());
    for (auto& x : f) x = U(rng);
    const double lam = min_eigenvalue(c.g, Potential(c.V), 0.8).lambda_min;
    EXPECT_GE(rayleigh(c.g, Potential(c.V), 0.8, CompactFunction(f)), lam - 1e-12);
  }
}

TEST(MinEigenvalueProperty, ScalingCovariance) {
  std::mt19937_64 rng(19);
  for (int t = 0; t < 20; ++t) {
    auto c = random_case(rng, false);
    std::vector<double> V2(c.V);
    for (auto& v : V2) v *= 2;
    EXPECT_NEAR(min_eigenvalue(c.g, Potential(c.V), 1.4).lambda_min,
                min_eigenvalue(c.g, Potential(V2), 0.7).lambda_min, 1e-10);
    // Scaling every conductance and the potential by s scales λ by s.
    std::vector<Edge> scaled;
    for (const auto& e : c.g.edges()) scaled.push_back({e.u, e.v, 3 * e.w});
    std::vector<double> V3(c.V);
    for (auto& v : V3) v *= 3;
    EXPECT_NEAR(min_eigenvalue(WeightedGraph(c.mu, scaled), Potential(V3), 0.5).lambda_min,
                3 * min_eigenvalue(c.g, Potential(c.V), 0.5).lambda_min, 1e-9);
  }
}

TEST(Dirichlet, TreeRadiusZero) {
  const auto d = dirichlet_lambda0(tree_cover(), 0, Potential::zero(4), 0);
  EXPECT_EQ(d.method, "tile-tree");
  EXPECT_NEAR(d.value, 3 - std::sqrt(3.0), 1e-9);
  EXPECT_EQ(d.window_vertices, 4);
}

TEST(Dirichlet, TreeRouteAgreesWithWindowRoute) {
  DirichletOptions generic;
  generic.allow_tree_route = false;
  const auto cover = tree_cover();
  for (double a : {0.0, 1.0, -0.5}) {
    const Potential V({-1, 0.5, -0.2, 0.3});
    for (int r = 0; r <= 4; ++r) {
      const auto fast = dirichlet_lambda0(cover, r, V, a);
      const auto slow = dirichlet_lambda0(cover, r, V, a, generic);
      EXPECT_EQ(slow.method, "window");
      EXPECT_NEAR(fast.value, slow.value, 1e-8) << "a=" << a << " r=" << r;
    }
  }
}

TEST(Dirichlet, TriangleWindowsArePaths) {
  const auto cover = triangle_cover();
  for (int r : {0, 1, 5, 40}) {
    const auto d = dirichlet_lambda0(cover, r, Potential::zero(3), 0);
    EXPECT_EQ(d.method, "window");
    EXPECT_NEAR(d.value, oracle::path_dirichlet(static_cast<std::size_t>(3 * (2 * r + 1))), 1e-9);
  }
}

TEST(Dirichlet, SequenceDecreasesOnTree) {
  const std::vector<int> radii{0, 2, 4, 8};
  const auto seq = dirichlet_sequence(tree_cover(), radii, Potential::zero(4), 0);
  ASSERT_EQ(seq.size(), 4u);
  for (std::size_t i = 1; i < seq.size(); ++i) EXPECT_LT(seq[i].value, seq[i - 1].value);
  EXPECT_GT(seq.back().value, 3 - 2 * std::sqrt(2.0));
}

TEST(Dirichlet, Errors) {
  EXPECT_THROW(dirichlet_lambda0(tree_cover(), -1, Potential::zero(4), 0), ArgumentError);
  EXPECT_THROW(dirichlet_lambda0(tree_cover(), 1, Potential::zero(3), 0), ArgumentError);
  DirichletOptions small;
  small.max_vertices = 10;
  small.allow_tree_route = false;
  EXPECT_THROW(dirichlet_lambda0(tree_cover(), 3, Potential::zero(4), 0, small), BudgetExceeded);
}

TEST(StabilityInterval, SignDefinitePotentials) {
  const WeightedGraph path({1, 1}, {{0, 1, 1}});
  const auto pos = stability_interval(path, Potential({1, 0}), 1e-6);
  EXPECT_EQ(pos.lower, 0.0);
  EXPECT_TRUE(std::isinf(pos.upper) && pos.upper > 0);
  const auto neg = stability_interval(path, Potential({-1, 0}), 1e-6);
  EXPECT_TRUE(std::isinf(neg.lower) && neg.lower < 0);
  EXPECT_EQ(neg.upper, 0.0);
  const auto zero = stability_interval(path, Potential::zero(2), 1e-6);
  EXPECT_TRUE(std::isinf(zero.lower) && std::isinf(zero.upper));
}

TEST(StabilityInterval, BalancedGivesPoint) {
  const auto I = stability_interval(WeightedGraph({1, 1}, {{0, 1, 1}}), Potential({1, -1}), 1e-6);
  EXPECT_NEAR(I.lower, 0.0, 1e-6);
  EXPECT_NEAR(I.upper, 0.0, 1e-6);
  EXPECT_LE(I.endpoint_tolerance, 1e-6);
  EXPECT_TRUE(I.contains(0.0));
}

TEST(StabilityInterval, UnbalancedHasInteriorEndpoint) {
  // V = (1, -0.5) on an edge: det = a(1 − a)/2, so I = [0, 1].
  const WeightedGraph path({1, 1}, {{0, 1, 1}});
  const Potential V({1, -0.5});
  const auto I = stability_interval(path, V, 1e-8);
  EXPECT_NEAR(I.lower, 0.0, 1e-8);
  EXPECT_NEAR(I.upper, 1.0, 1e-7);
  EXPECT_TRUE(nonnegative_at(path, V, 0.5));
  EXPECT_FALSE(nonnegative_at(path, V, 1.5));
}

TEST(Corollary, RandomBalancedPotentials) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 20; ++t) {
    auto c = random_case(rng, true);
    double s = 0;
    for (double v : c.V) s += v;
    for (auto& v : c.V) v -= s / static_cast<double>(c.V.size());
    const auto rep = corollary_check(c.g, Potential(c.V));
    EXPECT_TRUE(rep.passed);
    EXPECT_NEAR(rep.interval.lower, 0.0, 1e-6);
    EXPECT_NEAR(rep.interval.upper, 0.0, 1e-6);
    for (const auto& smp : rep.samples) EXPECT_LT(smp.lambda_min, 0.0);
  }
}

TEST(Corollary, VanishingPotentialGivesWholeLine) {
  const auto rep = corollary_check(k4(), Potential::zero(4));
  EXPECT_TRUE(rep.potential_vanishes);
  EXPECT_TRUE(rep.passed);
  EXPECT_TRUE(std::isinf(rep.interval.lower) && std::isinf(rep.interval.upper));
}

TEST(Corollary, UnbalancedRejected) {
  EXPECT_THROW(corollary_check(k4(), Potential({1, 0, 0, 0})), ArgumentError);
}
