#include <gtest/gtest.h>

#include <set>

#include "coverlab/errors.hpp"
#include "coverlab/permutation_group.hpp"
#include "oracles.hpp"

using namespace coverlab;

TEST(Permutation, ComposeAndInvert) {
  const Permutation p{1, 2, 0}, q{1, 0, 2};
  EXPECT_EQ(compose(p, q), (Permutation{2, 1, 0}));
  EXPECT_EQ(compose(p, q), oracle::compose(p, q));
  EXPECT_EQ(compose(p, invert(p)), identity_permutation(3));
  EXPECT_EQ(invert(p), (Permutation{2, 0, 1}));
}

TEST(Permutation, GenerateSymmetricGroup) {
  EXPECT_EQ(generate_group({{1, 2, 0}, {1, 0, 2}}, 3).size(), 6u);
  EXPECT_EQ(generate_group({{1, 2, 3, 0}, {1, 0, 2, 3}}, 4).size(), 24u);
  EXPECT_EQ(generate_group({}, 4).size(), 1u);
  EXPECT_THROW(generate_group({{1, 2, 3, 4, 5, 0}, {1, 0, 2, 3, 4, 5}}, 6, 100), BudgetExceeded);
}

TEST(CosetDuality, S3ByTransposition) {
  const auto r = coset_duality_check({{1, 2, 0}, {1, 0, 2}}, {{1, 0, 2}});
  EXPECT_EQ(r.group_order, 6u);
  EXPECT_EQ(r.subgroup_order, 2u);
  EXPECT_EQ(r.left_coset_count, 3u);
  EXPECT_EQ(r.right_coset_count, 3u);
  EXPECT_TRUE(r.passed());
  EXPECT_FALSE(r.left_equals_right);
}

TEST(CosetDuality, NormalSubgroupHasEqualCosets) {
  const auto r = coset_duality_check({{1, 2, 0}, {1, 0, 2}}, {{1, 2, 0}});
  EXPECT_TRUE(r.passed());
  EXPECT_TRUE(r.left_equals_right);
}

TEST(CosetDuality, SubgroupOutsideGroupRejected) {
  EXPECT_THROW(coset_duality_check({{1, 2, 0}}, {{1, 0, 2}}), ArgumentError);
}

class CosetDualityAllSubgroups : public ::testing::TestWithParam<int> {};

TEST_P(CosetDualityAllSubgroups, EverySubgroupPasses) {
  const int n = GetParam();
  const auto subgroups = oracle::two_generated_subgroups(n);
  EXPECT_EQ(subgroups.size(), n == 3 ? 6u : 30u);
  std::vector<Permutation> sn_gens{{}, {}};
  for (int i = 0; i < n; ++i) {
    sn_gens[0].push_back((i + 1) % n);
    sn_gens[1].push_back(i < 2 ? 1 - i : i);
  }
  for (const auto& H : subgroups) {
    const std::vector<Permutation> gens(H.begin(), H.end());
    const auto r = coset_duality_check(sn_gens, gens);
    EXPECT_TRUE(r.passed());
    EXPECT_EQ(r.subgroup_order, H.size());
    EXPECT_EQ(r.left_coset_count * H.size(), r.group_order);
    // Left cosets coincide with right cosets exactly for normal subgroups.
    bool normal = true;
    for (const auto& g : oracle::all_permutations(n))
      for (const auto& h : H) {
        Permutation ginv(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) ginv[static_cast<std::size_t>(g[i])] = static_cast<int>(i);
        normal = normal && H.contains(oracle::compose(oracle::compose(g, h), ginv));
      }
    EXPECT_EQ(r.left_equals_right, normal);
  }
}

INSTANTIATE_TEST_SUITE_P(SymmetricGroups, CosetDualityAllSubgroups, ::testing::Values(3, 4));
