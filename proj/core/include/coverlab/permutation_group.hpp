#pragma once

#include <cstddef>
#include <vector>

namespace coverlab {

/// One-line notation: p[i] is the image of i. Composition (p*q)(i) = p(q(i)).
using Permutation = std::vector<int>;

Permutation compose(const Permutation& p, const Permutation& q);
Permutation invert(const Permutation& p);
Permutation identity_permutation(std::size_t degree);

inline constexpr std::size_t kDefaultGroupOrderBound = 10'000;

/// All elements generated by `generators`, sorted lexicographically.
/// Throws BudgetExceeded if the closure exceeds `order_bound` elements.
std::vector<Permutation> generate_group(const std::vector<Permutation>& generators, std::size_t degree,
                                        std::size_t order_bound = kDefaultGroupOrderBound);

struct CosetDualityReport {
  std::size_t group_order = 0;
  std::size_t subgroup_order = 0;
  std::size_t left_coset_count = 0;
  std::size_t right_coset_count = 0;
  bool bijective = false;
  bool equivariant = false;
  /// Whether every left coset is also a right coset (true for normal subgroups).
  bool left_equals_right = false;

  bool passed() const { return bijective && equivariant && left_coset_count == right_coset_count; }
};

/// Checks that [σ]_L ↦ [σ⁻¹]_R is a bijection G/H → H\G intertwining
/// γ·[σ]_L = [γσ]_L with γ·[σ]_R = [σγ⁻¹]_R for every generator γ.
CosetDualityReport coset_duality_check(const std::vector<Permutation>& group_generators,
                                       const std::vector<Permutation>& subgroup_generators,
                                       std::size_t order_bound = kDefaultGroupOrderBound);

}  // namespace coverlab
