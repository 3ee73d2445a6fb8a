#include "coverlab/permutation_group.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "coverlab/errors.hpp"

namespace coverlab {

Permutation compose(const Permutation& p, const Permutation& q) {
  if (p.size() != q.size()) throw ArgumentError("composing permutations of different degree");
  Permutation r(p.size());
  for (std::size_t i = 0; i < q.size(); ++i) r[i] = p[static_cast<std::size_t>(q[i])];
  return r;
}

Permutation invert(const Permutation& p) {
  Permutation r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[static_cast<std::size_t>(p[i])] = static_cast<int>(i);
  return r;
}

Permutation identity_permutation(std::size_t degree) {
  Permutation r(degree);
  for (std::size_t i = 0; i < degree; ++i) r[i] = static_cast<int>(i);
  return r;
}

namespace {

void validate(const Permutation& p, std::size_t degree) {
  if (p.size() != degree) throw ArgumentError("permutation has the wrong degree");
  std::vector<char> hit(degree, 0);
  for (int x : p) {
    if (x < 0 || static_cast<std::size_t>(x) >= degree || hit[static_cast<std::size_t>(x)]) {
      throw ArgumentError("not a permutation in one-line notation");
    }
    hit[static_cast<std::size_t>(x)] = 1;
  }
}

// Cosets are identified by their lexicographically smallest element.
using CosetId = Permutation;

CosetId left_coset(const Permutation& s, const std::vector<Permutation>& H) {
  CosetId best;
  for (const auto& h : H) {
    auto c = compose(s, h);
    if (best.empty() || c < best) best = std::move(c);
  }
  return best;
}

CosetId right_coset(const Permutation& s, const std::vector<Permutation>& H) {
  CosetId best;
  for (const auto& h : H) {
    auto c = compose(h, s);
    if (best.empty() || c < best) best = std::move(c);
  }
  return best;
}

}  // namespace

std::vector<Permutation> generate_group(const std::vector<Permutation>& generators, std::size_t degree,
                                        std::size_t order_bound) {
  for (const auto& g : generators) validate(g, degree);
  std::set<Permutation> seen{identity_permutation(degree)};
  std::vector<Permutation> frontier{identity_permutation(degree)};
  while (!frontier.empty()) {
    std::vector<Permutation> next;
    for (const auto& x : frontier) {
      for (const auto& g : generators) {
        auto y = compose(g, x);
        if (seen.insert(y).second) {
          if (seen.size() > order_bound) throw BudgetExceeded("group closure", seen.size());
          next.push_back(std::move(y));
        }
      }
    }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

CosetDualityReport coset_duality_check(const std::vector<Permutation>& group_generators,
                                       const std::vector<Permutation>& subgroup_generators,
                                       std::size_t order_bound) {
  if (group_generators.empty()) throw ArgumentError("group needs at least one generator");
  const std::size_t degree = group_generators.front().size();
  const auto G = generate_group(group_generators, degree, order_bound);
  const auto H = generate_group(subgroup_generators, degree, order_bound);
  for (const auto& h : H) {
    if (!std::binary_search(G.begin(), G.end(), h)) throw ArgumentError("subgroup is not contained in the group");
  }

  std::map<CosetId, Permutation> left;   // coset -> representative
  std::map<CosetId, Permutation> right;
  for (const auto& s : G) {
    left.emplace(left_coset(s, H), s);
    right.emplace(right_coset(s, H), s);
  }

  CosetDualityReport rep;
  rep.group_order = G.size();
  rep.subgroup_order = H.size();
  rep.left_coset_count = left.size();
  rep.right_coset_count = right.size();

  // F must be well defined on cosets (independent of representative) and bijective.
  std::map<CosetId, CosetId> F;
  bool well_defined = true;
  for (const auto& s : G) {
    auto L = left_coset(s, H);
    auto R = right_coset(invert(s), H);
    auto [it, inserted] = F.emplace(L, R);
    if (!inserted && it->second != R) well_defined = false;
  }
  std::set<CosetId> image;
  for (const auto& [L, R] : F) image.insert(R);
  rep.bijective = well_defined && F.size() == left.size() && image.size() == right.size();

  bool equivariant = true;
  for (const auto& [L, sigma] : left) {
    for (const auto& gamma : group_generators) {
      const auto moved_left = left_coset(compose(gamma, sigma), H);         // γ·[σ]_L
      const auto lhs = F.at(moved_left);                                     // F(γ·[σ]_L)
      const auto rep_r = right.at(F.at(L));                                  // a representative of F([σ]_L)
      const auto rhs = right_coset(compose(rep_r, invert(gamma)), H);        // γ·F([σ]_L)
      if (lhs != rhs) equivariant = false;
    }
  }
  rep.equivariant = equivariant;

  // Cosets sharing their smallest element can still differ, so compare as sets.
  bool same = true;
  for (const auto& [L, s] : left) {
    std::vector<Permutation> sh, hs;
    for (const auto& h : H) {
      sh.push_back(compose(s, h));
      hs.push_back(compose(h, s));
    }
    std::sort(sh.begin(), sh.end());
    std::sort(hs.begin(), hs.end());
    if (sh != hs) same = false;
  }
  rep.left_equals_right = same;
  return rep;
}

}  // namespace coverlab
