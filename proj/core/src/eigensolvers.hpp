#pragma once

#include <cstddef>
#include <vector>

#include "coverlab/geometry.hpp"

namespace coverlab::detail {

/// S = M^{-1/2}(L + a·diag(Vμ))M^{-1/2} in triplet form; L carries exterior stubs on its diagonal.
struct SymmetricProblem {
  std::size_t n = 0;
  std::vector<double> diag;
  struct Entry {
    std::size_t i, j;  // i != j, stored once
    double value;
  };
  std::vector<Entry> off;

  double gershgorin_lower() const;
  double min_diagonal() const;
};

SymmetricProblem symmetrize(const WeightedGraph& g, const Potential& V, double a);

struct Eigenpair {
  double value = 0;
  std::vector<double> vector;  ///< Euclidean unit vector in the symmetrised coordinates
  double residual = 0;         ///< ‖S y − value·y‖∞
};

/// Lowest eigenpair. Dense solve up to `dense_limit`, otherwise bisection on
/// Cholesky success followed by shifted inverse iteration.
Eigenpair lowest_eigenpair(const SymmetricProblem& p, std::size_t dense_limit, double tolerance);

/// Smallest eigenvalue of the Dirichlet window of radius `radius` on a tree
/// cover, via block Schur complements over the tile tree. Exact up to the
/// bisection width.
double tree_window_lambda(const VoltageCover& cover, const Potential& V, double a, int radius);

}  // namespace coverlab::detail
