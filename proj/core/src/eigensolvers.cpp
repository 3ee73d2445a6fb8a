#include "eigensolvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "coverlab/errors.hpp"

namespace coverlab::detail {

double SymmetricProblem::gershgorin_lower() const {
  std::vector<double> radius(n, 0.0);
  for (const auto& e : off) {
    radius[e.i] += std::abs(e.value);
    radius[e.j] += std::abs(e.value);
  }
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) lo = std::min(lo, diag[i] - radius[i]);
  return lo;
}

double SymmetricProblem::min_diagonal() const { return *std::min_element(diag.begin(), diag.end()); }

SymmetricProblem symmetrize(const WeightedGraph& g, const Potential& V, double a) {
  if (V.size() != g.vertex_count()) throw ArgumentError("potential size does not match the graph");
  SymmetricProblem p;
  p.n = g.vertex_count();
  p.diag.resize(p.n);
  for (std::size_t v = 0; v < p.n; ++v) p.diag[v] = (g.weighted_degree(v) + a * V[v] * g.mu(v)) / g.mu(v);
  p.off.reserve(g.edge_count());
  for (const auto& e : g.edges()) {
    p.off.push_back({e.u, e.v, -e.w / std::sqrt(g.mu(e.u) * g.mu(e.v))});
  }
  return p;
}

namespace {

using SpMat = Eigen::SparseMatrix<double>;

SpMat assemble(const SymmetricProblem& p) {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(p.n + 2 * p.off.size());
  for (std::size_t i = 0; i < p.n; ++i) {
    t.emplace_back(static_cast<int>(i), static_cast<int>(i), p.diag[i]);
  }
  for (const auto& e : p.off) {
    t.emplace_back(static_cast<int>(e.i), static_cast<int>(e.j), e.value);
    t.emplace_back(static_cast<int>(e.j), static_cast<int>(e.i), e.value);
  }
  SpMat m(static_cast<Eigen::Index>(p.n), static_cast<Eigen::Index>(p.n));
  m.setFromTriplets(t.begin(), t.end());  // duplicates (parallel edges) are summed
  return m;
}

// Largest-magnitude component positive, so results do not depend on solver sign conventions.
void fix_sign(Eigen::VectorXd& y) {
  Eigen::Index k = 0;
  y.cwiseAbs().maxCoeff(&k);
  if (y[k] < 0) y = -y;
}

Eigenpair finish(const SpMat& s, Eigen::VectorXd y) {
  y.normalize();
  fix_sign(y);
  Eigenpair out;
  const Eigen::VectorXd sy = s * y;
  out.value = y.dot(sy);
  out.residual = (sy - out.value * y).cwiseAbs().maxCoeff();
  out.vector.assign(y.data(), y.data() + y.size());
  return out;
}

Eigenpair lowest_dense(const SymmetricProblem& p) {
  const SpMat s = assemble(p);
  const Eigen::MatrixXd dense(s);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
  if (solver.info() != Eigen::Success) throw Error("dense eigensolve did not converge");
  return finish(s, solver.eigenvectors().col(0));
}

Eigenpair lowest_sparse(const SymmetricProblem& p, double tolerance) {
  const SpMat s = assemble(p);
  SpMat identity(s.rows(), s.cols());
  identity.setIdentity();
  Eigen::SimplicialLLT<SpMat> llt;
  llt.analyzePattern(s);
  auto positive_definite = [&](double sigma) {
    llt.factorize(s - sigma * identity);
    return llt.info() == Eigen::Success;
  };

  // λ₁ lies in (lo, hi]: S − lo·I is positive definite, S − hi·I is not.
  const double scale = std::max(1.0, std::abs(p.min_diagonal()) + std::abs(p.gershgorin_lower()));
  double lo = p.gershgorin_lower() - 1e-9 * scale;
  double hi = p.min_diagonal() + 1e-12 * scale;
  while (hi - lo > 1e-13 * scale) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (positive_definite(mid) ? lo : hi) = mid;
  }

  double shift = lo;
  while (!positive_definite(shift)) shift -= 1e-12 * scale;
  Eigen::VectorXd y = Eigen::VectorXd::Ones(s.rows());
  Eigenpair best;
  best.residual = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 200; ++it) {
    y = llt.solve(y);
    if (llt.info() != Eigen::Success || !y.allFinite()) throw Error("inverse iteration failed");
    y.normalize();
    auto pair = finish(s, y);
    if (pair.residual < best.residual) best = pair;
    if (pair.residual <= tolerance) break;
  }
  return best;
}

}  // namespace

Eigenpair lowest_eigenpair(const SymmetricProblem& p, std::size_t dense_limit, double tolerance) {
  if (p.n == 0) throw ArgumentError("eigensolve on an empty graph");
  if (p.n <= dense_limit) return lowest_dense(p);
  return lowest_sparse(p, tolerance);
}

namespace {

struct Coupling {
  std::size_t u, v;  // (u, x) ~ (v, g·x)
  double value;
};

}  // namespace

double tree_window_lambda(const VoltageCover& cover, const Potential& V, double a, int radius) {
  if (!cover.is_tree_cover()) throw ArgumentError("tree window route needs a tree cover");
  if (radius < 0) throw ArgumentError("radius must be non-negative");
  const auto& base = cover.base();
  const std::size_t nb = base.vertex_count();
  const int rank = cover.fiber().generator_count();

  // Tile block of S: every cover vertex keeps its full degree on the diagonal.
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(nb), static_cast<Eigen::Index>(nb));
  for (std::size_t v = 0; v < nb; ++v) {
    K(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(v)) =
        (base.weighted_degree(v) + a * V[v] * base.mu(v)) / base.mu(v);
  }
  std::vector<Coupling> coupling(static_cast<std::size_t>(rank) + 1);
  for (std::size_t e = 0; e < base.edge_count(); ++e) {
    const auto& be = base.edges()[e];
    const double value = -be.w / std::sqrt(base.mu(be.u) * base.mu(be.v));
    const auto& word = cover.voltages()[e];
    if (word.empty()) {
      K(static_cast<Eigen::Index>(be.u), static_cast<Eigen::Index>(be.v)) += value;
      K(static_cast<Eigen::Index>(be.v), static_cast<Eigen::Index>(be.u)) += value;
    } else if (word[0] > 0) {
      coupling[static_cast<std::size_t>(word[0])] = {be.u, be.v, value};
    } else {
      coupling[static_cast<std::size_t>(-word[0])] = {be.v, be.u, value};
    }
  }
  // C[s] couples a tile to its neighbour s·x; letters 1..rank then their inverses.
  const int letters = 2 * rank;
  std::vector<Eigen::MatrixXd> C(static_cast<std::size_t>(letters));
  std::vector<int> letter_of(static_cast<std::size_t>(letters));
  for (int g = 1; g <= rank; ++g) {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(K.rows(), K.cols());
    const auto& cp = coupling[static_cast<std::size_t>(g)];
    c(static_cast<Eigen::Index>(cp.u), static_cast<Eigen::Index>(cp.v)) = cp.value;
    C[static_cast<std::size_t>(g - 1)] = c;
    C[static_cast<std::size_t>(rank + g - 1)] = c.transpose();
    letter_of[static_cast<std::size_t>(g - 1)] = g;
    letter_of[static_cast<std::size_t>(rank + g - 1)] = -g;
  }

  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(K.rows(), K.cols());
  // Is the window operator minus σ positive definite? Block elimination from
  // the leaves; tiles at equal depth with equal incoming letter share a block.
  auto positive_definite = [&](double sigma) {
    const Eigen::MatrixXd Ks = K - sigma * I;
    std::vector<Eigen::MatrixXd> below(static_cast<std::size_t>(letters));  // Schur correction from children
    std::vector<Eigen::MatrixXd> next(static_cast<std::size_t>(letters));
    for (int d = radius; d >= 1; --d) {
      for (int s = 0; s < letters; ++s) {
        Eigen::MatrixXd B = Ks;
        if (d < radius) {
          for (int t = 0; t < letters; ++t) {
            if (letter_of[static_cast<std::size_t>(t)] == -letter_of[static_cast<std::size_t>(s)]) continue;
            B -= below[static_cast<std::size_t>(t)];
          }
        }
        Eigen::LLT<Eigen::MatrixXd> llt(B);
        if (llt.info() != Eigen::Success) return false;
        // Contribution C_s B⁻¹ C_sᵀ that this child class sends to its parent.
        const auto& c = C[static_cast<std::size_t>(s)];
        next[static_cast<std::size_t>(s)] = c * llt.solve(Eigen::MatrixXd(c.transpose()));
      }
      std::swap(below, next);
    }
    Eigen::MatrixXd root = Ks;
    if (radius >= 1) {
      for (int t = 0; t < letters; ++t) root -= below[static_cast<std::size_t>(t)];
    }
    Eigen::LLT<Eigen::MatrixXd> llt(root);
    return llt.info() == Eigen::Success;
  };

  // Gershgorin bracket over full cover rows.
  double lo = std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (std::size_t v = 0; v < nb; ++v) {
    double r = 0;
    for (const auto& nbh : base.neighbors(v)) r += nbh.w / std::sqrt(base.mu(v) * base.mu(nbh.vertex));
    const double d = K(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(v));
    lo = std::min(lo, d - r);
    hi = std::min(hi, d);
  }
  const double scale = std::max(1.0, std::abs(lo) + std::abs(hi));
  lo -= 1e-9 * scale;
  hi += 1e-12 * scale;
  while (hi - lo > 1e-14 * scale) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (positive_definite(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace coverlab::detail
