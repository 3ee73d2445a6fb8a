#include "coverlab/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_set>

#include "coverlab/errors.hpp"

namespace coverlab {

namespace {

bool le(double lhs, double rhs, double scale) { return lhs <= rhs + 1e-12 * scale; }

struct BaseTerms {
  double mass = 0;
  double gradient = 0;
  double potential = 0;
  double negative_part = 0;
  double q() const { return gradient + potential; }
  double bracket(int alpha) const {
    return mass / (static_cast<double>(alpha) * alpha) + (2.0 / alpha) * std::sqrt(gradient * mass) + negative_part;
  }
};

BaseTerms base_terms(const WeightedGraph& base, const CompactFunction& f, const Potential& V, double a) {
  if (f.size() != base.vertex_count()) throw ArgumentError("function size does not match the base");
  const auto e = energy_terms(base, V, a, f);
  BaseTerms t;
  t.gradient = e.gradient;
  t.potential = e.potential;
  t.mass = mass(base, f);
  for (auto v : f.support()) {
    const double av = a * V[v];
    if (av < 0) t.negative_part += -av * f[v] * f[v] * base.mu(v);
  }
  return t;
}

std::size_t boundary_neighbourhood(const GroupAction& action, std::span<const Point> E, int alpha) {
  std::unordered_set<Point, PointHash> members(E.begin(), E.end());
  std::unordered_set<Point, PointHash> reached;
  std::vector<Point> frontier = boundary(action, E);
  reached.insert(frontier.begin(), frontier.end());
  const auto gens = action.symmetric_generators();
  for (int d = 1; d <= alpha && !frontier.empty(); ++d) {
    std::vector<Point> next;
    for (const auto& x : frontier) {
      for (auto g : gens) {
        Point y = action.act(g, x);
        if (members.contains(y) && reached.insert(y).second) next.push_back(std::move(y));
      }
    }
    frontier = std::move(next);
  }
  return reached.size();
}

}  // namespace

bool WitnessReport::grad_holds() const {
  return le(term_grad, bound_grad, std::max(std::abs(term_grad), std::abs(bound_grad)));
}

bool WitnessReport::pot_holds() const {
  return le(term_pot, bound_pot, std::max(std::abs(term_pot), std::abs(bound_pot)));
}

bool WitnessReport::final_holds() const {
  const double scale = std::abs(term_grad) + std::abs(term_pot) + std::abs(bound_grad) + std::abs(bound_pot);
  return le(Q_cover, final_bound, scale);
}

Witness build_witness(const VoltageCover& cover, const CompactFunction& f, std::span<const Point> E, int alpha,
                      const Potential& V, double a, double epsilon_used) {
  const auto& base = cover.base();
  if (f.is_zero()) throw ArgumentError("witness needs a nonzero base function");
  const BaseTerms t = base_terms(base, f, V, a);

  Witness w{cutoff(cover, E, alpha), {}, {}};
  const auto& window = w.cutoff.window;
  std::vector<double> values(window.graph.vertex_count());
  for (std::size_t p = 0; p < values.size(); ++p) values[p] = w.cutoff.xi[p] * f[window.project(p)];
  w.values = CompactFunction(std::move(values));
  const auto cover_terms = energy_terms(window.graph, lift_potential(window, V), a, w.values);

  auto& r = w.report;
  r.c = window.tiles.size();
  r.b = w.cutoff.collar_tiles.size();
  r.alpha = alpha;
  r.epsilon_used = epsilon_used;
  r.mass = t.mass;
  r.gradient = t.gradient;
  r.negative_part = t.negative_part;
  r.Q_base = t.q();
  r.term_grad = cover_terms.gradient;
  r.term_pot = cover_terms.potential;
  r.Q_cover = cover_terms.total();
  const double b = static_cast<double>(r.b);
  const double c = static_cast<double>(r.c);
  r.bound_grad = b / (static_cast<double>(alpha) * alpha) * t.mass + (2.0 * b / alpha) * std::sqrt(t.mass * t.gradient) +
                 c * t.gradient;
  r.bound_pot = c * t.potential + b * t.negative_part;
  r.final_bound = c * (t.q() + (b / c) * t.bracket(alpha));
  r.degree_dominated = base.degree_dominated();
  r.boundary_neighbourhood = boundary_neighbourhood(cover.tile_action(), window.tiles, alpha);
  return w;
}

Witness build_witness(const VoltageCover& cover, const CompactFunction& f, const FolnerCertificate& cert, int alpha,
                      const Potential& V, double a) {
  return build_witness(cover, f, cert.points, alpha, V, a, cert.epsilon.to_double());
}

double required_ratio(const WeightedGraph& base, const CompactFunction& f, int alpha, const Potential& V, double a) {
  if (alpha < 1) throw ArgumentError("collar width must be a positive integer");
  const BaseTerms t = base_terms(base, f, V, a);
  if (t.q() >= 0) throw ArgumentError("required ratio needs a function with negative base energy");
  return -t.q() / t.bracket(alpha);
}

namespace {

double probe_collar_ratio(const VoltageCover& cover, const Exhaustion& ex, const TransferOptions& options) {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t nb = cover.base().vertex_count();
  auto consider = [&](std::span<const Point> E) {
    if (E.empty() || E.size() * nb > options.collar_probe_vertices) return false;
    const auto c = cutoff(cover, E, options.alpha);
    best = std::min(best, static_cast<double>(c.collar_tiles.size()) / static_cast<double>(c.omega.size()));
    return true;
  };
  for (int r = 0; r <= ex.radius_reached; ++r) {
    std::shared_ptr<const std::vector<Point>> ball;
    try {
      ball = cover.tile_ball(cover.tile_action().origin(), r, options.folner.max_points);
    } catch (const BudgetExceeded&) {
      break;
    }
    if (!consider(*ball)) break;
  }
  consider(ex.best_set);
  return best;
}

}  // namespace

TransferOutcome transfer_negativity(const VoltageCover& cover, const Potential& V, double a,
                                    const TransferOptions& options) {
  if (options.alpha < 1) throw ArgumentError("collar width must be a positive integer");
  const auto& base = cover.base();
  TransferOutcome out;
  const auto ground = min_eigenvalue(base, V, a, options.spectral);
  out.lambda_min_base = ground.lambda_min;
  if (ground.lambda_min >= 0) throw ArgumentError("base operator is non-negative; there is no negativity to transfer");
  const CompactFunction f(ground.eigenvector);
  out.r_star = required_ratio(base, f, options.alpha, V, a);
  out.best_collar_ratio = std::numeric_limits<double>::infinity();

  const auto& tiles = cover.tile_action();
  const double n = 2.0 * tiles.generator_count();
  double eps = std::min(1.0, out.r_star / (1.0 + n * options.alpha));
  for (int attempt = 0; attempt <= options.max_halvings; ++attempt, eps /= 2) {
    const Rational er = Rational::floor_of(eps);
    if (er.num() <= 0) break;
    ++out.attempts;
    out.epsilon_used = er.to_double();
    auto search = search_folner(tiles, er, options.folner);
    if (!search.found()) {
      out.exhaustion = search.exhaustion();
      out.best_collar_ratio =
          std::min(out.best_collar_ratio, probe_collar_ratio(cover, *out.exhaustion, options));
      std::ostringstream os;
      os << "inconclusive: no Folner set with ratio < r* found within budget (" << out.exhaustion->message() << ")";
      out.message = os.str();
      return out;
    }
    auto w = build_witness(cover, f, search.certificate(), options.alpha, V, a);
    out.best_collar_ratio = std::min(out.best_collar_ratio, w.report.collar_ratio());
    if (w.report.collar_ratio() < out.r_star) {
      if (!(w.report.Q_cover < 0)) {
        throw AuditFailure("witness with b/c below r* has non-negative energy " + std::to_string(w.report.Q_cover));
      }
      out.witness_found = true;
      out.witness = std::move(w);
      out.message = "witness: compactly supported cover function with negative energy";
      return out;
    }
  }
  out.message = "inconclusive: collar ratio stayed at or above r* for every epsilon tried";
  return out;
}

EasyDirectionReport easy_direction_check(const VoltageCover& cover, const Potential& V,
                                         std::span<const double> a_samples, std::span<const int> radii,
                                         const DirichletOptions& options) {
  EasyDirectionReport rep;
  for (double a : a_samples) {
    EasyDirectionRow row;
    row.a = a;
    row.base_lambda = min_eigenvalue(cover.base(), V, a, options.spectral).lambda_min;
    row.base_nonnegative = nonnegative_at(cover.base(), V, a, options.spectral);
    row.min_margin = std::numeric_limits<double>::infinity();
    if (row.base_nonnegative) {
      for (int r : radii) {
        row.windows.push_back(dirichlet_lambda0(cover, r, V, a, options));
        row.min_margin = std::min(row.min_margin, row.windows.back().value);
      }
      row.passed = row.windows.empty() || row.min_margin >= -1e-9;
    }
    rep.passed = rep.passed && row.passed;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

IntervalComparison interval_comparison(const VoltageCover& cover, const Potential& V,
                                       std::span<const double> a_samples, int radius, bool attempt_transfer,
                                       const TransferOptions& transfer, const DirichletOptions& options) {
  IntervalComparison cmp;
  cmp.radius = radius;
  for (double a : a_samples) {
    IntervalRow row;
    row.a = a;
    row.base_lambda = min_eigenvalue(cover.base(), V, a, options.spectral).lambda_min;
    row.base_nonnegative = nonnegative_at(cover.base(), V, a, options.spectral);
    row.window = dirichlet_lambda0(cover, radius, V, a, options);
    row.cover_refuted = row.window.value < -1e-9;
    if (attempt_transfer && !row.base_nonnegative) {
      row.witness_found = transfer_negativity(cover, V, a, transfer).witness_found;
    }
    cmp.inclusion_holds = cmp.inclusion_holds && (!row.base_nonnegative || !row.cover_refuted);
    cmp.all_agree = cmp.all_agree && row.agree();
    cmp.rows.push_back(std::move(row));
  }
  cmp.verdict = cmp.all_agree ? "agreement" : "strict inclusion";
  return cmp;
}

}  // namespace coverlab
