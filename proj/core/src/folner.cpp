#include "coverlab/folner.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace coverlab {

Rational FolnerCertificate::max_ratio() const {
  Rational best(0);
  for (const auto& r : ratios) best = std::max(best, r.ratio);
  return best;
}

VerificationFailed::VerificationFailed(Generator g, Rational ratio, Rational epsilon)
    : Error("Folner verification failed: generator " + std::to_string(g.index) + " has ratio " + ratio.str() +
            " > epsilon " + epsilon.str()),
      generator_(g),
      ratio_(ratio) {}

namespace {

void check_epsilon(const Rational& epsilon) {
  if (epsilon <= Rational(0) || epsilon > Rational(1)) throw ArgumentError("epsilon must lie in (0, 1]");
}

std::vector<Point> canonical_set(std::span<const Point> E) {
  std::vector<Point> pts(E.begin(), E.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace

FolnerCertificate measure_set(const GroupAction& action, std::span<const Point> E) {
  FolnerCertificate cert;
  cert.points = canonical_set(E);
  if (cert.points.empty()) throw ArgumentError("Folner set must be nonempty");
  for (const auto& p : cert.points) {
    if (!action.contains(p)) throw ArgumentError("set contains a point outside the action");
  }
  const std::unordered_set<Point, PointHash> members(cert.points.begin(), cert.points.end());
  const auto n = static_cast<std::int64_t>(cert.points.size());

  std::vector<char> on_boundary(cert.points.size(), 0);
  for (auto g : action.symmetric_generators()) {
    std::unordered_set<Point, PointHash> translate;
    translate.reserve(cert.points.size());
    for (std::size_t i = 0; i < cert.points.size(); ++i) {
      auto y = action.act(g, cert.points[i]);
      if (!members.contains(y)) on_boundary[i] = 1;
      translate.insert(std::move(y));
    }
    std::int64_t common = 0;
    for (const auto& y : translate) common += members.contains(y) ? 1 : 0;
    const auto sym_diff = n + static_cast<std::int64_t>(translate.size()) - 2 * common;
    cert.ratios.push_back({g, Rational(sym_diff, n)});
  }
  cert.boundary_ratio = Rational(std::count(on_boundary.begin(), on_boundary.end(), 1), n);
  cert.epsilon = cert.max_ratio();
  return cert;
}

FolnerCertificate verify_certificate(const GroupAction& action, std::span<const Point> E, const Rational& epsilon) {
  check_epsilon(epsilon);
  auto cert = measure_set(action, E);
  for (const auto& r : cert.ratios) {
    if (r.ratio > epsilon) throw VerificationFailed(r.generator, r.ratio, epsilon);
  }
  cert.epsilon = epsilon;
  return cert;
}

BoundaryBound folner_boundary_bound(const GroupAction& action, std::span<const Point> E) {
  const auto pts = canonical_set(E);
  if (pts.empty()) throw ArgumentError("boundary bound needs a nonempty set");
  const std::unordered_set<Point, PointHash> members(pts.begin(), pts.end());
  BoundaryBound bb;
  bb.lhs = static_cast<std::int64_t>(boundary(action, pts).size());
  for (auto g : action.symmetric_generators()) {
    // E ∩ g⁻¹·E = {x ∈ E : g·x ∈ E}
    std::int64_t kept = 0;
    for (const auto& x : pts) kept += members.contains(action.act(g, x)) ? 1 : 0;
    bb.rhs += static_cast<std::int64_t>(pts.size()) - kept;
  }
  return bb;
}

std::string Exhaustion::message() const {
  return "no Folner certificate found within budget (best ratio " + best_ratio_found.str() + " after " +
         std::to_string(sets_examined) + " sets, balls to radius " + std::to_string(radius_reached) +
         ", connected subsets to size " + std::to_string(subset_size_reached) +
         (subset_search_complete ? "" : ", subset phase truncated") + ")";
}

namespace {

// Largest ball around `center` of radius <= want that fits in the point budget,
// as a dense neighbour table: nbr[i * 2n + s] for symmetric slot s (2k -> +k+1, 2k+1 -> -(k+1)).
struct Window {
  std::vector<Point> points;  // BFS order, points[0] = centre
  std::vector<std::size_t> layer_end;  // layer_end[d] = number of points at depth <= d
  std::vector<std::int32_t> nbr;
  int radius = 0;
  bool saturated = false;  // the whole orbit fits
};

Generator slot_generator(int s) { return Generator{s % 2 == 0 ? s / 2 + 1 : -(s / 2 + 1)}; }

Window fitting_window(const GroupAction& action, const Point& center, int want, std::size_t max_points) {
  const int slots = 2 * action.generator_count();
  std::unordered_map<Point, std::int32_t, PointHash> index;
  Window w;
  w.points.push_back(center);
  w.layer_end.push_back(1);
  index.emplace(center, 0);
  for (int d = 1; d <= want; ++d) {
    const std::size_t begin = d >= 2 ? w.layer_end[static_cast<std::size_t>(d - 2)] : 0;
    const std::size_t end = w.points.size();
    bool over = false;
    for (std::size_t i = begin; i < end && !over; ++i) {
      for (int s = 0; s < slots; ++s) {
        auto y = action.act(slot_generator(s), w.points[i]);
        if (index.contains(y)) continue;
        if (w.points.size() + 1 > max_points) {
          over = true;
          break;
        }
        index.emplace(y, static_cast<std::int32_t>(w.points.size()));
        w.points.push_back(std::move(y));
      }
    }
    if (over) {
      for (std::size_t i = end; i < w.points.size(); ++i) index.erase(w.points[i]);
      w.points.resize(end);
      break;
    }
    if (w.points.size() == end) {
      w.saturated = true;
      break;
    }
    w.layer_end.push_back(w.points.size());
    w.radius = d;
  }
  w.nbr.assign(w.points.size() * static_cast<std::size_t>(slots), -1);
  for (std::size_t i = 0; i < w.points.size(); ++i) {
    for (int s = 0; s < slots; ++s) {
      if (auto it = index.find(action.act(slot_generator(s), w.points[i])); it != index.end()) {
        w.nbr[i * static_cast<std::size_t>(slots) + static_cast<std::size_t>(s)] = it->second;
      }
    }
  }
  return w;
}

// Enumerates every connected subset containing window point 0 of size <= cap
// exactly once, tracking per generator pair the count of x ∈ E with g·x ∈ E.
class SubsetSearch {
 public:
  SubsetSearch(const Window& w, int pairs, int cap, std::uint64_t max_sets, const Rational& epsilon)
      : w_(w), pairs_(pairs), slots_(2 * pairs), cap_(cap), max_sets_(max_sets), epsilon_(epsilon) {
    state_.assign(w.points.size(), kFree);
    inner_.assign(static_cast<std::size_t>(pairs), 0);
    members_.reserve(static_cast<std::size_t>(cap));
    buffers_.resize(static_cast<std::size_t>(cap) + 2);
    fresh_.resize(static_cast<std::size_t>(cap) + 2);
  }

  void run() {
    add(0);
    auto& cands = buffers_[1];
    cands.clear();
    for (int s = 0; s < slots_; ++s) {
      const auto y = nbr(0, s);
      if (y >= 0 && state_[static_cast<std::size_t>(y)] == kFree) {
        state_[static_cast<std::size_t>(y)] = kMarked;
        cands.push_back(y);
      }
    }
    recurse(1);
  }

  std::uint64_t examined = 0;
  bool truncated = false;
  bool hit = false;  // found a set within epsilon
  std::int64_t best_num = 2, best_den = 1;
  std::vector<std::int32_t> best_members;

 private:
  static constexpr char kFree = 0, kIn = 1, kMarked = 2;

  std::int32_t nbr(std::int32_t v, int s) const {
    return w_.nbr[static_cast<std::size_t>(v) * static_cast<std::size_t>(slots_) + static_cast<std::size_t>(s)];
  }

  void add(std::int32_t v) {
    state_[static_cast<std::size_t>(v)] = kIn;
    members_.push_back(v);
    for (int i = 0; i < pairs_; ++i) {
      const auto fwd = nbr(v, 2 * i);
      const auto back = nbr(v, 2 * i + 1);
      if (fwd >= 0 && state_[static_cast<std::size_t>(fwd)] == kIn) ++inner_[static_cast<std::size_t>(i)];
      if (back >= 0 && back != v && state_[static_cast<std::size_t>(back)] == kIn) ++inner_[static_cast<std::size_t>(i)];
    }
  }

  void remove(std::int32_t v) {
    for (int i = 0; i < pairs_; ++i) {
      const auto fwd = nbr(v, 2 * i);
      const auto back = nbr(v, 2 * i + 1);
      if (fwd >= 0 && state_[static_cast<std::size_t>(fwd)] == kIn) --inner_[static_cast<std::size_t>(i)];
      if (back >= 0 && back != v && state_[static_cast<std::size_t>(back)] == kIn) --inner_[static_cast<std::size_t>(i)];
    }
    members_.pop_back();
    state_[static_cast<std::size_t>(v)] = kMarked;
  }

  void evaluate() {
    ++examined;
    const std::int64_t k = static_cast<std::int64_t>(members_.size());
    const std::int64_t m = *std::min_element(inner_.begin(), inner_.end());
    // max ratio = 2(k - m)/k
    const std::int64_t num = 2 * (k - m);
    if (num * best_den < best_num * k) {
      best_num = num;
      best_den = k;
      best_members = members_;
    }
    if (Rational(num, k) <= epsilon_) {
      hit = true;
      best_num = num;
      best_den = k;
      best_members = members_;
    }
  }

  // buffers_[depth] holds the extension candidates of the current set.
  void recurse(std::size_t depth) {
    evaluate();
    if (hit) return;
    if (examined >= max_sets_) {
      truncated = true;
      return;
    }
    if (static_cast<int>(members_.size()) >= cap_) return;
    auto& cands = buffers_[depth];
    while (!cands.empty() && !hit && !truncated) {
      const auto v = cands.back();
      cands.pop_back();
      add(v);
      auto& next = buffers_[depth + 1];
      next.assign(cands.begin(), cands.end());
      const std::size_t fresh_begin = next.size();
      for (int s = 0; s < slots_; ++s) {
        const auto y = nbr(v, s);
        if (y >= 0 && state_[static_cast<std::size_t>(y)] == kFree) {
          state_[static_cast<std::size_t>(y)] = kMarked;
          next.push_back(y);
        }
      }
      auto& fresh = fresh_[depth];
      fresh.assign(next.begin() + static_cast<std::ptrdiff_t>(fresh_begin), next.end());
      recurse(depth + 1);
      for (auto y : fresh_[depth]) state_[static_cast<std::size_t>(y)] = kFree;
      remove(v);
    }
  }

  const Window& w_;
  int pairs_, slots_, cap_;
  std::uint64_t max_sets_;
  Rational epsilon_;
  std::vector<char> state_;
  std::vector<std::int64_t> inner_;
  std::vector<std::int32_t> members_;
  std::vector<std::vector<std::int32_t>> buffers_;
  std::vector<std::vector<std::int32_t>> fresh_;
};

// Max translation ratio of the whole window, treating it as E.
Rational window_ratio(const Window& w, std::size_t count, int slots) {
  std::int64_t worst = 0;
  for (int s = 0; s < slots; ++s) {
    std::int64_t escaping = 0;
    for (std::size_t i = 0; i < count; ++i) {
      const auto y = w.nbr[i * static_cast<std::size_t>(slots) + static_cast<std::size_t>(s)];
      if (y < 0 || static_cast<std::size_t>(y) >= count) ++escaping;
    }
    worst = std::max(worst, escaping);
  }
  return Rational(2 * worst, static_cast<std::int64_t>(count));
}

}  // namespace

SearchReport search_folner(const GroupAction& action, const Rational& epsilon, const SearchBudget& budget) {
  check_epsilon(epsilon);
  const Point origin = action.origin();
  Exhaustion ex;
  ex.best_ratio_found = Rational(2);

  // (1) Boxes of side ⌈2n/ε⌉ in ℤⁿ: each unit shift moves 2/side of the box.
  if (action.kind() == ActionKind::lattice) {
    const int n = action.generator_count();
    const std::int64_t side = (2 * n * epsilon.den() + epsilon.num() - 1) / epsilon.num();
    long double volume = 1;
    for (int i = 0; i < n; ++i) volume *= static_cast<long double>(side);
    if (volume <= static_cast<long double>(budget.max_points)) {
      std::vector<Point> box;
      box.reserve(static_cast<std::size_t>(volume));
      Point p(static_cast<std::size_t>(n), 0);
      while (true) {
        box.push_back(p);
        std::size_t k = 0;
        while (k < p.size() && ++p[k] == side) p[k++] = 0;
        if (k == p.size()) break;
      }
      return SearchReport{verify_certificate(action, box, epsilon)};
    }
  }

  // (2) Orbit balls of increasing radius. The BFS prefix of a window of
  // radius R with depth <= r is exactly the ball of radius r.
  // The window radius doubles so that an early certificate stays cheap.
  const int slots = 2 * action.generator_count();
  int checked = -1;
  for (int want = std::min(8, budget.max_radius);; want = std::min(2 * want, budget.max_radius)) {
    Window w = fitting_window(action, origin, want, budget.max_points);
    for (int r = checked + 1; r <= w.radius; ++r) {
      const std::size_t count = w.layer_end[static_cast<std::size_t>(r)];
      ++ex.sets_examined;
      ex.radius_reached = r;
      const auto ratio = window_ratio(w, count, slots);
      if (ratio < ex.best_ratio_found) {
        ex.best_ratio_found = ratio;
        ex.best_set.assign(w.points.begin(), w.points.begin() + static_cast<std::ptrdiff_t>(count));
      }
      if (ratio <= epsilon) {
        std::vector<Point> ball(w.points.begin(), w.points.begin() + static_cast<std::ptrdiff_t>(count));
        return SearchReport{verify_certificate(action, ball, epsilon)};
      }
    }
    checked = w.radius;
    if (w.radius < want || want >= budget.max_radius) break;
  }

  // (3) Connected subsets containing the origin, for failure quantification.
  int cap = budget.subset_cap;
  if (cap >= 1) {
    Window sw = fitting_window(action, origin, cap - 1, budget.max_points);
    if (!sw.saturated) cap = std::min(cap, sw.radius + 1);
    SubsetSearch search(sw, action.generator_count(), cap, budget.max_subsets, epsilon);
    search.run();
    ex.sets_examined += search.examined;
    ex.subset_size_reached = cap;
    ex.subset_search_complete = !search.truncated && !search.hit;
    const Rational best(search.best_num, search.best_den);
    if (search.hit || best < ex.best_ratio_found) {
      ex.best_ratio_found = best;
      ex.best_set.clear();
      for (auto i : search.best_members) ex.best_set.push_back(sw.points[static_cast<std::size_t>(i)]);
    }
    if (search.hit) return SearchReport{verify_certificate(action, ex.best_set, epsilon)};
  }
  std::sort(ex.best_set.begin(), ex.best_set.end());
  return SearchReport{std::move(ex)};
}

std::vector<Rational> FolnerSequence::running_min_ratios() const {
  std::vector<Rational> out;
  for (const auto& c : certificates) {
    const auto r = c.max_ratio();
    out.push_back(out.empty() ? r : std::min(out.back(), r));
  }
  return out;
}

FolnerSequence folner_sequence(const GroupAction& action, std::span<const Rational> epsilons,
                               const SearchBudget& budget) {
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (epsilons[i] <= Rational(0)) throw ArgumentError("Folner sequence epsilons must be positive");
    if (i > 0 && !(epsilons[i] < epsilons[i - 1])) {
      throw ArgumentError("Folner sequence epsilons must be strictly decreasing");
    }
  }
  FolnerSequence seq;
  for (const auto& eps : epsilons) {
    auto rep = search_folner(action, eps, budget);
    if (!rep.found()) {
      seq.truncated_by = rep.exhaustion();
      break;
    }
    seq.certificates.push_back(rep.certificate());
  }
  return seq;
}

namespace {

nlohmann::json fraction(const Rational& r) { return {{"num", r.num()}, {"den", r.den()}}; }

Rational fraction_from(const nlohmann::json& j) {
  return Rational(j.at("num").get<std::int64_t>(), j.at("den").get<std::int64_t>());
}

}  // namespace

nlohmann::json certificate_to_json(const FolnerCertificate& cert) {
  nlohmann::json j;
  j["points"] = cert.points;
  j["size"] = cert.points.size();
  j["epsilon"] = fraction(cert.epsilon);
  auto& ratios = j["ratios"] = nlohmann::json::array();
  for (const auto& r : cert.ratios) {
    auto f = fraction(r.ratio);
    f["generator"] = r.generator.index;
    ratios.push_back(std::move(f));
  }
  j["boundary_ratio"] = fraction(cert.boundary_ratio);
  return j;
}

FolnerCertificate certificate_from_json(const nlohmann::json& j) {
  FolnerCertificate cert;
  cert.points = j.at("points").get<std::vector<Point>>();
  cert.epsilon = fraction_from(j.at("epsilon"));
  for (const auto& r : j.at("ratios")) {
    cert.ratios.push_back({Generator{r.at("generator").get<int>()}, fraction_from(r)});
  }
  cert.boundary_ratio = fraction_from(j.at("boundary_ratio"));
  return cert;
}

}  // namespace coverlab
