#include "coverlab/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "coverlab/errors.hpp"

namespace coverlab {

using nlohmann::json;

std::string to_string(Task task) {
  switch (task) {
    case Task::folner: return "folner";
    case Task::spectrum: return "spectrum";
    case Task::interval: return "interval";
    case Task::transfer: return "transfer";
    case Task::counterexample: return "counterexample";
    case Task::corollary: return "corollary";
  }
  return "unknown";
}

Task task_from_string(const std::string& s) {
  for (Task t : {Task::folner, Task::spectrum, Task::interval, Task::transfer, Task::counterexample,
                 Task::corollary}) {
    if (to_string(t) == s) return t;
  }
  throw InputError("task", "unknown task '" + s + "'");
}

namespace {

std::string join(const std::string& field, const std::string& key) { return field.empty() ? key : field + "." + key; }

const json& require(const json& j, const char* key, const std::string& field) {
  if (!j.is_object() || !j.contains(key)) throw InputError(join(field, key), "missing required key");
  return j.at(key);
}

std::string at_index(const std::string& field, std::size_t i) { return field + "[" + std::to_string(i) + "]"; }

void only_keys(const json& j, std::initializer_list<const char*> keys, const std::string& field) {
  if (!j.is_object()) throw InputError(field, "expected an object");
  for (const auto& [k, v] : j.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* allowed) { return k == allowed; })) {
      throw InputError(join(field, k), "unknown key");
    }
  }
}

std::int64_t parse_int(const json& j, const std::string& field) {
  if (!j.is_number_integer()) throw InputError(field, "expected an integer");
  return j.get<std::int64_t>();
}

int parse_small_int(const json& j, const std::string& field, int lo, int hi) {
  const auto v = parse_int(j, field);
  if (v < lo || v > hi) {
    throw InputError(field, "value " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " +
                                std::to_string(hi) + "]");
  }
  return static_cast<int>(v);
}

std::string parse_string(const json& j, const std::string& field) {
  if (!j.is_string()) throw InputError(field, "expected a string");
  return j.get<std::string>();
}

Word parse_word(const json& j, const std::string& field) {
  if (!j.is_array()) throw InputError(field, "expected a word (array of nonzero integers)");
  Word w;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto v = parse_int(j[i], at_index(field, i));
    if (v == 0 || v > 1'000'000 || v < -1'000'000) throw InputError(at_index(field, i), "invalid generator letter");
    w.push_back(static_cast<int>(v));
  }
  return w;
}

}  // namespace

double parse_real(const json& j, const std::string& field) {
  if (!j.is_string()) throw InputError(field, "real numbers must be written as decimal strings");
  const auto s = j.get<std::string>();
  double x = 0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, x);
  if (ec != std::errc() || ptr != end || s.empty()) throw InputError(field, "'" + s + "' is not a decimal number");
  if (!std::isfinite(x)) throw InputError(field, "value must be finite");
  return x;
}

GroupAction parse_action(const json& j, const std::string& field) {
  const auto kind = parse_string(require(j, "kind", field), join(field, "kind"));
  try {
    if (kind == "lattice") {
      only_keys(j, {"kind", "dimension"}, field);
      return GroupAction::lattice(parse_small_int(require(j, "dimension", field), join(field, "dimension"), 1, 64));
    }
    if (kind == "free_group") {
      only_keys(j, {"kind", "rank"}, field);
      return GroupAction::free_group(parse_small_int(require(j, "rank", field), join(field, "rank"), 1, 64));
    }
    if (kind == "finite_permutation") {
      only_keys(j, {"kind", "generators"}, field);
      const auto& g = require(j, "generators", field);
      const auto gf = join(field, "generators");
      if (!g.is_array() || g.empty()) throw InputError(gf, "expected a nonempty array of permutations");
      std::vector<std::vector<int>> perms;
      for (std::size_t i = 0; i < g.size(); ++i) {
        if (!g[i].is_array()) throw InputError(at_index(gf, i), "expected a permutation in one-line notation");
        std::vector<int> p;
        for (std::size_t k = 0; k < g[i].size(); ++k) {
          p.push_back(parse_small_int(g[i][k], at_index(at_index(gf, i), k), 0, 1'000'000));
        }
        perms.push_back(std::move(p));
      }
      return GroupAction::finite_permutation(std::move(perms));
    }
    if (kind == "quotient") {
      only_keys(j, {"kind", "inner", "images"}, field);
      auto inner = parse_action(require(j, "inner", field), join(field, "inner"));
      const auto& im = require(j, "images", field);
      const auto imf = join(field, "images");
      if (!im.is_array() || im.empty()) throw InputError(imf, "expected a nonempty array of words");
      std::vector<Word> images;
      for (std::size_t i = 0; i < im.size(); ++i) images.push_back(parse_word(im[i], at_index(imf, i)));
      return GroupAction::quotient(std::move(inner), std::move(images));
    }
  } catch (const ArgumentError& e) {
    throw InputError(field, e.what());
  }
  throw InputError(join(field, "kind"), "unknown action kind '" + kind + "'");
}

namespace {

void parse_graph(const json& g, Scenario& sc, bool want_voltages) {
  only_keys(g, {"vertices", "edges"}, "graph");
  const auto& verts = require(g, "vertices", "graph");
  if (!verts.is_array() || verts.empty()) throw InputError("graph.vertices", "expected a nonempty array");
  std::map<std::string, std::size_t> index;
  std::vector<double> mu;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    const auto f = at_index("graph.vertices", i);
    only_keys(verts[i], {"id", "mu"}, f);
    auto id = parse_string(require(verts[i], "id", f), f + ".id");
    if (!index.emplace(id, i).second) throw InputError(f + ".id", "duplicate vertex id '" + id + "'");
    const double m = verts[i].contains("mu") ? parse_real(verts[i]["mu"], f + ".mu") : 1.0;
    if (!(m > 0)) throw InputError(f + ".mu", "measure must be positive");
    mu.push_back(m);
    sc.vertex_ids.push_back(std::move(id));
  }
  const auto& edges = require(g, "edges", "graph");
  if (!edges.is_array()) throw InputError("graph.edges", "expected an array");
  std::vector<Edge> es;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto f = at_index("graph.edges", i);
    only_keys(edges[i], {"from", "to", "w", "voltage"}, f);
    auto lookup = [&](const char* key) {
      const auto id = parse_string(require(edges[i], key, f), f + "." + key);
      auto it = index.find(id);
      if (it == index.end()) throw InputError(f + "." + key, "undefined vertex '" + id + "'");
      return it->second;
    };
    Edge e{lookup("from"), lookup("to"), 1.0};
    if (e.u == e.v) throw InputError(f, "loops are not allowed");
    if (edges[i].contains("w")) e.w = parse_real(edges[i]["w"], f + ".w");
    if (!(e.w > 0)) throw InputError(f + ".w", "conductance must be positive");
    es.push_back(e);
    if (edges[i].contains("voltage")) {
      if (!want_voltages) throw InputError(f + ".voltage", "voltages need a 'fiber' specification");
      sc.voltages.push_back(parse_word(edges[i]["voltage"], f + ".voltage"));
    } else {
      sc.voltages.emplace_back();
    }
  }
  sc.base = WeightedGraph(std::move(mu), std::move(es));
  if (!sc.base->connected()) throw InputError("graph", "graph is not connected");
}

void parse_potential(const json& p, Scenario& sc) {
  only_keys(p, {"uniform", "values"}, "potential");
  const std::size_t n = sc.base->vertex_count();
  std::vector<double> values(n, 0.0);
  if (p.contains("uniform") && p.contains("values")) {
    throw InputError("potential", "give either 'uniform' or 'values', not both");
  }
  if (p.contains("uniform")) std::fill(values.begin(), values.end(), parse_real(p["uniform"], "potential.uniform"));
  if (p.contains("values")) {
    const auto& m = p["values"];
    if (!m.is_object()) throw InputError("potential.values", "expected a map from vertex id to value");
    for (const auto& [id, v] : m.items()) {
      auto it = std::find(sc.vertex_ids.begin(), sc.vertex_ids.end(), id);
      if (it == sc.vertex_ids.end()) throw InputError("potential.values." + id, "undefined vertex");
      values[static_cast<std::size_t>(it - sc.vertex_ids.begin())] = parse_real(v, "potential.values." + id);
    }
  }
  sc.potential = Potential(std::move(values));
}

void parse_params(const json& p, ScenarioParams& out) {
  only_keys(p,
            {"epsilon", "epsilons", "alpha", "a", "a_samples", "radius", "radii", "tolerance", "seed", "max_radius",
             "max_points", "subset_cap", "max_subsets"},
            "params");
  auto reject_both = [&](const char* one, const char* many) {
    if (p.contains(one) && p.contains(many)) {
      throw InputError("params", std::string("give either '") + one + "' or '" + many + "'");
    }
  };
  reject_both("epsilon", "epsilons");
  reject_both("a", "a_samples");
  reject_both("radius", "radii");
  auto parse_eps = [](const json& j, const std::string& f) {
    if (!j.is_string()) throw InputError(f, "epsilon must be a decimal string");
    Rational r;
    try {
      r = Rational::parse(j.get<std::string>());
    } catch (const Error& e) {
      throw InputError(f, e.what());
    }
    if (r <= Rational(0) || r > Rational(1)) throw InputError(f, "epsilon must lie in (0, 1]");
    return r;
  };
  if (p.contains("epsilon")) out.epsilons.push_back(parse_eps(p["epsilon"], "params.epsilon"));
  if (p.contains("epsilons")) {
    const auto& e = p["epsilons"];
    if (!e.is_array() || e.empty()) throw InputError("params.epsilons", "expected a nonempty array");
    for (std::size_t i = 0; i < e.size(); ++i) out.epsilons.push_back(parse_eps(e[i], at_index("params.epsilons", i)));
    for (std::size_t i = 1; i < out.epsilons.size(); ++i) {
      if (!(out.epsilons[i] < out.epsilons[i - 1])) {
        throw InputError(at_index("params.epsilons", i), "epsilons must be strictly decreasing");
      }
    }
  }
  if (p.contains("alpha")) out.alpha = parse_small_int(p["alpha"], "params.alpha", 1, 1000);
  if (p.contains("a")) out.a_samples.push_back(parse_real(p["a"], "params.a"));
  if (p.contains("a_samples")) {
    const auto& a = p["a_samples"];
    if (!a.is_array() || a.empty()) throw InputError("params.a_samples", "expected a nonempty array");
    for (std::size_t i = 0; i < a.size(); ++i) out.a_samples.push_back(parse_real(a[i], at_index("params.a_samples", i)));
  }
  if (p.contains("radius")) out.radii.push_back(parse_small_int(p["radius"], "params.radius", 0, 100000));
  if (p.contains("radii")) {
    const auto& r = p["radii"];
    if (!r.is_array() || r.empty()) throw InputError("params.radii", "expected a nonempty array");
    for (std::size_t i = 0; i < r.size(); ++i) out.radii.push_back(parse_small_int(r[i], at_index("params.radii", i), 0, 100000));
  }
  if (p.contains("tolerance")) {
    out.tolerance = parse_real(p["tolerance"], "params.tolerance");
    if (!(out.tolerance > 0)) throw InputError("params.tolerance", "tolerance must be positive");
  }
  if (p.contains("seed")) {
    const auto s = parse_int(p["seed"], "params.seed");
    if (s < 0) throw InputError("params.seed", "seed must be non-negative");
    out.seed = static_cast<std::uint64_t>(s);
  }
  if (p.contains("max_radius")) out.budget.max_radius = parse_small_int(p["max_radius"], "params.max_radius", 0, 1'000'000);
  if (p.contains("max_points")) {
    const auto v = parse_int(p["max_points"], "params.max_points");
    if (v < 1) throw InputError("params.max_points", "budget must be positive");
    out.budget.max_points = static_cast<std::size_t>(v);
  }
  if (p.contains("subset_cap")) out.budget.subset_cap = parse_small_int(p["subset_cap"], "params.subset_cap", 0, 20);
  if (p.contains("max_subsets")) {
    const auto v = parse_int(p["max_subsets"], "params.max_subsets");
    if (v < 0) throw InputError("params.max_subsets", "must be non-negative");
    out.budget.max_subsets = static_cast<std::uint64_t>(v);
  }
}

}  // namespace

VoltageCover Scenario::cover() const {
  if (!has_cover()) throw InputError("fiber", "scenario has no cover");
  try {
    return build_cover(*base, *fiber, voltages);
  } catch (const ArgumentError& e) {
    throw InputError("graph.edges", e.what());
  }
}

Scenario parse_scenario(const json& j) {
  only_keys(j, {"name", "task", "description", "action", "graph", "fiber", "potential", "params"}, "");
  Scenario sc;
  sc.name = parse_string(require(j, "name", ""), "name");
  if (sc.name.empty() || !std::all_of(sc.name.begin(), sc.name.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
      })) {
    throw InputError("name", "names use letters, digits, '_', '-' and '.' only");
  }
  sc.task = task_from_string(parse_string(require(j, "task", ""), "task"));
  if (j.contains("params")) parse_params(j["params"], sc.params);

  if (j.contains("action")) sc.action = parse_action(j["action"], "action");
  if (j.contains("fiber")) sc.fiber = parse_action(j["fiber"], "fiber");
  if (j.contains("graph")) parse_graph(j["graph"], sc, sc.fiber.has_value());
  if (j.contains("potential")) {
    if (!sc.base) throw InputError("potential", "a potential needs a graph");
    parse_potential(j["potential"], sc);
  } else if (sc.base) {
    sc.potential = Potential::zero(sc.base->vertex_count());
  }
  if (sc.fiber && !sc.base) throw InputError("fiber", "a fiber needs a graph");
  if (sc.has_cover()) (void)sc.cover();  // validates voltages against the fiber

  auto& prm = sc.params;
  switch (sc.task) {
    case Task::folner:
      if (!sc.action) throw InputError("action", "folner task needs an 'action'");
      if (prm.epsilons.empty()) throw InputError("params.epsilon", "folner task needs 'epsilon' or 'epsilons'");
      break;
    case Task::spectrum:
      if (!sc.base) throw InputError("graph", "spectrum task needs a 'graph'");
      if (prm.a_samples.empty()) prm.a_samples.push_back(1.0);
      if (sc.has_cover() && prm.radii.empty()) throw InputError("params.radii", "windows need 'radius' or 'radii'");
      break;
    case Task::interval:
      if (!sc.base) throw InputError("graph", "interval task needs a 'graph'");
      if (sc.has_cover() && (prm.a_samples.empty() || prm.radii.size() != 1)) {
        throw InputError("params", "cover comparison needs 'a_samples' and a single 'radius'");
      }
      break;
    case Task::transfer:
    case Task::counterexample:
      if (!sc.has_cover()) throw InputError("fiber", to_string(sc.task) + " task needs a 'graph' and a 'fiber'");
      if (prm.a_samples.empty()) throw InputError("params.a", to_string(sc.task) + " task needs 'a'");
      if (sc.task == Task::counterexample && prm.radii.empty()) {
        throw InputError("params.radii", "counterexample task needs 'radius' or 'radii'");
      }
      break;
    case Task::corollary:
      if (!sc.base) throw InputError("graph", "corollary task needs a 'graph'");
      break;
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path.string(), "cannot open scenario file");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InputError(path.string() + ":" + std::to_string(line) + ":" + std::to_string(col), "malformed JSON");
  }
  try {
    return parse_scenario(j);
  } catch (const InputError& e) {
    throw InputError(path.filename().string() + (e.field().empty() ? "" : ": " + e.field()),
                     std::string(e.what()).substr(e.field().empty() ? 0 : e.field().size() + 2));
  }
}

}  // namespace coverlab
