#include "coverlab/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "coverlab/errors.hpp"

namespace coverlab {

using nlohmann::json;

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0) return "0";  // folds -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_formatted_real(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  std::size_t used = 0;
  const double x = std::stod(s, &used);
  if (used != s.size()) throw ArgumentError("'" + s + "' is not a formatted real");
  return x;
}

json rational_json(const Rational& r) { return {{"num", r.num()}, {"den", r.den()}}; }

json to_json(const Exhaustion& ex) {
  return {{"best_ratio_found", rational_json(ex.best_ratio_found)},
          {"best_set", ex.best_set},
          {"sets_examined", ex.sets_examined},
          {"radius_reached", ex.radius_reached},
          {"subset_size_reached", ex.subset_size_reached},
          {"subset_search_complete", ex.subset_search_complete},
          {"message", ex.message()}};
}

json to_json(const SearchReport& report) {
  if (report.found()) return {{"found", true}, {"certificate", certificate_to_json(report.certificate())}};
  return {{"found", false}, {"exhaustion", to_json(report.exhaustion())}};
}

json to_json(const DirichletValue& d) {
  return {{"radius", d.radius},
          {"value", real_json(d.value)},
          {"method", d.method},
          {"window_vertices", real_json(d.window_vertices)}};
}

json to_json(const StabilityInterval& I) {
  return {{"lower", real_json(I.lower)},
          {"upper", real_json(I.upper)},
          {"endpoint_tolerance", real_json(I.endpoint_tolerance)}};
}

json to_json(const SpectralResult& r, double a) {
  return {{"a", real_json(a)}, {"lambda_min", real_json(r.lambda_min)}, {"residual", real_json(r.residual)}};
}

json to_json(const WitnessReport& w) {
  return {{"c", w.c},
          {"b", w.b},
          {"epsilon_used", real_json(w.epsilon_used)},
          {"alpha", w.alpha},
          {"Q_base", real_json(w.Q_base)},
          {"Q_cover", real_json(w.Q_cover)},
          {"term_grad", real_json(w.term_grad)},
          {"bound_grad", real_json(w.bound_grad)},
          {"term_pot", real_json(w.term_pot)},
          {"bound_pot", real_json(w.bound_pot)},
          {"final_bound", real_json(w.final_bound)},
          {"mass", real_json(w.mass)},
          {"gradient", real_json(w.gradient)},
          {"negative_part", real_json(w.negative_part)},
          {"degree_dominated", w.degree_dominated},
          {"boundary_neighbourhood", w.boundary_neighbourhood},
          {"grad_holds", w.grad_holds()},
          {"pot_holds", w.pot_holds()},
          {"final_holds", w.final_holds()}};
}

json to_json(const TransferOutcome& t) {
  json j = {{"witness_found", t.witness_found},
            {"lambda_min_base", real_json(t.lambda_min_base)},
            {"r_star", real_json(t.r_star)},
            {"epsilon_used", real_json(t.epsilon_used)},
            {"attempts", t.attempts},
            {"best_collar_ratio", real_json(t.best_collar_ratio)},
            {"message", t.message}};
  if (t.witness) {
    j["witness"] = to_json(t.witness->report);
    j["witness_support_size"] = t.witness->values.support().size();
  }
  if (t.exhaustion) j["exhaustion"] = to_json(*t.exhaustion);
  return j;
}

json to_json(const EasyDirectionReport& e) {
  json rows = json::array();
  for (const auto& r : e.rows) {
    json w = json::array();
    for (const auto& d : r.windows) w.push_back(to_json(d));
    rows.push_back({{"a", real_json(r.a)},
                    {"base_lambda", real_json(r.base_lambda)},
                    {"base_nonnegative", r.base_nonnegative},
                    {"windows", std::move(w)},
                    {"min_margin", real_json(r.min_margin)},
                    {"passed", r.passed}});
  }
  return {{"rows", std::move(rows)}, {"passed", e.passed}};
}

json to_json(const IntervalComparison& c) {
  json rows = json::array();
  for (const auto& r : c.rows) {
    json row = {{"a", real_json(r.a)},
                {"base_lambda", real_json(r.base_lambda)},
                {"base_class", r.base_nonnegative ? "non-negative" : "negative"},
                {"window", to_json(r.window)},
                {"cover_class", r.cover_refuted ? "refuted" : "no obstruction up to radius " + std::to_string(c.radius)},
                {"agree", r.agree()}};
    if (r.witness_found) row["witness_found"] = *r.witness_found;
    rows.push_back(std::move(row));
  }
  return {{"radius", c.radius},
          {"rows", std::move(rows)},
          {"inclusion_holds", c.inclusion_holds},
          {"all_agree", c.all_agree},
          {"verdict", c.verdict}};
}

json to_json(const CorollaryReport& c) {
  json samples = json::array();
  for (const auto& s : c.samples) {
    samples.push_back({{"a", real_json(s.a)},
                       {"lambda_min", real_json(s.lambda_min)},
                       {"constant_rayleigh", real_json(s.constant_rayleigh)}});
  }
  return {{"potential_vanishes", c.potential_vanishes},
          {"samples", std::move(samples)},
          {"interval", to_json(c.interval)},
          {"tolerance", real_json(c.tolerance)},
          {"passed", c.passed}};
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != columns_.size()) {
    throw ArgumentError("CSV row has " + std::to_string(row.size()) + " fields, expected " +
                        std::to_string(columns_.size()));
  }
  rows_.push_back(std::move(row));
}

std::string CsvTable::str() const {
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) os << (i ? "," : "") << csv_escape(fields[i]);
    os << '\n';
  };
  line(columns_);
  for (const auto& r : rows_) line(r);
  return os.str();
}

}  // namespace coverlab
