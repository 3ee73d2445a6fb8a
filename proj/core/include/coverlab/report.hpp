#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "coverlab/folner.hpp"
#include "coverlab/spectrum.hpp"
#include "coverlab/transfer.hpp"

namespace coverlab {

/// 17 significant digits, so the value re-parses to the same double. "inf", "-inf", "nan" otherwise.
std::string format_real(double x);
/// Inverse of format_real.
double parse_formatted_real(const std::string& s);

inline nlohmann::json real_json(double x) { return format_real(x); }
nlohmann::json rational_json(const Rational& r);

nlohmann::json to_json(const Exhaustion& ex);
nlohmann::json to_json(const SearchReport& report);
nlohmann::json to_json(const DirichletValue& d);
nlohmann::json to_json(const StabilityInterval& I);
nlohmann::json to_json(const SpectralResult& r, double a);
nlohmann::json to_json(const WitnessReport& w);
nlohmann::json to_json(const TransferOutcome& t);
nlohmann::json to_json(const EasyDirectionReport& e);
nlohmann::json to_json(const IntervalComparison& c);
nlohmann::json to_json(const CorollaryReport& c);

/// Fixed-column CSV; fields are quoted only when needed.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add_row(std::vector<std::string> row);
  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t row_count() const { return rows_.size(); }
  std::string str() const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

std::string csv_escape(const std::string& field);

}  // namespace coverlab
