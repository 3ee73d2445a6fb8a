#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace coverlab {

/// Exact fraction with a positive denominator, kept in lowest terms.
///
/// Følner ratios are quotients of set cardinalities, so every comparison in
/// the certificate code goes through this type rather than through doubles.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  /// Parses "0.05", "1/20", "3", "2.5e-3". The result is the exact value of
  /// the decimal string, not of its nearest double.
  static Rational parse(std::string_view text);

  /// Largest fraction with the given denominator that does not exceed `x`.
  static Rational floor_of(double x, std::int64_t den = 1'000'000'000);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }
  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const;

  friend bool operator==(const Rational& a, const Rational& b) noexcept {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept;

  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace coverlab
