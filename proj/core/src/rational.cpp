#include "coverlab/rational.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>

#include "coverlab/errors.hpp"

namespace coverlab {

namespace {

__extension__ typedef __int128 i128;

Rational from_wide(i128 num, i128 den) {
  if (den == 0) throw ArgumentError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i128 a = num < 0 ? -num : num;
  i128 b = den;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    num /= a;
    den /= a;
  }
  constexpr i128 lim = std::numeric_limits<std::int64_t>::max();
  if (num > lim || -num > lim || den > lim) throw ArgumentError("rational overflow");
  return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw ArgumentError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = g > 1 ? num / g : num;
  den_ = g > 1 ? den / g : den;
}

Rational Rational::parse(std::string_view text) {
  const auto fail = [&] { return ArgumentError("not an exact decimal or fraction: '" + std::string(text) + "'"); };
  if (text.empty()) throw fail();

  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    std::int64_t n = 0, d = 0;
    auto a = std::from_chars(text.data(), text.data() + slash, n);
    auto b = std::from_chars(text.data() + slash + 1, text.data() + text.size(), d);
    if (a.ec != std::errc{} || a.ptr != text.data() + slash || b.ec != std::errc{} ||
        b.ptr != text.data() + text.size() || d == 0)
      throw fail();
    return Rational(n, d);
  }

  std::size_t i = 0;
  bool negative = false;
  if (text[i] == '+' || text[i] == '-') negative = text[i++] == '-';
  i128 mantissa = 0;
  int scale = 0;
  bool digits = false, dot = false;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (c >= '0' && c <= '9') {
      mantissa = mantissa * 10 + (c - '0');
      if (dot) ++scale;
      digits = true;
      if (mantissa > (i128{1} << 100)) throw fail();
    } else if (c == '.' && !dot) {
      dot = true;
    } else {
      break;
    }
  }
  if (!digits) throw fail();
  int exponent = 0;
  if (i < text.size()) {
    if (text[i] != 'e' && text[i] != 'E') throw fail();
    ++i;
    auto r = std::from_chars(text.data() + i + (i < text.size() && text[i] == '+' ? 1 : 0),
                             text.data() + text.size(), exponent);
    if (r.ec != std::errc{} || r.ptr != text.data() + text.size()) throw fail();
  }
  exponent -= scale;
  if (exponent > 30 || exponent < -30) throw fail();
  i128 num = negative ? -mantissa : mantissa;
  i128 den = 1;
  for (; exponent > 0; --exponent) num *= 10;
  for (; exponent < 0; ++exponent) den *= 10;
  return from_wide(num, den);
}

Rational Rational::floor_of(double x, std::int64_t den) {
  if (!std::isfinite(x) || den <= 0) throw ArgumentError("cannot convert non-finite value to rational");
  const long double scaled = std::floor(static_cast<long double>(x) * den);
  if (std::fabs(scaled) > 9.0e18L) throw ArgumentError("rational overflow");
  return Rational(static_cast<std::int64_t>(scaled), den);
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept {
  const i128 lhs = static_cast<i128>(a.num_) * b.den_;
  const i128 rhs = static_cast<i128>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Rational operator*(const Rational& a, const Rational& b) {
  return from_wide(static_cast<i128>(a.num_) * b.num_, static_cast<i128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  return from_wide(static_cast<i128>(a.num_) * b.den_, static_cast<i128>(a.den_) * b.num_);
}

}  // namespace coverlab
