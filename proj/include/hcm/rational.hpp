#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace hcm {

// Exact nonnegative rational for catalog weights. Kept exact through parsing and
// normalization; converted to double only inside moment sums.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }
  static Rational from_int(std::int64_t n) { return Rational(n, 1); }

  void normalize() {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    const __int128 n = static_cast<__int128>(a.num) * b.den + static_cast<__int128>(b.num) * a.den;
    const __int128 d = static_cast<__int128>(a.den) * b.den;
    return reduce128(n, d);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return reduce128(static_cast<__int128>(a.num) * b.num, static_cast<__int128>(a.den) * b.den);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num == 0) throw std::invalid_argument("rational division by zero");
    return reduce128(static_cast<__int128>(a.num) * b.den, static_cast<__int128>(a.den) * b.num);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    const __int128 n = static_cast<__int128>(a.num) * b.den - static_cast<__int128>(b.num) * a.den;
    return reduce128(n, static_cast<__int128>(a.den) * b.den);
  }
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }

 private:
  static Rational reduce128(__int128 n, __int128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 a = n < 0 ? -n : n;
    __int128 b = d;
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      n /= a;
      d /= a;
    }
    const auto lo = static_cast<__int128>(INT64_MIN);
    const auto hi = static_cast<__int128>(INT64_MAX);
    if (n < lo || n > hi || d > hi) throw std::overflow_error("rational overflow");
    Rational r;
    r.num = static_cast<std::int64_t>(n);
    r.den = static_cast<std::int64_t>(d);
    return r;
  }
};

// Parses "3", "0.25" (exact over a power of ten) or "1/2".
inline Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    const std::int64_t n = std::stoll(text.substr(0, slash));
    const std::int64_t d = std::stoll(text.substr(slash + 1));
    return Rational(n, d);
  }
  const auto dot = text.find('.');
  if (dot == std::string::npos) return Rational::from_int(std::stoll(text));
  const std::string frac = text.substr(dot + 1);
  if (frac.size() > 15) throw std::invalid_argument("decimal weight too long for exact rational: " + text);
  std::int64_t den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  const std::string whole = text.substr(0, dot);
  const std::int64_t w = whole.empty() || whole == "-" ? 0 : std::stoll(whole);
  std::int64_t f = frac.empty() ? 0 : std::stoll(frac);
  if (w < 0 || whole[0] == '-') f = -f;
  return Rational(w * den + f, den);
}

}  // namespace hcm
