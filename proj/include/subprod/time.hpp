#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace subprod {

// Exact rational arithmetic. Grid times never touch floating point;
// all roundoff in the library lives in the complex linear algebra.

struct Rational {
  long long num = 0;
  long long den = 1;

  constexpr Rational() = default;
  Rational(long long n, long long d) : num(n), den(d) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    if (den < 0) { num = -num; den = -den; }
    const long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) { num /= g; den /= g; }
  }

  Rational operator+(const Rational& o) const {
    return Rational(num * o.den + o.num * den, den * o.den);
  }
  Rational operator-(const Rational& o) const {
    return Rational(num * o.den - o.num * den, den * o.den);
  }
  Rational operator*(const Rational& o) const {
    return Rational(num * o.num, den * o.den);
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    return a.num * b.den <=> b.num * a.den;
  }

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool is_zero() const { return num == 0; }
  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
};

inline Rational rat_min(const Rational& a, const Rational& b) { return a < b ? a : b; }
inline Rational rat_max(const Rational& a, const Rational& b) { return a < b ? b : a; }

// Strictly positive rational time point, kept in lowest terms.
class Time {
 public:
  Time(long long num, long long den) : r_(num, den) {
    if (r_.num < 1) throw std::invalid_argument("Time must be positive");
  }
  explicit Time(const Rational& r) : Time(r.num, r.den) {}

  long long num() const { return r_.num; }
  long long den() const { return r_.den; }
  const Rational& rational() const { return r_; }
  double value() const { return r_.value(); }

  Time operator+(const Time& o) const { return Time(r_ + o.r_); }

  friend bool operator==(const Time& a, const Time& b) { return a.r_ == b.r_; }
  friend std::strong_ordering operator<=>(const Time& a, const Time& b) {
    return a.r_ <=> b.r_;
  }

  std::string str() const { return r_.str(); }

 private:
  Rational r_;
};

}  // namespace subprod
