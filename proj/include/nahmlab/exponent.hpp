#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace nahmlab {

using Rational = mpq_class;

// a/b in lowest terms (mpq_class(a, b) does not reduce)
inline Rational ratio(long a, long b) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

Rational parse_rational(std::string_view text);
std::string to_string(const Rational& r);
Rational floor(const Rational& r);
Rational ceil(const Rational& r);

// Small exact rational used for q-exponents. Always normalized with den > 0.
class Exponent {
 public:
  constexpr Exponent() = default;
  constexpr Exponent(std::int64_t n) : num_(n) {}  // NOLINT(implicit)
  Exponent(std::int64_t num, std::int64_t den);
  explicit Exponent(const Rational& r);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  Rational to_rational() const { return Rational(mpz_class(num_), mpz_class(den_)); }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string to_string() const;

  std::int64_t floor() const;
  std::int64_t ceil() const;
  bool is_integer() const { return den_ == 1; }

  Exponent operator-() const;
  friend Exponent operator+(Exponent a, Exponent b);
  friend Exponent operator-(Exponent a, Exponent b);
  friend Exponent operator*(Exponent a, Exponent b);
  friend Exponent operator/(Exponent a, Exponent b);
  Exponent& operator+=(Exponent b) { return *this = *this + b; }
  Exponent& operator-=(Exponent b) { return *this = *this - b; }

  friend bool operator==(Exponent a, Exponent b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend std::strong_ordering operator<=>(Exponent a, Exponent b);

 private:
  friend Exponent make_exponent(__int128 num, __int128 den);
  struct Reduced {};
  constexpr Exponent(std::int64_t num, std::int64_t den, Reduced) : num_(num), den_(den) {}

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

Exponent parse_exponent(std::string_view text);
inline Exponent min(Exponent a, Exponent b) { return b < a ? b : a; }
inline Exponent max(Exponent a, Exponent b) { return a < b ? b : a; }

// Truncation of a series: nullopt means the series is exact.
using Trunc = std::optional<Exponent>;

inline Trunc min_trunc(const Trunc& a, const Trunc& b) {
  if (!a) return b;
  if (!b) return a;
  return min(*a, *b);
}

inline Trunc add_trunc(const Trunc& t, Exponent shift) {
  if (!t) return t;
  return *t + shift;
}

std::int64_t lcm64(std::int64_t a, std::int64_t b);
std::int64_t gcd64(std::int64_t a, std::int64_t b);
// floor(a / b) for b > 0.
std::int64_t floor_div(std::int64_t a, std::int64_t b);
std::int64_t ceil_div(std::int64_t a, std::int64_t b);

}  // namespace nahmlab
