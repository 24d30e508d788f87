#pragma once

#include <string>
#include <string_view>

#include <mpfr.h>

#include "nahmlab/exponent.hpp"

namespace nahmlab {

// a + b*sqrt(5)
struct Root5 {
  Rational a{0};
  Rational b{0};

  Root5() = default;
  Root5(Rational a_, Rational b_) : a(std::move(a_)), b(std::move(b_)) {}
  explicit Root5(const Rational& r) : a(r), b(0) {}

  Root5 conjugate() const { return {a, -b}; }
  Rational norm() const { return a * a - 5 * b * b; }
  bool is_zero() const { return a == 0 && b == 0; }
  bool is_rational() const { return b == 0; }

  Root5& operator+=(const Root5& o) { a += o.a; b += o.b; return *this; }
  Root5& operator-=(const Root5& o) { a -= o.a; b -= o.b; return *this; }
  Root5& operator*=(const Root5& o);
  Root5& operator/=(const Root5& o);
  friend Root5 operator+(Root5 x, const Root5& y) { return x += y; }
  friend Root5 operator-(Root5 x, const Root5& y) { return x -= y; }
  friend Root5 operator*(Root5 x, const Root5& y) { return x *= y; }
  friend Root5 operator/(Root5 x, const Root5& y) { return x /= y; }
  Root5 operator-() const { return {-a, -b}; }
  friend bool operator==(const Root5& x, const Root5& y) { return x.a == y.a && x.b == y.b; }
};

// re + im*i over the rationals
struct Gauss {
  Rational re{0};
  Rational im{0};

  Gauss() = default;
  Gauss(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
  explicit Gauss(const Rational& r) : re(r), im(0) {}

  static Gauss i() { return {Rational(0), Rational(1)}; }
  Gauss conjugate() const { return {re, -im}; }
  bool is_zero() const { return re == 0 && im == 0; }

  Gauss& operator+=(const Gauss& o) { re += o.re; im += o.im; return *this; }
  Gauss& operator-=(const Gauss& o) { re -= o.re; im -= o.im; return *this; }
  Gauss& operator*=(const Gauss& o);
  Gauss& operator/=(const Gauss& o);
  friend Gauss operator+(Gauss x, const Gauss& y) { return x += y; }
  friend Gauss operator-(Gauss x, const Gauss& y) { return x -= y; }
  friend Gauss operator*(Gauss x, const Gauss& y) { return x *= y; }
  friend Gauss operator/(Gauss x, const Gauss& y) { return x /= y; }
  Gauss operator-() const { return {-re, -im}; }
  friend bool operator==(const Gauss& x, const Gauss& y) { return x.re == y.re && x.im == y.im; }
};

// MPFR float. Each value carries its own precision; binary operations round
// to the larger of the two operand precisions.
class BigFloat {
 public:
  static constexpr mpfr_prec_t kMinPrec = 2;

  BigFloat();
  BigFloat(const BigFloat& o);
  BigFloat(BigFloat&& o) noexcept;
  BigFloat& operator=(const BigFloat& o);
  BigFloat& operator=(BigFloat&& o) noexcept;
  ~BigFloat();

  static BigFloat zero(mpfr_prec_t prec);
  static BigFloat from_int(long v, mpfr_prec_t prec);
  static BigFloat from_double(double v, mpfr_prec_t prec);
  static BigFloat from_rational(const Rational& r, mpfr_prec_t prec);
  static BigFloat from_string(std::string_view s, mpfr_prec_t prec);
  static BigFloat pi(mpfr_prec_t prec);
  static BigFloat two_pow(long e, mpfr_prec_t prec);

  mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
  BigFloat rounded(mpfr_prec_t prec) const;
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  std::string to_string(int digits = 0) const;
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  long exponent2() const;  // binary exponent, for magnitude tests

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  BigFloat& operator+=(const BigFloat& o);
  BigFloat& operator-=(const BigFloat& o);
  BigFloat& operator*=(const BigFloat& o);
  BigFloat& operator/=(const BigFloat& o);
  friend BigFloat operator+(BigFloat x, const BigFloat& y) { return x += y; }
  friend BigFloat operator-(BigFloat x, const BigFloat& y) { return x -= y; }
  friend BigFloat operator*(BigFloat x, const BigFloat& y) { return x *= y; }
  friend BigFloat operator/(BigFloat x, const BigFloat& y) { return x /= y; }
  BigFloat operator-() const;

  friend bool operator==(const BigFloat& x, const BigFloat& y) { return mpfr_equal_p(x.v_, y.v_) != 0; }
  friend bool operator<(const BigFloat& x, const BigFloat& y) { return mpfr_less_p(x.v_, y.v_) != 0; }
  friend bool operator>(const BigFloat& x, const BigFloat& y) { return y < x; }
  friend bool operator<=(const BigFloat& x, const BigFloat& y) { return !(y < x); }
  friend bool operator>=(const BigFloat& x, const BigFloat& y) { return !(x < y); }

 private:
  explicit BigFloat(mpfr_prec_t prec, int);
  mpfr_t v_;
};

BigFloat abs(const BigFloat& x);
BigFloat sqrt(const BigFloat& x);
BigFloat exp(const BigFloat& x);
BigFloat log(const BigFloat& x);
BigFloat sin(const BigFloat& x);
BigFloat cos(const BigFloat& x);
BigFloat atan2(const BigFloat& y, const BigFloat& x);
BigFloat pow(const BigFloat& x, const BigFloat& y);
BigFloat max(const BigFloat& x, const BigFloat& y);

struct BigComplex {
  BigFloat re;
  BigFloat im;

  BigComplex() = default;
  BigComplex(BigFloat r, BigFloat i) : re(std::move(r)), im(std::move(i)) {}
  explicit BigComplex(BigFloat r) : re(std::move(r)), im(BigFloat::zero(re.prec())) {}

  static BigComplex from_rational(const Rational& r, mpfr_prec_t prec) {
    return {BigFloat::from_rational(r, prec), BigFloat::zero(prec)};
  }
  static BigComplex from_gauss(const Gauss& g, mpfr_prec_t prec) {
    return {BigFloat::from_rational(g.re, prec), BigFloat::from_rational(g.im, prec)};
  }
  static BigComplex i(mpfr_prec_t prec) { return {BigFloat::zero(prec), BigFloat::from_int(1, prec)}; }
  // exp(2 pi i x)
  static BigComplex unit(const BigFloat& x);
  static BigComplex parse(std::string_view s, mpfr_prec_t prec);

  mpfr_prec_t prec() const { return re.prec() > im.prec() ? re.prec() : im.prec(); }
  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  BigComplex conjugate() const { return {re, -im}; }
  BigComplex rounded(mpfr_prec_t p) const { return {re.rounded(p), im.rounded(p)}; }
  std::string to_string(int digits = 0) const;

  BigComplex& operator+=(const BigComplex& o) { re += o.re; im += o.im; return *this; }
  BigComplex& operator-=(const BigComplex& o) { re -= o.re; im -= o.im; return *this; }
  BigComplex& operator*=(const BigComplex& o);
  BigComplex& operator/=(const BigComplex& o);
  friend BigComplex operator+(BigComplex x, const BigComplex& y) { return x += y; }
  friend BigComplex operator-(BigComplex x, const BigComplex& y) { return x -= y; }
  friend BigComplex operator*(BigComplex x, const BigComplex& y) { return x *= y; }
  friend BigComplex operator/(BigComplex x, const BigComplex& y) { return x /= y; }
  BigComplex operator-() const { return {-re, -im}; }
  friend bool operator==(const BigComplex& x, const BigComplex& y) { return x.re == y.re && x.im == y.im; }
};

BigFloat abs(const BigComplex& z);
BigFloat arg(const BigComplex& z);
BigComplex exp(const BigComplex& z);
BigComplex log(const BigComplex& z);  // principal branch
BigComplex sqrt(const BigComplex& z);  // principal branch
BigComplex pow(const BigComplex& z, const BigFloat& w);  // principal branch
BigComplex pow(const BigComplex& z, long n);
BigComplex operator*(const BigComplex& z, const BigFloat& x);

BigFloat to_bigfloat(const Root5& x, mpfr_prec_t prec);
std::string to_string(const Root5& x);
std::string to_string(const Gauss& x);
Root5 parse_root5(std::string_view s);
Gauss parse_gauss(std::string_view s);

// Uniform access to coefficient rings used by the series templates.
template <class R>
struct RingTraits;

template <>
struct RingTraits<Rational> {
  static constexpr std::string_view name = "rational";
  static constexpr bool exact = true;
  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
  static bool is_zero(const Rational& x) { return x == 0; }
  static Rational from_rational(const Rational& r, mpfr_prec_t = 0) { return r; }
  static std::string to_string(const Rational& x) { return x.get_str(); }
  static Rational parse(std::string_view s, mpfr_prec_t = 0) { return parse_rational(s); }
};

template <>
struct RingTraits<Root5> {
  static constexpr std::string_view name = "root5";
  static constexpr bool exact = true;
  static Root5 zero() { return {}; }
  static Root5 one() { return Root5(Rational(1)); }
  static bool is_zero(const Root5& x) { return x.is_zero(); }
  static Root5 from_rational(const Rational& r, mpfr_prec_t = 0) { return Root5(r); }
  static std::string to_string(const Root5& x) { return nahmlab::to_string(x); }
  static Root5 parse(std::string_view s, mpfr_prec_t = 0) { return parse_root5(s); }
};

template <>
struct RingTraits<Gauss> {
  static constexpr std::string_view name = "gauss";
  static constexpr bool exact = true;
  static Gauss zero() { return {}; }
  static Gauss one() { return Gauss(Rational(1)); }
  static bool is_zero(const Gauss& x) { return x.is_zero(); }
  static Gauss from_rational(const Rational& r, mpfr_prec_t = 0) { return Gauss(r); }
  static std::string to_string(const Gauss& x) { return nahmlab::to_string(x); }
  static Gauss parse(std::string_view s, mpfr_prec_t = 0) { return parse_gauss(s); }
};

template <>
struct RingTraits<BigComplex> {
  static constexpr std::string_view name = "complex";
  static constexpr bool exact = false;
  static BigComplex zero() { return {}; }
  static BigComplex one() { return {BigFloat::from_int(1, BigFloat::kMinPrec), BigFloat()}; }
  static bool is_zero(const BigComplex& x) { return x.is_zero(); }
  static BigComplex from_rational(const Rational& r, mpfr_prec_t prec) {
    return BigComplex::from_rational(r, prec < BigFloat::kMinPrec ? 64 : prec);
  }
  static std::string to_string(const BigComplex& x) { return x.to_string(); }
  static BigComplex parse(std::string_view s, mpfr_prec_t prec) { return BigComplex::parse(s, prec); }
};

}  // namespace nahmlab
