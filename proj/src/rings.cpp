#include "nahmlab/rings.hpp"

#include <cctype>
#include <string>
#include <utility>
#include <vector>

#include "nahmlab/error.hpp"

namespace nahmlab {

Root5& Root5::operator*=(const Root5& o) {
  Rational na = a * o.a + 5 * b * o.b;
  Rational nb = a * o.b + b * o.a;
  a = std::move(na);
  b = std::move(nb);
  return *this;
}

Root5& Root5::operator/=(const Root5& o) {
  Rational n = o.norm();
  if (n == 0) throw DomainError("division by zero in Q(sqrt 5)");
  *this *= o.conjugate();
  a /= n;
  b /= n;
  return *this;
}

Gauss& Gauss::operator*=(const Gauss& o) {
  Rational nr = re * o.re - im * o.im;
  Rational ni = re * o.im + im * o.re;
  re = std::move(nr);
  im = std::move(ni);
  return *this;
}

Gauss& Gauss::operator/=(const Gauss& o) {
  Rational n = o.re * o.re + o.im * o.im;
  if (n == 0) throw DomainError("division by zero in Q(i)");
  *this *= o.conjugate();
  re /= n;
  im /= n;
  return *this;
}

// ---- BigFloat ----

BigFloat::BigFloat(mpfr_prec_t prec, int) { mpfr_init2(v_, prec < kMinPrec ? kMinPrec : prec); }

BigFloat::BigFloat() : BigFloat(kMinPrec, 0) { mpfr_set_zero(v_, 1); }

BigFloat::BigFloat(const BigFloat& o) : BigFloat(o.prec(), 0) { mpfr_set(v_, o.v_, MPFR_RNDN); }

BigFloat::BigFloat(BigFloat&& o) noexcept : BigFloat(kMinPrec, 0) {
  mpfr_set_zero(v_, 1);
  mpfr_swap(v_, o.v_);
}

BigFloat& BigFloat::operator=(const BigFloat& o) {
  if (this != &o) {
    mpfr_set_prec(v_, o.prec());
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& o) noexcept {
  mpfr_swap(v_, o.v_);
  return *this;
}

BigFloat::~BigFloat() { mpfr_clear(v_); }

BigFloat BigFloat::zero(mpfr_prec_t prec) {
  BigFloat r(prec, 0);
  mpfr_set_zero(r.v_, 1);
  return r;
}

BigFloat BigFloat::from_int(long v, mpfr_prec_t prec) {
  BigFloat r(prec, 0);
  mpfr_set_si(r.v_, v, MPFR_RNDN);
  return r;
}

BigFloat BigFloat::from_double(double v, mpfr_prec_t prec) {
  BigFloat r(prec, 0);
  mpfr_set_d(r.v_, v, MPFR_RNDN);
  return r;
}

BigFloat BigFloat::from_rational(const Rational& q, mpfr_prec_t prec) {
  BigFloat r(prec, 0);
  mpfr_set_q(r.v_, q.get_mpq_t(), MPFR_RNDN);
  return r;
}

BigFloat BigFloat::from_string(std::string_view s, mpfr_prec_t prec) {
  BigFloat r(prec, 0);
  std::string str(s);
  if (mpfr_set_str(r.v_, str.c_str(), 10, MPFR_RNDN) != 0) {
    // allow rationals such as 1/3
    mpfr_set_q(r.v_, parse_rational(s).get_mpq_t(), MPFR_RNDN);
  }
  return r;
}

BigFloat BigFloat::pi(mpfr_prec_t prec) {
  BigFloat r(prec, 0);
  mpfr_const_pi(r.v_, MPFR_RNDN);
  return r;
}

BigFloat BigFloat::two_pow(long e, mpfr_prec_t prec) {
  BigFloat r(prec, 0);
  mpfr_set_ui_2exp(r.v_, 1, e, MPFR_RNDN);
  return r;
}

BigFloat BigFloat::rounded(mpfr_prec_t prec) const {
  BigFloat r(prec, 0);
  mpfr_set(r.v_, v_, MPFR_RNDN);
  return r;
}

long BigFloat::exponent2() const {
  if (mpfr_zero_p(v_)) return MPFR_EMIN_DEFAULT;
  return mpfr_get_exp(v_);
}

std::string BigFloat::to_string(int digits) const {
  if (digits <= 0) digits = static_cast<int>(prec() * 0.30103) + 1;
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Rg", digits, v_);
  std::string s(buf);
  mpfr_free_str(buf);
  return s;
}

namespace {
mpfr_prec_t pmax(const BigFloat& a, const BigFloat& b) { return a.prec() > b.prec() ? a.prec() : b.prec(); }

template <class Op>
void binop(BigFloat& self, const BigFloat& o, Op op) {
  mpfr_prec_t p = pmax(self, o);
  if (p != self.prec()) mpfr_prec_round(self.raw(), p, MPFR_RNDN);
  op(self.raw(), self.raw(), o.raw(), MPFR_RNDN);
}

template <class Op>
BigFloat unop(const BigFloat& x, Op op) {
  BigFloat r = BigFloat::zero(x.prec());
  op(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}
}  // namespace

BigFloat& BigFloat::operator+=(const BigFloat& o) { binop(*this, o, mpfr_add); return *this; }
BigFloat& BigFloat::operator-=(const BigFloat& o) { binop(*this, o, mpfr_sub); return *this; }
BigFloat& BigFloat::operator*=(const BigFloat& o) { binop(*this, o, mpfr_mul); return *this; }
BigFloat& BigFloat::operator/=(const BigFloat& o) {
  if (o.is_zero()) throw DomainError("division by zero");
  binop(*this, o, mpfr_div);
  return *this;
}

BigFloat BigFloat::operator-() const { return unop(*this, mpfr_neg); }

BigFloat abs(const BigFloat& x) { return unop(x, mpfr_abs); }
BigFloat sqrt(const BigFloat& x) { return unop(x, mpfr_sqrt); }
BigFloat exp(const BigFloat& x) { return unop(x, mpfr_exp); }
BigFloat log(const BigFloat& x) { return unop(x, mpfr_log); }
BigFloat sin(const BigFloat& x) { return unop(x, mpfr_sin); }
BigFloat cos(const BigFloat& x) { return unop(x, mpfr_cos); }

BigFloat atan2(const BigFloat& y, const BigFloat& x) {
  BigFloat r = BigFloat::zero(pmax(x, y));
  mpfr_atan2(r.raw(), y.raw(), x.raw(), MPFR_RNDN);
  return r;
}

BigFloat pow(const BigFloat& x, const BigFloat& y) {
  BigFloat r = BigFloat::zero(pmax(x, y));
  mpfr_pow(r.raw(), x.raw(), y.raw(), MPFR_RNDN);
  return r;
}

BigFloat max(const BigFloat& x, const BigFloat& y) { return x < y ? y : x; }

// ---- BigComplex ----

BigComplex& BigComplex::operator*=(const BigComplex& o) {
  BigFloat nr = re * o.re - im * o.im;
  BigFloat ni = re * o.im + im * o.re;
  re = std::move(nr);
  im = std::move(ni);
  return *this;
}

BigComplex& BigComplex::operator/=(const BigComplex& o) {
  BigFloat n = o.re * o.re + o.im * o.im;
  if (n.is_zero()) throw DomainError("complex division by zero");
  BigFloat nr = (re * o.re + im * o.im) / n;
  BigFloat ni = (im * o.re - re * o.im) / n;
  re = std::move(nr);
  im = std::move(ni);
  return *this;
}

BigComplex operator*(const BigComplex& z, const BigFloat& x) { return {z.re * x, z.im * x}; }

BigComplex BigComplex::unit(const BigFloat& x) {
  BigFloat t = BigFloat::pi(x.prec()) * BigFloat::from_int(2, x.prec()) * x;
  return {cos(t), sin(t)};
}

std::string BigComplex::to_string(int digits) const {
  std::string r = re.to_string(digits);
  std::string i = im.to_string(digits);
  if (!i.empty() && i[0] == '-') return r + i + "*I";
  return r + "+" + i + "*I";
}

BigComplex BigComplex::parse(std::string_view s, mpfr_prec_t prec) {
  // forms: "x", "x+y*I", "x-y*I", "y*I"
  std::string str;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) str.push_back(c);
  if (str.empty()) throw DomainError("empty complex number");
  auto ipos = str.find("*I");
  if (ipos == std::string::npos) {
    if (!str.empty() && (str.back() == 'I' || str.back() == 'i'))
      ipos = str.size() - 1;
    else
      return {BigFloat::from_string(str, prec), BigFloat::zero(prec)};
  }
  std::string head = str.substr(0, ipos);
  // split real and imaginary parts at the last sign not following an exponent marker
  std::size_t split = std::string::npos;
  for (std::size_t k = head.size(); k-- > 1;) {
    if ((head[k] == '+' || head[k] == '-') && head[k - 1] != 'e' && head[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  auto imag_of = [&](std::string t) {
    if (t.empty() || t == "+") return BigFloat::from_int(1, prec);
    if (t == "-") return BigFloat::from_int(-1, prec);
    if (t[0] == '+') t.erase(0, 1);
    return BigFloat::from_string(t, prec);
  };
  if (split == std::string::npos) return {BigFloat::zero(prec), imag_of(head)};
  return {BigFloat::from_string(head.substr(0, split), prec), imag_of(head.substr(split))};
}

BigFloat abs(const BigComplex& z) {
  BigFloat r = BigFloat::zero(z.prec());
  mpfr_hypot(r.raw(), z.re.raw(), z.im.raw(), MPFR_RNDN);
  return r;
}

BigFloat arg(const BigComplex& z) { return atan2(z.im, z.re); }

BigComplex exp(const BigComplex& z) {
  BigFloat m = exp(z.re);
  return {m * cos(z.im), m * sin(z.im)};
}

BigComplex log(const BigComplex& z) {
  if (z.is_zero()) throw DomainError("log of zero");
  return {log(abs(z)), arg(z)};
}

BigComplex sqrt(const BigComplex& z) {
  if (z.is_zero()) return z;
  BigFloat half = BigFloat::from_rational(Rational(1, 2), z.prec());
  return pow(z, half);
}

BigComplex pow(const BigComplex& z, const BigFloat& w) {
  if (z.is_zero()) return z;
  BigComplex l = log(z);
  return exp(BigComplex(l.re * w, l.im * w));
}

BigComplex pow(const BigComplex& z, long n) {
  if (n < 0) return BigComplex::from_rational(Rational(1), z.prec()) / pow(z, -n);
  BigComplex result = BigComplex::from_rational(Rational(1), z.prec());
  BigComplex base = z;
  while (n > 0) {
    if (n & 1) result *= base;
    n >>= 1;
    if (n) base *= base;
  }
  return result;
}

BigFloat to_bigfloat(const Root5& x, mpfr_prec_t prec) {
  return BigFloat::from_rational(x.a, prec) +
         BigFloat::from_rational(x.b, prec) * sqrt(BigFloat::from_int(5, prec));
}

namespace {
std::string signed_part(const Rational& c, const char* unit) {
  std::string s = c.get_str();
  if (s[0] == '-') return s + "*" + unit;
  return "+" + s + "*" + unit;
}

// Splits "a+b*U" into rational parts; U is the unit token.
std::pair<Rational, Rational> parse_pair(std::string_view s, std::string_view unit) {
  std::string str;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) str.push_back(c);
  auto upos = str.find(unit);
  if (upos == std::string::npos) return {parse_rational(str), Rational(0)};
  std::string head = str.substr(0, upos);
  if (!head.empty() && head.back() == '*') head.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t k = head.size(); k-- > 1;)
    if (head[k] == '+' || head[k] == '-') {
      split = k;
      break;
    }
  auto coef = [](std::string t) {
    if (t.empty() || t == "+") return Rational(1);
    if (t == "-") return Rational(-1);
    return parse_rational(t);
  };
  if (split == std::string::npos) return {Rational(0), coef(head)};
  return {parse_rational(head.substr(0, split)), coef(head.substr(split))};
}
}  // namespace

std::string to_string(const Root5& x) {
  if (x.b == 0) return x.a.get_str();
  if (x.a == 0) return x.b.get_str() + "*sqrt5";
  return x.a.get_str() + signed_part(x.b, "sqrt5");
}

std::string to_string(const Gauss& x) {
  if (x.im == 0) return x.re.get_str();
  if (x.re == 0) return x.im.get_str() + "*I";
  return x.re.get_str() + signed_part(x.im, "I");
}

Root5 parse_root5(std::string_view s) {
  auto [a, b] = parse_pair(s, "sqrt5");
  return {a, b};
}

Gauss parse_gauss(std::string_view s) {
  auto [a, b] = parse_pair(s, "I");
  return {a, b};
}

}  // namespace nahmlab
