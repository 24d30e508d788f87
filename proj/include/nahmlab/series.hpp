#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "nahmlab/error.hpp"
#include "nahmlab/exponent.hpp"
#include "nahmlab/kernels.hpp"
#include "nahmlab/rings.hpp"

namespace nahmlab {

// Multiplying a ring element by a rational number.
inline Rational scale(const Rational& c, const Rational& r) { return c * r; }
inline Root5 scale(const Root5& c, const Rational& r) { return {c.a * r, c.b * r}; }
inline Gauss scale(const Gauss& c, const Rational& r) { return {c.re * r, c.im * r}; }
inline BigComplex scale(const BigComplex& c, const Rational& r) {
  return c * BigFloat::from_rational(r, c.prec() < 64 ? 64 : c.prec());
}

// Truncated Laurent series in q. The coefficient of q^(k/D) is stored under
// key k; every coefficient below trunc() is known, and absent keys are zero.
// trunc() == nullopt means the value is exact (a finite sum).
template <class R>
class FracSeries {
 public:
  using Term = kernels::SparseTerm<R>;
  using Traits = RingTraits<R>;

  FracSeries() = default;
  FracSeries(std::int64_t denom, Trunc trunc, std::vector<Term> terms)
      : denom_(denom), trunc_(trunc), terms_(std::move(terms)) {
    if (denom_ <= 0) throw DomainError("series denominator must be positive");
    canonicalize(true);
  }

  static FracSeries zero(Trunc trunc = std::nullopt) { return FracSeries(1, trunc, {}); }
  static FracSeries constant(R c, Trunc trunc = std::nullopt) {
    std::vector<Term> t;
    t.push_back({0, std::move(c)});
    return FracSeries(1, trunc, std::move(t));
  }
  static FracSeries monomial(Exponent e, R c, Trunc trunc = std::nullopt) {
    std::vector<Term> t;
    t.push_back({e.num(), std::move(c)});
    return FracSeries(e.den(), trunc, std::move(t));
  }
  static FracSeries from_map(const std::map<Exponent, R>& coeffs, Trunc trunc = std::nullopt) {
    std::int64_t d = 1;
    for (const auto& [e, c] : coeffs) d = lcm64(d, e.den());
    std::vector<Term> t;
    for (const auto& [e, c] : coeffs) t.push_back({e.num() * (d / e.den()), c});
    return FracSeries(d, trunc, std::move(t));
  }

  std::int64_t denom() const { return denom_; }
  const Trunc& trunc() const { return trunc_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_exact() const { return !trunc_.has_value(); }
  bool empty() const { return terms_.empty(); }
  Exponent exponent_of(const Term& t) const { return Exponent(t.key, denom_); }

  R coefficient(Exponent e) const {
    if (trunc_ && e >= *trunc_) throw TruncationError("coefficient of q^" + e.to_string() + " is beyond truncation");
    if (denom_ % e.den() != 0) return Traits::zero();
    std::int64_t k = e.num() * (denom_ / e.den());
    auto it = std::lower_bound(terms_.begin(), terms_.end(), k, [](const Term& t, std::int64_t v) { return t.key < v; });
    if (it != terms_.end() && it->key == k) return it->coeff;
    return Traits::zero();
  }

  // Lowest exponent with a stored coefficient, or nullopt.
  std::optional<Exponent> valuation() const {
    if (terms_.empty()) return std::nullopt;
    return Exponent(terms_.front().key, denom_);
  }

  // Valuation used in truncation bookkeeping: the first term, else the
  // truncation point (all known coefficients vanish).
  std::optional<Exponent> valuation_bound() const {
    if (!terms_.empty()) return Exponent(terms_.front().key, denom_);
    return trunc_;
  }

  FracSeries with_denom(std::int64_t d) const {
    if (d % denom_ != 0) throw DomainError("denominator must be a multiple of the current one");
    FracSeries r;
    r.denom_ = d;
    r.trunc_ = trunc_;
    r.terms_ = terms_;
    std::int64_t f = d / denom_;
    for (auto& t : r.terms_) t.key *= f;
    return r;
  }

  // Forget everything at or above n.
  FracSeries truncated(Exponent n) const {
    FracSeries r = *this;
    r.trunc_ = min_trunc(trunc_, n);
    r.canonicalize(false);
    return r;
  }

  FracSeries scaled(const R& c) const {
    if (Traits::is_zero(c)) return zero(trunc_);
    FracSeries r = *this;
    for (auto& t : r.terms_) t.coeff = t.coeff * c;
    r.canonicalize(false);
    return r;
  }

  FracSeries scaled(const Rational& c) const
    requires(!std::is_same_v<R, Rational>)
  {
    FracSeries r = *this;
    for (auto& t : r.terms_) t.coeff = scale(t.coeff, c);
    r.canonicalize(false);
    return r;
  }

  FracSeries operator-() const {
    FracSeries r = *this;
    for (auto& t : r.terms_) t.coeff = -t.coeff;
    return r;
  }

  friend FracSeries operator+(const FracSeries& a, const FracSeries& b) { return a.combine(b, false); }
  friend FracSeries operator-(const FracSeries& a, const FracSeries& b) { return a.combine(b, true); }
  friend FracSeries operator*(const FracSeries& a, const FracSeries& b) { return multiply(a, b, 0); }
  FracSeries& operator+=(const FracSeries& b) { return *this = *this + b; }
  FracSeries& operator-=(const FracSeries& b) { return *this = *this - b; }
  FracSeries& operator*=(const FracSeries& b) { return *this = *this * b; }

  // Product with an explicit thread count (0 = OpenMP default).
  static FracSeries multiply(const FracSeries& a, const FracSeries& b, int threads) {
    if ((a.empty() && a.is_exact()) || (b.empty() && b.is_exact())) return zero();
    std::optional<Exponent> va = a.valuation_bound(), vb = b.valuation_bound();
    Trunc t;
    if (a.trunc_) t = min_trunc(t, *a.trunc_ + *vb);
    if (b.trunc_) t = min_trunc(t, *b.trunc_ + *va);
    std::int64_t d = lcm64(a.denom_, b.denom_);
    FracSeries x = a.with_denom(d), y = b.with_denom(d);
    std::int64_t limit = t ? key_limit(*t, d) : kernels::kNoLimit;
    auto out = kernels::convolve<R>(x.terms_, y.terms_, limit, threads);
    FracSeries r;
    r.denom_ = d;
    r.trunc_ = t;
    r.terms_ = std::move(out);
    r.canonicalize(false);
    return r;
  }

  friend bool operator==(const FracSeries& a, const FracSeries& b) {
    if (a.denom_ != b.denom_ || a.trunc_ != b.trunc_ || a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
      if (a.terms_[i].key != b.terms_[i].key || !(a.terms_[i].coeff == b.terms_[i].coeff)) return false;
    return true;
  }

  // Smallest key that is not below the truncation n at denominator d.
  static std::int64_t key_limit(Exponent n, std::int64_t d) { return (n * Exponent(d)).ceil(); }

 private:
  template <class>
  friend class FracSeries;

  FracSeries combine(const FracSeries& b, bool subtract) const {
    std::int64_t d = lcm64(denom_, b.denom_);
    FracSeries x = with_denom(d), y = b.with_denom(d);
    FracSeries r;
    r.denom_ = d;
    r.trunc_ = min_trunc(trunc_, b.trunc_);
    r.terms_.reserve(x.terms_.size() + y.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < x.terms_.size() || j < y.terms_.size()) {
      if (j == y.terms_.size() || (i < x.terms_.size() && x.terms_[i].key < y.terms_[j].key)) {
        r.terms_.push_back(std::move(x.terms_[i++]));
      } else if (i == x.terms_.size() || y.terms_[j].key < x.terms_[i].key) {
        Term t = std::move(y.terms_[j++]);
        if (subtract) t.coeff = -t.coeff;
        r.terms_.push_back(std::move(t));
      } else {
        Term t = std::move(x.terms_[i++]);
        if (subtract)
          t.coeff -= y.terms_[j].coeff;
        else
          t.coeff += y.terms_[j].coeff;
        ++j;
        r.terms_.push_back(std::move(t));
      }
    }
    r.canonicalize(false);
    return r;
  }

  void canonicalize(bool sort) {
    if (sort) {
      std::stable_sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.key < b.key; });
      std::vector<Term> merged;
      merged.reserve(terms_.size());
      for (auto& t : terms_) {
        if (!merged.empty() && merged.back().key == t.key)
          merged.back().coeff += t.coeff;
        else
          merged.push_back(std::move(t));
      }
      terms_ = std::move(merged);
    }
    if (trunc_) {
      std::int64_t lim = key_limit(*trunc_, denom_);
      while (!terms_.empty() && terms_.back().key >= lim) terms_.pop_back();
    }
    std::erase_if(terms_, [](const Term& t) { return Traits::is_zero(t.coeff); });
    std::int64_t g = denom_;
    for (const auto& t : terms_) {
      g = gcd64(g, t.key);
      if (g == 1) break;
    }
    if (g > 1) {
      denom_ /= g;
      for (auto& t : terms_) t.key /= g;
    }
  }

  std::int64_t denom_ = 1;
  Trunc trunc_;
  std::vector<Term> terms_;
};

using QSeries = FracSeries<Rational>;

// ---- operations ----

// Multiplicative inverse. Exact non-monomial input needs an explicit depth.
template <class R>
FracSeries<R> invert(const FracSeries<R>& a, std::optional<Exponent> depth = std::nullopt) {
  using Term = typename FracSeries<R>::Term;
  using Traits = RingTraits<R>;
  if (a.empty()) throw DomainError("cannot invert a series with no known nonzero coefficient");
  const auto& ts = a.terms();
  const std::int64_t d = a.denom();
  const Exponent v(ts.front().key, d);
  if (a.is_exact() && ts.size() == 1 && !depth) return FracSeries<R>::monomial(-v, Traits::one() / ts.front().coeff);
  Trunc t;
  if (a.trunc()) t = *a.trunc() - v - v;
  if (depth) t = min_trunc(t, *depth);
  if (!t) throw TruncationError("inverse of an exact non-monomial series needs a depth");
  // relative lattice: keys of a minus its leading key, stride g
  std::int64_t g = 0;
  for (const auto& x : ts) g = gcd64(g, x.key - ts.front().key);
  if (g == 0) g = 1;
  const std::int64_t lead = ts.front().key;
  // result keys: -lead + m*g for m = 0..M-1 with (-lead + m*g)/d < t
  const std::int64_t lim = FracSeries<R>::key_limit(*t, d);
  if (lim <= -lead) return FracSeries<R>::zero(t);
  const std::int64_t count = (lim + lead - 1) / g + 1;
  const R inv0 = Traits::one() / ts.front().coeff;
  std::vector<std::pair<std::int64_t, const R*>> rel;  // (offset in strides, coefficient)
  for (std::size_t i = 1; i < ts.size(); ++i) rel.emplace_back((ts[i].key - lead) / g, &ts[i].coeff);
  std::vector<R> b(static_cast<std::size_t>(count), Traits::zero());
  b[0] = inv0;
  for (std::int64_t m = 1; m < count; ++m) {
    R acc = Traits::zero();
    for (const auto& [off, c] : rel) {
      if (off > m) break;
      acc += (*c) * b[static_cast<std::size_t>(m - off)];
    }
    b[static_cast<std::size_t>(m)] = -(acc * inv0);
  }
  std::vector<Term> out;
  for (std::int64_t m = 0; m < count; ++m)
    if (!Traits::is_zero(b[static_cast<std::size_t>(m)])) out.push_back({-lead + m * g, std::move(b[static_cast<std::size_t>(m)])});
  return FracSeries<R>(d, t, std::move(out));
}

template <class R>
FracSeries<R> divide(const FracSeries<R>& a, const FracSeries<R>& b, std::optional<Exponent> depth = std::nullopt) {
  if (!depth && b.is_exact() && b.size() > 1) {
    // size the inverse so the quotient keeps the numerator's relative precision
    if (!a.trunc()) throw TruncationError("division of exact series by an exact non-monomial needs a depth");
    if (b.empty()) throw DomainError("division by zero series");
    Exponent vb = *b.valuation();
    Exponent va = *a.valuation_bound();
    return a * invert(b, *a.trunc() - vb - va);
  }
  return a * invert(b, depth);
}

template <class R>
FracSeries<R> pow(const FracSeries<R>& a, std::int64_t n, std::optional<Exponent> depth = std::nullopt) {
  if (n < 0) return invert(pow(a, -n), depth);
  FracSeries<R> result = FracSeries<R>::constant(RingTraits<R>::one());
  FracSeries<R> base = a;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n) base = base * base;
  }
  if (depth) return result.truncated(*depth);
  return result;
}

template <class R>
FracSeries<R> shift(const FracSeries<R>& a, Exponent e) {
  std::int64_t d = lcm64(a.denom(), e.den());
  FracSeries<R> x = a.with_denom(d);
  std::int64_t k = e.num() * (d / e.den());
  std::vector<typename FracSeries<R>::Term> out = x.terms();
  for (auto& t : out) t.key += k;
  return FracSeries<R>(d, add_trunc(a.trunc(), e), std::move(out));
}

// Replace q by q^m.
template <class R>
FracSeries<R> substitute_power(const FracSeries<R>& a, Exponent m) {
  if (m <= Exponent(0)) throw DomainError("substitute_power needs a positive exponent");
  std::vector<typename FracSeries<R>::Term> out = a.terms();
  for (auto& t : out) t.key *= m.num();
  Trunc t;
  if (a.trunc()) t = *a.trunc() * m;
  return FracSeries<R>(a.denom() * m.den(), t, std::move(out));
}

// Terms with exponent = r mod m, re-indexed by e -> (e - r)/m.
template <class R>
FracSeries<R> dissect(const FracSeries<R>& a, std::int64_t m, std::int64_t r) {
  if (m <= 0) throw DomainError("dissection modulus must be positive");
  if (a.denom() != 1) throw DomainError("dissect needs integer exponents");
  std::vector<typename FracSeries<R>::Term> out;
  for (const auto& t : a.terms()) {
    std::int64_t e = t.key - r;
    if (floor_div(e, m) * m == e) out.push_back({e / m, t.coeff});
  }
  Trunc tr;
  if (a.trunc()) tr = (*a.trunc() - Exponent(r)) / Exponent(m);
  return FracSeries<R>(1, tr, std::move(out));
}

// Coefficient of q^e multiplied by exp(2 pi i e); stays in the same ring,
// so every exponent must lie in (1/2)Z.
template <class R>
FracSeries<R> tau_shift(const FracSeries<R>& a) {
  if (2 % a.denom() != 0) throw DomainError("tau_shift in this ring needs exponents in (1/2)Z");
  std::vector<typename FracSeries<R>::Term> out = a.terms();
  if (a.denom() == 2)
    for (auto& t : out)
      if (t.key % 2 != 0) t.coeff = -t.coeff;
  return FracSeries<R>(a.denom(), a.trunc(), std::move(out));
}

template <class To, class From, class F>
FracSeries<To> map_coefficients(const FracSeries<From>& a, F f) {
  std::vector<typename FracSeries<To>::Term> out;
  out.reserve(a.size());
  for (const auto& t : a.terms()) out.push_back({t.key, f(t.coeff, Exponent(t.key, a.denom()))});
  return FracSeries<To>(a.denom(), a.trunc(), std::move(out));
}

// Exponents in (1/4)Z: exact Gaussian phases.
FracSeries<Gauss> tau_shift_gauss(const FracSeries<Rational>& a);
FracSeries<Gauss> tau_shift_gauss(const FracSeries<Gauss>& a);
FracSeries<BigComplex> tau_shift_complex(const FracSeries<Rational>& a, mpfr_prec_t prec);
FracSeries<BigComplex> tau_shift_complex(const FracSeries<BigComplex>& a);

template <class To>
FracSeries<To> embed(const FracSeries<Rational>& a, mpfr_prec_t prec = 0) {
  return map_coefficients<To>(a, [prec](const Rational& c, Exponent) { return RingTraits<To>::from_rational(c, prec); });
}

FracSeries<BigComplex> embed_complex(const FracSeries<Gauss>& a, mpfr_prec_t prec);
FracSeries<BigComplex> embed_complex(const FracSeries<Root5>& a, mpfr_prec_t prec);

// Ramanujan derivative q d/dq.
template <class R>
FracSeries<R> derivative(const FracSeries<R>& a) {
  return map_coefficients<R>(a, [](const R& c, Exponent e) { return scale(c, e.to_rational()); });
}

template <class R>
struct LeadingTerm {
  Exponent exponent;
  R coeff;
};

// nullopt when every known coefficient vanishes.
template <class R>
std::optional<LeadingTerm<R>> leading_term(const FracSeries<R>& a) {
  if (a.empty()) return std::nullopt;
  return LeadingTerm<R>{Exponent(a.terms().front().key, a.denom()), a.terms().front().coeff};
}

struct VanishingOrder {
  Exponent order;
  // true when no nonzero coefficient is known; order is then only a lower bound
  bool zero_to_truncation = false;
};

template <class R>
VanishingOrder vanishing_order(const FracSeries<R>& a) {
  if (!a.empty()) return {Exponent(a.terms().front().key, a.denom()), false};
  if (!a.trunc()) throw DomainError("vanishing order of the exact zero series");
  return {*a.trunc(), true};
}

template <class R>
struct MatchReport {
  bool equal = true;
  Exponent depth;
  std::optional<Exponent> exponent;  // first mismatch
  R lhs{};
  R rhs{};
};

// Coefficientwise comparison of all exponents below depth.
template <class R>
MatchReport<R> compare(const FracSeries<R>& a, const FracSeries<R>& b, Exponent depth) {
  if ((a.trunc() && depth > *a.trunc()) || (b.trunc() && depth > *b.trunc()))
    throw TruncationError("comparison depth " + depth.to_string() + " exceeds a truncation");
  FracSeries<R> diff = (a - b).truncated(depth);
  MatchReport<R> r;
  r.depth = depth;
  if (diff.empty()) return r;
  Exponent e(diff.terms().front().key, diff.denom());
  r.equal = false;
  r.exponent = e;
  r.lhs = a.coefficient(e);
  r.rhs = b.coefficient(e);
  return r;
}

struct ApproxReport {
  bool equal = true;
  BigFloat max_residual;
  std::optional<Exponent> exponent;  // first coefficient beyond tolerance
};

ApproxReport compare_approx(const FracSeries<BigComplex>& a, const FracSeries<BigComplex>& b, Exponent depth,
                            const BigFloat& tol);

template <class R>
std::string to_text(const FracSeries<R>& a);
template <class R>
nlohmann::json to_json(const FracSeries<R>& a);
template <class R>
FracSeries<R> from_json(const nlohmann::json& j, mpfr_prec_t prec = 0);

extern template class FracSeries<Rational>;
extern template class FracSeries<Root5>;
extern template class FracSeries<Gauss>;
extern template class FracSeries<BigComplex>;

}  // namespace nahmlab
