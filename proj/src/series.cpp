#include "nahmlab/series.hpp"

#include <sstream>

namespace nahmlab {

template class FracSeries<Rational>;
template class FracSeries<Root5>;
template class FracSeries<Gauss>;
template class FracSeries<BigComplex>;

namespace {

Gauss i_power(std::int64_t n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return Gauss(Rational(1));
    case 1: return Gauss(Rational(0), Rational(1));
    case 2: return Gauss(Rational(-1));
    default: return Gauss(Rational(0), Rational(-1));
  }
}

template <class R>
FracSeries<Gauss> gauss_shift(const FracSeries<R>& a) {
  if (4 % a.denom() != 0) throw DomainError("exact tau_shift needs exponents in (1/4)Z");
  return map_coefficients<Gauss>(a, [&](const R& c, Exponent e) {
    Gauss g;
    if constexpr (std::is_same_v<R, Rational>)
      g = Gauss(c);
    else
      g = c;
    return g * i_power(e.num() * (4 / e.den()));
  });
}

BigComplex phase(Exponent e, mpfr_prec_t prec) {
  // exp(2 pi i e) with e reduced mod 1
  Exponent frac = e - Exponent(e.floor());
  return BigComplex::unit(BigFloat::from_rational(frac.to_rational(), prec));
}

bool is_rational_ring_name(std::string_view n) { return n == "rational"; }

template <class R>
std::string coeff_text(const R& c) {
  return RingTraits<R>::to_string(c);
}

}  // namespace

FracSeries<Gauss> tau_shift_gauss(const FracSeries<Rational>& a) { return gauss_shift(a); }
FracSeries<Gauss> tau_shift_gauss(const FracSeries<Gauss>& a) { return gauss_shift(a); }

FracSeries<BigComplex> tau_shift_complex(const FracSeries<Rational>& a, mpfr_prec_t prec) {
  return map_coefficients<BigComplex>(
      a, [&](const Rational& c, Exponent e) { return phase(e, prec) * BigFloat::from_rational(c, prec); });
}

FracSeries<BigComplex> tau_shift_complex(const FracSeries<BigComplex>& a) {
  return map_coefficients<BigComplex>(a, [&](const BigComplex& c, Exponent e) { return phase(e, c.prec()) * c; });
}

FracSeries<BigComplex> embed_complex(const FracSeries<Gauss>& a, mpfr_prec_t prec) {
  return map_coefficients<BigComplex>(a, [&](const Gauss& c, Exponent) { return BigComplex::from_gauss(c, prec); });
}

FracSeries<BigComplex> embed_complex(const FracSeries<Root5>& a, mpfr_prec_t prec) {
  return map_coefficients<BigComplex>(a, [&](const Root5& c, Exponent) { return BigComplex(to_bigfloat(c, prec)); });
}

ApproxReport compare_approx(const FracSeries<BigComplex>& a, const FracSeries<BigComplex>& b, Exponent depth,
                            const BigFloat& tol) {
  if ((a.trunc() && depth > *a.trunc()) || (b.trunc() && depth > *b.trunc()))
    throw TruncationError("comparison depth " + depth.to_string() + " exceeds a truncation");
  FracSeries<BigComplex> diff = (a - b).truncated(depth);
  ApproxReport r;
  r.max_residual = BigFloat::zero(tol.prec());
  for (const auto& t : diff.terms()) {
    BigFloat m = abs(t.coeff);
    if (r.max_residual < m) r.max_residual = m;
    if (!r.exponent && tol < m) r.exponent = Exponent(t.key, diff.denom());
  }
  r.equal = !r.exponent.has_value();
  return r;
}

template <class R>
std::string to_text(const FracSeries<R>& a) {
  std::ostringstream out;
  const std::string order = a.trunc() ? "O(q^(" + a.trunc()->to_string() + "))" : "";
  if (a.empty()) return a.trunc() ? order : "0";
  const Exponent v(a.terms().front().key, a.denom());
  const bool prefixed = v != Exponent(0);
  if (prefixed) out << "q^(" << v.to_string() << ")*{";
  bool first = true;
  for (const auto& t : a.terms()) {
    Exponent rel = Exponent(t.key, a.denom()) - v;
    std::string c = coeff_text(t.coeff);
    bool neg = false;
    if constexpr (std::is_same_v<R, Rational>) {
      neg = t.coeff < 0;
      if (neg) c = Rational(-t.coeff).get_str();
    } else {
      c = "(" + c + ")";
    }
    if (first)
      out << (neg ? "-" : "");
    else
      out << (neg ? " - " : " + ");
    first = false;
    if (rel == Exponent(0)) {
      out << c;
    } else {
      if (c != "1") out << c << "*";
      out << "q^(" << rel.to_string() << ")";
    }
  }
  if (prefixed) out << "}";
  if (a.trunc()) out << " + " << order;
  return out.str();
}

template <class R>
nlohmann::json to_json(const FracSeries<R>& a) {
  nlohmann::json j;
  j["ring"] = std::string(RingTraits<R>::name);
  j["denom"] = a.denom();
  if (a.trunc())
    j["trunc"] = {a.trunc()->num(), a.trunc()->den()};
  else
    j["trunc"] = nullptr;
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : a.terms()) terms.push_back({t.key, RingTraits<R>::to_string(t.coeff)});
  j["terms"] = std::move(terms);
  return j;
}

template <class R>
FracSeries<R> from_json(const nlohmann::json& j, mpfr_prec_t prec) {
  if (j.contains("ring") && j["ring"].get<std::string>() != RingTraits<R>::name &&
      !is_rational_ring_name(j["ring"].get<std::string>()))
    throw DomainError("series JSON ring mismatch");
  std::int64_t d = j.at("denom").get<std::int64_t>();
  Trunc t;
  if (!j.at("trunc").is_null()) t = Exponent(j["trunc"][0].get<std::int64_t>(), j["trunc"][1].get<std::int64_t>());
  std::vector<typename FracSeries<R>::Term> terms;
  for (const auto& e : j.at("terms"))
    terms.push_back({e[0].get<std::int64_t>(), RingTraits<R>::parse(e[1].get<std::string>(), prec)});
  return FracSeries<R>(d, t, std::move(terms));
}

template std::string to_text(const FracSeries<Rational>&);
template std::string to_text(const FracSeries<Root5>&);
template std::string to_text(const FracSeries<Gauss>&);
template std::string to_text(const FracSeries<BigComplex>&);
template nlohmann::json to_json(const FracSeries<Rational>&);
template nlohmann::json to_json(const FracSeries<Root5>&);
template nlohmann::json to_json(const FracSeries<Gauss>&);
template nlohmann::json to_json(const FracSeries<BigComplex>&);
template FracSeries<Rational> from_json(const nlohmann::json&, mpfr_prec_t);
template FracSeries<Root5> from_json(const nlohmann::json&, mpfr_prec_t);
template FracSeries<Gauss> from_json(const nlohmann::json&, mpfr_prec_t);
template FracSeries<BigComplex> from_json(const nlohmann::json&, mpfr_prec_t);

}  // namespace nahmlab
