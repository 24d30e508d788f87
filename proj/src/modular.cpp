#include "nahmlab/modular.hpp"

#include <bit>

#include "nahmlab/nahm.hpp"
#include "nahmlab/products.hpp"
#include "nahmlab/theta.hpp"

namespace nahmlab {

namespace {

// sigma_p(n) for n < limit
std::vector<mpz_class> divisor_sums(std::int64_t limit, unsigned p) {
  std::vector<mpz_class> s(static_cast<std::size_t>(std::max<std::int64_t>(limit, 1)), 0);
  for (std::int64_t d = 1; d < limit; ++d) {
    mpz_class dp;
    mpz_ui_pow_ui(dp.get_mpz_t(), static_cast<unsigned long>(d), p);
    for (std::int64_t m = d; m < limit; m += d) s[static_cast<std::size_t>(m)] += dp;
  }
  return s;
}

IdentityCheck check_identity(std::string id, const QSeries& lhs, const QSeries& rhs, Exponent depth) {
  IdentityCheck c;
  c.id = std::move(id);
  c.depth = depth;
  auto m = compare(lhs, rhs, depth);
  c.pass = m.equal;
  if (!m.equal) {
    c.mismatch = m.exponent;
    c.lhs_coeff = m.lhs.get_str();
    c.rhs_coeff = m.rhs.get_str();
  }
  return c;
}

Exponent weber_eta_valuation(std::int64_t weber_power, std::int64_t eta_power) {
  // f, f1 start at q^(-1/48); eta at q^(1/24)
  return Exponent(-weber_power, 48) - Exponent(eta_power, 24);
}

}  // namespace

QSeries eisenstein(EisensteinKind which, Exponent depth) {
  std::int64_t limit = depth.ceil();
  unsigned p = 1;
  long c = -24;
  if (which == EisensteinKind::E4) {
    p = 3;
    c = 240;
  } else if (which == EisensteinKind::E6) {
    p = 5;
    c = -504;
  }
  auto sig = divisor_sums(limit, p);
  std::vector<QSeries::Term> terms;
  if (depth > Exponent(0)) terms.push_back({0, Rational(1)});
  for (std::int64_t n = 1; n < limit; ++n) terms.push_back({n, Rational(sig[static_cast<std::size_t>(n)] * c)});
  return QSeries(1, depth, std::move(terms));
}

std::optional<EisensteinKind> parse_eisenstein(std::string_view name) {
  if (name == "E2") return EisensteinKind::E2;
  if (name == "E4") return EisensteinKind::E4;
  if (name == "E6") return EisensteinKind::E6;
  return std::nullopt;
}

QSeries serre(const QSeries& f, const Rational& k) {
  QSeries d = derivative(f);
  if (k == 0) return d;
  if (!f.trunc()) throw TruncationError("Serre derivative of an exact series needs a truncation");
  Exponent v = f.valuation_bound().value_or(Exponent(0));
  QSeries e2 = eisenstein(EisensteinKind::E2, *f.trunc() - v);
  Rational w = k / 12;
  w.canonicalize();
  return d - (e2 * f).scaled(w);
}

QSeries wronskian(const WronskianSpec& spec) {
  const std::size_t l = spec.components.size();
  if (l == 0) throw DomainError("Wronskian of an empty list");
  if (l > 20) throw DomainError("Wronskian size too large");
  // rows[r][c]
  std::vector<std::vector<QSeries>> rows(l);
  rows[0] = spec.components;
  for (std::size_t r = 1; r < l; ++r) {
    rows[r].reserve(l);
    for (std::size_t c = 0; c < l; ++c) {
      if (spec.serre_weight) {
        Rational k = *spec.serre_weight + Rational(2 * static_cast<long>(r - 1));
        rows[r].push_back(serre(rows[r - 1][c], k));
      } else {
        rows[r].push_back(derivative(rows[r - 1][c]));
      }
    }
  }
  // minor over the first popcount(mask) rows and the columns in mask
  std::vector<std::optional<QSeries>> memo(std::size_t(1) << l);
  memo[0] = QSeries::constant(Rational(1));
  for (std::size_t mask = 1; mask < memo.size(); ++mask) {
    const int m = std::popcount(mask);
    QSeries acc = QSeries::zero();
    bool first = true;
    int pos = 0;
    for (std::size_t c = 0; c < l; ++c) {
      if (!(mask & (std::size_t(1) << c))) continue;
      QSeries term = rows[static_cast<std::size_t>(m - 1)][c] * *memo[mask & ~(std::size_t(1) << c)];
      if ((m - 1 + pos) % 2 != 0) term = -term;
      acc = first ? term : acc + term;
      first = false;
      ++pos;
    }
    memo[mask] = std::move(acc);
  }
  return *memo.back();
}

QSeries normalize_leading(const QSeries& s) {
  if (s.empty()) return s;
  Rational c = s.terms().front().coeff;
  Rational inv = 1 / c;
  return s.scaled(inv);
}

WronskianResult wronskian_to_depth(const std::function<std::vector<QSeries>(Exponent)>& components, Exponent depth,
                                   bool normalized) {
  Exponent guess = depth + Exponent(1);
  for (int attempt = 0; attempt < 12; ++attempt) {
    QSeries w = wronskian({components(guess), std::nullopt});
    if (!w.trunc() || *w.trunc() >= depth) {
      WronskianResult r;
      w = w.truncated(depth);
      r.order = vanishing_order(w.trunc() ? w : w.truncated(depth));
      r.identically_zero = w.empty();
      if (!w.empty()) r.leading = w.terms().front().coeff;
      r.value = normalized ? normalize_leading(w) : w;
      return r;
    }
    guess = guess + (depth - *w.trunc()) + Exponent(1);
  }
  throw TruncationError("Wronskian components could not be expanded far enough");
}

const std::array<Rational, 6>& tadpole3_shifts() {
  static const std::array<Rational, 6> lambda = {ratio(-7, 80), ratio(1, 40), ratio(9, 40),
                                                 ratio(17, 80), ratio(-7, 80), ratio(17, 80)};
  return lambda;
}

QSeries tilde_f(int i, Exponent depth) {
  if (i < 1 || i > 6) throw DomainError("tilde F index must be 1..6");
  Exponent lam(tadpole3_shifts()[static_cast<std::size_t>(i - 1)]);
  Exponent d = depth - lam;
  Rational h = ratio(1, 2);
  QSeries f;
  switch (i) {
    case 1: f = chi0({0, 0, 0}, d); break;
    case 2: f = chi0({0, 0, h}, d); break;
    case 3: f = chi0({1, -1, h}, d); break;
    case 4: f = chi0({-1, 1, 0}, d); break;
    case 5: f = tau_shift(chi0({0, 0, 0}, d)); break;
    default: f = tau_shift(chi0({-1, 1, 0}, d)); break;
  }
  return shift(f, lam);
}

QSeries g_basis(int i, Exponent depth) {
  switch (i) {
    case 1: return tilde_f(1, depth) + tilde_f(5, depth);
    case 2: return tilde_f(1, depth) - tilde_f(5, depth);
    case 3: return tilde_f(4, depth) + tilde_f(6, depth);
    case 4: return tilde_f(4, depth) - tilde_f(6, depth);
    case 5: return tilde_f(2, depth);
    case 6: return tilde_f(3, depth);
    default: throw DomainError("g-basis index must be 1..6");
  }
}

nlohmann::json to_json(const IdentityCheck& c) {
  nlohmann::json j{{"id", c.id}, {"depth", c.depth.to_string()}, {"pass", c.pass}};
  if (c.mismatch) {
    j["mismatch"] = {{"exponent", c.mismatch->to_string()}, {"lhs", c.lhs_coeff}, {"rhs", c.rhs_coeff}};
  }
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

nlohmann::json to_json(const EisensteinWronskianReport& r) {
  return {{"id", "wronskian-eisenstein"},
          {"depth", r.depth.to_string()},
          {"order", r.order.order.to_string()},
          {"expected_order", r.expected_order.to_string()},
          {"order_ok", r.order_ok},
          {"identity", to_json(r.identity)},
          {"pass", r.pass}};
}

EisensteinWronskianReport eisenstein_wronskian_check(Exponent depth) {
  if (depth <= Exponent(3, 2)) throw DomainError("the Eisenstein Wronskian check needs depth above the order 3/2");
  EisensteinWronskianReport rep;
  rep.depth = depth;
  rep.expected_order = Exponent(3, 2);
  auto w = wronskian_to_depth(
      [](Exponent d) {
        std::vector<QSeries> v;
        for (int i = 1; i <= 6; ++i) v.push_back(tilde_f(i, d));
        return v;
      },
      depth, true);
  rep.order = w.order;
  rep.order_ok = !w.order.zero_to_truncation && w.order.order == rep.expected_order;

  Exponent inner = depth - Exponent(3, 2);
  QSeries e4 = eisenstein(EisensteinKind::E4, inner);
  QSeries e6 = eisenstein(EisensteinKind::E6, inner);
  QSeries combo = (e4 * e4 * e4).scaled(Rational(70027513)) - (e6 * e6).scaled(Rational(64135033));
  QSeries rhs = (expand("eta^36", depth) * combo).scaled(Rational(1, 5892480));
  rep.identity = check_identity("wronskian-eisenstein", w.value, normalize_leading(rhs), depth);
  rep.pass = rep.order_ok && rep.identity.pass;
  return rep;
}

Rational conjecture_shift(int n) {
  if (n < 2) throw DomainError("conjecture needs rank n >= 2");
  Rational r;
  if (n % 2 == 0) {
    long k = n / 2;
    r = Rational(-k * (1 + 4 * k)) / Rational(48 * (1 + k));
  } else {
    long k = (n + 1) / 2;
    r = Rational(-1 + 6 * k - 8 * k * k) / Rational(96 * k + 48);
  }
  r.canonicalize();
  return r;
}

nlohmann::json to_json(const ConjectureReport& r) {
  nlohmann::json j{{"id", "conjecture"}, {"n", r.n},           {"a", r.a.get_str()},
                   {"depth", r.depth.to_string()}, {"pass", r.pass}, {"rhs", r.rhs_description}};
  if (r.mismatch) j["mismatch"] = {{"exponent", r.mismatch->to_string()}, {"lhs", r.lhs_coeff}, {"rhs", r.rhs_coeff}};
  return j;
}

ConjectureReport conjecture_check(int n, Exponent depth) {
  ConjectureReport rep;
  rep.n = n;
  rep.a = conjecture_shift(n);
  rep.depth = depth;
  Exponent a(rep.a);

  std::int64_t weber_power = n;
  std::int64_t eta_power;
  std::function<std::vector<QSeries>(Exponent)> comps;
  if (n % 2 == 0) {
    long k = n / 2;
    eta_power = k * (2 * k - 1);
    comps = [k](Exponent d) {
      std::vector<QSeries> v;
      for (long i = 1; i <= k; ++i) {
        long t = 2 * i - 1;
        v.push_back(quadratic_theta(Rational(k + 1), ratio(-t, 2), ratio(t * t, 16 * (k + 1)), true, d));
      }
      return v;
    };
    rep.rhs_description = "weber(f)^" + std::to_string(n) + " * W(R_" + std::to_string(n) + ",1..." +
                          std::to_string(k) + ") / eta^" + std::to_string(eta_power);
  } else {
    long k = (n + 1) / 2;
    eta_power = (k - 1) * (2 * k - 1);
    Rational kk = ratio(2 * k + 1, 2);
    comps = [k, kk](Exponent d) {
      std::vector<QSeries> v;
      for (long i = 1; i <= k - 1; ++i) v.push_back(dtheta(Rational(i), kk, d));
      return v;
    };
    rep.rhs_description = "weber(f)^" + std::to_string(n) + " * W(dtheta(1.." + std::to_string(k - 1) + "," +
                          kk.get_str() + ")) / eta^" + std::to_string(eta_power);
  }

  QSeries lhs = shift(chi0(std::vector<Rational>(static_cast<std::size_t>(n), Rational(0)), depth - a), a);

  Exponent vfe = weber_eta_valuation(weber_power, eta_power);
  auto w = wronskian_to_depth(comps, depth - vfe, true);
  if (w.identically_zero) {
    rep.pass = false;
    rep.mismatch = Exponent(0);
    rep.lhs_coeff = "?";
    rep.rhs_coeff = "Wronskian vanishes to truncation";
    return rep;
  }
  Exponent w0 = w.order.order;
  std::string pre = "weber(f)^" + std::to_string(weber_power) + "*eta^-" + std::to_string(eta_power);
  QSeries rhs = (expand(pre, depth - w0) * w.value).truncated(depth);
  auto m = compare(lhs, rhs, depth);
  rep.pass = m.equal;
  if (!m.equal) {
    rep.mismatch = m.exponent;
    rep.lhs_coeff = m.lhs.get_str();
    rep.rhs_coeff = m.rhs.get_str();
  }
  return rep;
}

std::int64_t gamma1_index(std::int64_t level) {
  if (level <= 0) throw DomainError("level must be positive");
  mpz_class num = mpz_class(level) * level, den = 1;
  std::int64_t m = level;
  for (std::int64_t p = 2; p * p <= m; ++p) {
    if (m % p != 0) continue;
    num *= p * p - 1;
    den *= p * p;
    while (m % p == 0) m /= p;
  }
  if (m > 1) {
    num *= m * m - 1;
    den *= m * m;
  }
  mpz_class idx = num / den;
  return idx.get_si();
}

std::int64_t sturm_bound(const Rational& weight, std::int64_t level) {
  if (weight <= 0) throw DomainError("weight must be positive");
  Rational b = weight * Rational(gamma1_index(level)) / 24;
  return 1 + floor(b).get_num().get_si();
}

}  // namespace nahmlab
