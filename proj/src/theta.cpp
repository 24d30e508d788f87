#include "nahmlab/theta.hpp"

#include <functional>
#include <map>

#include <omp.h>

#include "nahmlab/kernels.hpp"
#include "nahmlab/products.hpp"

namespace nahmlab {

namespace {

// Calls f(n, e) for every integer n with e = a n^2 + b n + c < depth (a > 0).
// The quadratic is convex, so walking out from its minimum in both
// directions visits exactly these n.
void for_each_below(const Rational& a, const Rational& b, const Rational& c, Exponent depth,
                    const std::function<void(std::int64_t, const Rational&)>& f) {
  if (a <= 0) throw DomainError("quadratic exponent needs a positive leading coefficient");
  const Rational limit = depth.to_rational();
  Rational centre = -b / (2 * a);
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), centre.get_num_mpz_t(), centre.get_den_mpz_t());
  const std::int64_t n0 = fl.get_si();
  auto value = [&](std::int64_t n) { return Rational(a * n * n + b * n + c); };
  for (std::int64_t n = n0;; --n) {
    Rational e = value(n);
    if (e >= limit) break;
    f(n, e);
  }
  for (std::int64_t n = n0 + 1;; ++n) {
    Rational e = value(n);
    if (e >= limit) break;
    f(n, e);
  }
}

QSeries from_coefficients(const std::map<Exponent, Rational>& m, Exponent depth) {
  return QSeries::from_map(m, depth);
}

void accumulate(std::map<Exponent, Rational>& m, const Rational& e, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = m.try_emplace(Exponent(e), c);
  if (!inserted) it->second += c;
}

std::string mismatch_text(const MatchReport<Rational>& r) {
  return "q^(" + r.exponent->to_string() + "): " + r.lhs.get_str() + " vs " + r.rhs.get_str();
}

std::string mismatch_text(const MatchReport<Gauss>& r) {
  return "q^(" + r.exponent->to_string() + "): " + to_string(r.lhs) + " vs " + to_string(r.rhs);
}

}  // namespace

QSeries partial_theta(const PartialThetaSpec& spec, Exponent depth) {
  if (spec.k <= 0) throw DomainError("partial theta needs k > 0");
  // (2kn + j)^2 / (4k) = k n^2 + j n + j^2/(4k)
  const Rational& k = spec.k;
  const Rational& j = spec.j;
  std::map<Exponent, Rational> m;
  for_each_below(k, j, Rational(j * j / (4 * k)), depth, [&](std::int64_t n, const Rational& e) {
    Rational c = 2 * k * n + j;
    if (spec.alternating && (n % 2 != 0)) c = -c;
    accumulate(m, e, c);
  });
  return from_coefficients(m, depth);
}

QSeries rogers_sum(std::int64_t a, std::int64_t b, std::int64_t m, std::int64_t s, Exponent depth) {
  if (a <= 0 || m < 0 || s < 0) throw DomainError("rogers sum needs a > 0, m >= 0, s >= 0");
  if (a + b < 0) throw DomainError("rogers sum exponents must be nonnegative");
  const std::int64_t width = std::max<std::int64_t>(depth.ceil(), 0);
  std::vector<mpz_class> acc(static_cast<std::size_t>(width));
  std::vector<mpz_class> inv(static_cast<std::size_t>(width));  // 1/(q;q)_len
  if (width > 0) inv[0] = 1;
  std::int64_t len = 0;
  for (std::int64_t n = 0;; ++n) {
    const std::int64_t e = a * n * n + b * n;
    if (e >= width) break;
    const std::int64_t target = m * n + s;
    for (; len < target; ++len)
      if (len + 1 < width) kernels::div_binomial(inv, len + 1, -1);
    for (std::int64_t i = 0; i + e < width; ++i) acc[static_cast<std::size_t>(i + e)] += inv[static_cast<std::size_t>(i)];
  }
  std::vector<QSeries::Term> terms;
  for (std::int64_t i = 0; i < width; ++i)
    if (acc[static_cast<std::size_t>(i)] != 0) terms.push_back({i, Rational(acc[static_cast<std::size_t>(i)])});
  return QSeries(1, depth, std::move(terms));
}

QSeries theta_residue_class(std::int64_t a, std::int64_t m, Exponent depth) {
  if (m <= 0 || a < 0 || a >= m) throw DomainError("residue class needs 0 <= a < m");
  // n = m t + a
  std::map<Exponent, Rational> out;
  for_each_below(Rational(m * m), Rational(2 * m * a), Rational(a * a), depth,
                 [&](std::int64_t t, const Rational& e) { accumulate(out, e, Rational(m * t + a)); });
  return from_coefficients(out, depth);
}

QSeries linear_theta(const Rational& alpha, const Rational& beta, const Rational& a, const Rational& b,
                     Exponent depth) {
  std::map<Exponent, Rational> out;
  for_each_below(a, b, Rational(0), depth,
                 [&](std::int64_t n, const Rational& e) { accumulate(out, e, Rational(alpha * n + beta)); });
  return from_coefficients(out, depth);
}

QSeries quadratic_theta(const Rational& a, const Rational& b, const Rational& c, bool alternating, Exponent depth) {
  std::map<Exponent, Rational> out;
  for_each_below(a, b, c, depth, [&](std::int64_t n, const Rational& e) {
    accumulate(out, e, Rational(alternating && (n % 2 != 0) ? -1 : 1));
  });
  return from_coefficients(out, depth);
}

QSeries theta2_sum(Exponent depth) {
  std::map<Exponent, Rational> out;
  // (n + 1/2)^2
  for_each_below(Rational(1), Rational(1), Rational(1, 4), depth,
                 [&](std::int64_t, const Rational& e) { accumulate(out, e, Rational(1)); });
  return from_coefficients(out, depth);
}

QSeries theta3_sum(Exponent depth) {
  std::map<Exponent, Rational> out;
  for_each_below(Rational(1), Rational(0), Rational(0), depth,
                 [&](std::int64_t, const Rational& e) { accumulate(out, e, Rational(1)); });
  return from_coefficients(out, depth);
}

FracSeries<Gauss> character_theta(int which, Exponent depth) {
  if (which != 0 && which != 1) throw DomainError("character index must be 0 or 1");
  const Rational i_part = which == 0 ? Rational(1) : Rational(-1);
  std::vector<FracSeries<Gauss>::Term> terms;
  std::map<std::int64_t, Gauss> acc;
  for_each_below(Rational(1), Rational(0), Rational(0), depth, [&](std::int64_t n, const Rational& e) {
    std::int64_t r = ((n % 5) + 5) % 5;
    Gauss psi;
    switch (r) {
      case 1: psi = Gauss(Rational(1)); break;
      case 4: psi = Gauss(Rational(-1)); break;
      case 2: psi = Gauss{Rational(0), i_part}; break;
      case 3: psi = Gauss{Rational(0), Rational(-i_part)}; break;
      default: return;
    }
    acc[Exponent(e).num()] += psi * Gauss(Rational(n));
  });
  for (auto& [k, c] : acc) terms.push_back({k, c});
  return FracSeries<Gauss>(1, depth, std::move(terms));
}

QSeries minimal_model_char(int r, int s, Exponent depth) {
  if (r < 1 || r > 2 || s < 1 || s > 2) throw DomainError("(3,5) characters need r, s in {1, 2}");
  const Exponent inner = depth + Exponent(1, 24);
  std::map<Exponent, Rational> num;
  // (30n + c)^2 / 60 = 15 n^2 + c n + c^2/60
  for (int sg : {1, -1}) {
    const std::int64_t c = 5 * r - 3 * s * sg;
    for_each_below(Rational(15), Rational(c), ratio(c * c, 60), inner,
                   [&](std::int64_t, const Rational& e) { accumulate(num, e, Rational(sg)); });
  }
  QSeries numerator = QSeries::from_map(num, inner);
  QSeries inv_eta = expand("eta^-1", depth);
  return (numerator * inv_eta).truncated(depth);
}

QSeries z_char(int i, Exponent depth) {
  struct Row {
    Exponent prefactor;
    std::int64_t a, b, m, s;
  };
  static const Row rows[] = {
      {Exponent(1, 40), 1, 1, 2, 0},
      {Exponent(31, 40), 1, 2, 2, 1},
      {Exponent(9, 40), 1, 1, 2, 1},
      {Exponent(-1, 40), 1, 0, 2, 0},
  };
  if (i < 1 || i > 4) throw DomainError("Z index must be 1..4");
  const Row& row = rows[i - 1];
  return shift(rogers_sum(row.a, row.b, row.m, row.s, depth - row.prefactor), row.prefactor);
}

QSeries w_char(int i, Exponent depth) {
  if (i == 1) return expand("theta3/eta", depth);
  if (i == 2) return expand("theta2/eta", depth);
  throw DomainError("W index must be 1 or 2");
}

nlohmann::json to_json(const RelationResult& r) {
  nlohmann::json j{{"relation-id", r.id},
                   {"params", r.params},
                   {"depth", r.depth.to_string()},
                   {"status", r.pass ? "pass" : "fail"},
                   {"ring", r.ring}};
  if (r.mismatch) j["mismatch"] = *r.mismatch;
  return j;
}

std::vector<RelationResult> check_theta_relations(const Rational& k, Exponent depth, mpfr_prec_t prec) {
  if (k <= 0) throw DomainError("k must be positive");
  if (Rational(2 * k).get_den() != 1) throw DomainError("k must lie in (1/2)N");
  using Task = std::function<RelationResult()>;
  std::vector<Task> tasks;

  auto th = [depth](const Rational& j, const Rational& kk) { return dtheta(j, kk, depth); };
  auto g = [depth](const Rational& j, const Rational& kk) { return dg(j, kk, depth); };
  auto params = [&k](const Rational& j) { return "j=" + j.get_str() + ",k=" + k.get_str(); };

  auto exact = [depth](std::string id, std::string p, QSeries lhs, QSeries rhs) {
    RelationResult r{std::move(id), std::move(p), depth, true, "rational", std::nullopt};
    auto m = compare(lhs, rhs, depth);
    r.pass = m.equal;
    if (!m.equal) r.mismatch = mismatch_text(m);
    return r;
  };

  tasks.push_back([=] { return exact("vanish-0", params(Rational(0)), th(Rational(0), k), QSeries::zero(depth)); });
  tasks.push_back([=] { return exact("vanish-k", params(k), th(k, k), QSeries::zero(depth)); });

  const bool t_laws = Rational(k - Rational(1, 2)).get_den() == 1;
  const std::int64_t steps = Rational(4 * k).get_num().get_si();
  for (std::int64_t h = 0; h <= steps; ++h) {
    const Rational j = ratio(h, 2);
    const Rational jj = Rational(2 * k - j);
    tasks.push_back([=] { return exact("symmetry-theta", params(j), th(j, k), -th(jj, k)); });
    tasks.push_back([=] { return exact("symmetry-g", params(j), g(j, k), g(jj, k)); });
    tasks.push_back([=] {
      QSeries a = th(2 * j, 4 * k), b = th(2 * j + 4 * k, 4 * k);
      return exact("dissection-theta", params(j), th(j, k), (a + b).scaled(Rational(1, 2)));
    });
    tasks.push_back([=] {
      QSeries a = th(2 * j, 4 * k), b = th(2 * j + 4 * k, 4 * k);
      return exact("dissection-g", params(j), g(j, k), (a - b).scaled(Rational(1, 2)));
    });
    if (!t_laws || h == 0) continue;
    // Integer j swaps theta and g under tau -> tau+1; half-integer j keeps each.
    const bool swaps = j.get_den() == 1;
    const Rational phase = j * j / (4 * k);  // tau+1 multiplies by exp(2 pi i phase)
    for (int twice = 0; twice < 2; ++twice) {
      for (int which = 0; which < 2; ++which) {
        std::string id = std::string(twice ? "t2-" : "t-") + (which == 0 ? "theta" : "g");
        tasks.push_back([=]() -> RelationResult {
          QSeries src = which == 0 ? th(j, k) : g(j, k);
          QSeries dst = (twice || !swaps) ? src : (which == 0 ? g(j, k) : th(j, k));
          Rational ph = twice ? Rational(2 * phase) : phase;
          Rational frac = ph - floor(ph);
          RelationResult r{id, params(j), depth, true, "gauss", std::nullopt};
          const Rational quarter = 4 * frac;
          if (quarter.get_den() == 1 && 4 % src.denom() == 0) {
            FracSeries<Gauss> lhs = tau_shift_gauss(src);
            if (twice) lhs = tau_shift_gauss(lhs);
            Gauss unit(Rational(1));
            for (long t = 0; t < quarter.get_num().get_si(); ++t) unit = unit * Gauss{Rational(0), Rational(1)};
            FracSeries<Gauss> rhs = embed<Gauss>(dst).scaled(unit);
            auto m = compare(lhs, rhs, depth);
            r.pass = m.equal;
            if (!m.equal) r.mismatch = mismatch_text(m);
            return r;
          }
          r.ring = "complex";
          FracSeries<BigComplex> lhs = tau_shift_complex(src, prec);
          if (twice) lhs = tau_shift_complex(lhs);
          BigComplex unit = BigComplex::unit(BigFloat::from_rational(frac, prec));
          FracSeries<BigComplex> rhs = embed<BigComplex>(dst, prec).scaled(unit);
          BigFloat tol = BigFloat::two_pow(-static_cast<long>(prec) + 24, prec);
          auto rep = compare_approx(lhs, rhs, depth, tol);
          r.pass = rep.equal;
          if (!rep.equal) r.mismatch = "residual " + rep.max_residual.to_string(6);
          return r;
        });
      }
    }
  }

  std::vector<RelationResult> out(tasks.size());
  std::vector<std::string> errors(tasks.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    try {
      out[i] = tasks[i]();
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (std::size_t i = 0; i < tasks.size(); ++i)
    if (!errors[i].empty()) throw Error("theta relation failed to evaluate: " + errors[i]);
  return out;
}

}  // namespace nahmlab
