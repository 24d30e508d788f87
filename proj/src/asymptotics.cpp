#include "nahmlab/asymptotics.hpp"

#include <random>

namespace nahmlab {

namespace {

BigFloat lit(long v, mpfr_prec_t p) { return BigFloat::from_int(v, p); }

std::vector<BigFloat> tba_residuals(const Matrix& A, const std::vector<BigFloat>& Q, mpfr_prec_t p) {
  const std::size_t r = Q.size();
  std::vector<BigFloat> logs;
  for (const auto& q : Q) logs.push_back(log(q));
  std::vector<BigFloat> out;
  for (std::size_t i = 0; i < r; ++i) {
    BigFloat s = BigFloat::zero(p);
    for (std::size_t j = 0; j < r; ++j) s += BigFloat::from_rational(A(i, j), p) * logs[j];
    out.push_back(abs(lit(1, p) - Q[i] - exp(s)));
  }
  return out;
}

Root5 root5_pow(const Root5& x, long n) {
  Root5 r(Rational(1));
  Root5 base = n < 0 ? Root5(Rational(1)) / x : x;
  for (long k = 0; k < (n < 0 ? -n : n); ++k) r *= base;
  return r;
}

}  // namespace

nlohmann::json to_json(const TbaSolution& s) {
  nlohmann::json q = nlohmann::json::array(), res = nlohmann::json::array(), ex = nlohmann::json::array();
  for (const auto& x : s.Q) q.push_back(x.to_string(40));
  for (const auto& x : s.residuals) res.push_back(x.to_string(6));
  for (const auto& e : s.exact) {
    if (e)
      ex.push_back({{"a", e->a.get_str()}, {"b", e->b.get_str()}});
    else
      ex.push_back(nullptr);
  }
  return {{"Q", q}, {"residuals", res}, {"iterations", s.iterations}, {"exact", ex}};
}

TbaSolution solve_tba(const Matrix& A, const TbaOptions& opt) {
  if (!A.is_symmetric() || !is_positive_definite(A)) throw DomainError("TBA needs a symmetric positive definite matrix");
  const std::size_t r = A.rows();
  const mpfr_prec_t p = opt.prec;
  const mpfr_prec_t wp = p + 32;
  BigFloat tol = opt.tol ? *opt.tol : BigFloat::two_pow(-static_cast<long>(p) + 16, p);
  Matrix inv = inverse(A);
  std::vector<BigFloat> Q;
  if (opt.start.empty()) {
    Q.assign(r, BigFloat::from_rational(Rational(1, 2), wp));
  } else {
    if (opt.start.size() != r) throw DomainError("TBA start vector has the wrong length");
    for (const auto& s : opt.start) Q.push_back(s.rounded(wp));
  }
  const BigFloat one = lit(1, wp), half = BigFloat::from_rational(Rational(1, 2), wp);
  const BigFloat eps = BigFloat::two_pow(-static_cast<long>(wp) / 2, wp);
  TbaSolution sol;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    std::vector<BigFloat> l1;
    for (const auto& q : Q) l1.push_back(log(one - q));
    std::vector<BigFloat> next;
    for (std::size_t i = 0; i < r; ++i) {
      BigFloat s = BigFloat::zero(wp);
      for (std::size_t j = 0; j < r; ++j) s += BigFloat::from_rational(inv(i, j), wp) * l1[j];
      BigFloat q = half * (Q[i] + exp(s));
      if (q <= BigFloat::zero(wp)) q = eps;
      if (q >= one) q = one - eps;
      next.push_back(std::move(q));
    }
    Q = std::move(next);
    if (it % 8 == 0 || it == opt.max_iterations) {
      auto res = tba_residuals(A, Q, wp);
      BigFloat worst = BigFloat::zero(p);
      for (const auto& x : res) worst = max(worst, x);
      if (worst < tol) {
        sol.iterations = it;
        for (auto& q : Q) sol.Q.push_back(q.rounded(p));
        for (auto& x : res) sol.residuals.push_back(x.rounded(p));
        BigFloat match = BigFloat::two_pow(-static_cast<long>(p) / 2, p);
        for (const auto& q : sol.Q) sol.exact.push_back(recognize_root5(q, match));
        return sol;
      }
      if (it == opt.max_iterations)
        throw ConvergenceError("TBA iteration did not converge; last residual " + worst.to_string(6));
    }
  }
  throw ConvergenceError("TBA iteration did not converge");
}

std::vector<Root5> tba_exact_residuals(const Matrix& A, const std::vector<Root5>& Q) {
  const std::size_t r = Q.size();
  if (A.rows() != r) throw DomainError("matrix and point sizes differ");
  std::vector<Root5> out;
  for (std::size_t i = 0; i < r; ++i) {
    Root5 prod(Rational(1));
    for (std::size_t j = 0; j < r; ++j) {
      if (A(i, j).get_den() != 1) throw DomainError("exact TBA check needs an integer matrix");
      prod *= root5_pow(Q[j], A(i, j).get_num().get_si());
    }
    out.push_back(Root5(Rational(1)) - Q[i] - prod);
  }
  return out;
}

std::optional<Root5> recognize_root5(const BigFloat& x, const BigFloat& tol, int max_den, int max_num) {
  const mpfr_prec_t p = x.prec();
  const BigFloat r5 = sqrt(lit(5, p));
  for (int d = 1; d <= max_den; ++d) {
    for (int m = 0; m <= max_num; ++m) {
      for (int sgn : {1, -1}) {
        if (m == 0 && sgn < 0) continue;
        Rational b(sgn * m, d);
        b.canonicalize();
        BigFloat a_real = (x - BigFloat::from_rational(b, p) * r5) * lit(d, p);
        BigFloat rounded = BigFloat::zero(p);
        mpfr_round(rounded.raw(), a_real.raw());
        long an = mpfr_get_si(rounded.raw(), MPFR_RNDN);
        Rational a(an, d);
        a.canonicalize();
        BigFloat back = BigFloat::from_rational(a, p) + BigFloat::from_rational(b, p) * r5;
        if (abs(back - x) < tol) return Root5(a, b);
      }
    }
  }
  return std::nullopt;
}

UniquenessReport tba_uniqueness(const Matrix& A, int starts, std::uint64_t seed, const BigFloat& agree,
                                mpfr_prec_t prec) {
  TbaOptions base;
  base.prec = prec;
  TbaSolution ref = solve_tba(A, base);
  const std::size_t r = A.rows();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.001, 0.999);
  std::vector<std::vector<double>> inits(static_cast<std::size_t>(starts));
  for (auto& v : inits)
    for (std::size_t i = 0; i < r; ++i) v.push_back(unif(rng));
  std::vector<BigFloat> spread(inits.size(), BigFloat::zero(prec));
  std::vector<std::string> errors(inits.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t s = 0; s < inits.size(); ++s) {
    try {
      TbaOptions o = base;
      for (double x : inits[s]) o.start.push_back(BigFloat::from_double(x, prec));
      TbaSolution sol = solve_tba(A, o);
      for (std::size_t i = 0; i < r; ++i) spread[s] = max(spread[s], abs(sol.Q[i] - ref.Q[i]));
    } catch (const std::exception& e) {
      errors[s] = e.what();
    }
  }
  UniquenessReport rep;
  rep.starts = starts;
  rep.spread = BigFloat::zero(prec);
  bool failed = false;
  for (std::size_t s = 0; s < inits.size(); ++s) {
    if (!errors[s].empty()) failed = true;
    rep.spread = max(rep.spread, spread[s]);
  }
  rep.unique = !failed && rep.spread < agree;
  return rep;
}

Root5 c_formula(const std::vector<Rational>& B) {
  if (B.size() != 3) throw DomainError("C(B) needs three entries");
  const Rational &b1 = B[0], &b2 = B[1], &b3 = B[2];
  // each monomial carries (rational part, coefficient of 1/sqrt5)
  struct Term {
    Rational mono;
    Rational r, s;
  };
  const Term terms[] = {
      {b1 * b1, Rational(-3, 4), Rational(9, 4)},  {b1 * b2, Rational(-1), Rational(3)},
      {b1 * b3, Rational(1, 2), Rational(-1, 2)},  {b1, Rational(-9, 10), Rational(2)},
      {b2 * b2, Rational(0), Rational(1)},         {b2 * b3, Rational(1, 2), Rational(1, 2)},
      {b2, Rational(-17, 20), Rational(7, 4)},     {b3 * b3, Rational(1, 4), Rational(1)},
      {b3, Rational(1, 10), Rational(-1, 2)},      {Rational(1), Rational(-7, 80), Rational(0)},
  };
  Root5 c;
  for (const auto& t : terms) {
    c.a += t.mono * t.r;
    c.b += t.mono * t.s / 5;  // 1/sqrt5 = sqrt5/5
  }
  c.a.canonicalize();
  c.b.canonicalize();
  return c;
}

nlohmann::json to_json(const ObstructionVerdict& v) {
  nlohmann::json j{{"verdict", v.obstructed ? "obstructed" : "candidate"},
                   {"c", {{"a", v.c.a.get_str()}, {"b", v.c.b.get_str()}}}};
  if (v.candidate) j["candidate"] = v.candidate->get_str();
  return j;
}

ObstructionVerdict modularity_obstruction(const std::vector<Rational>& B) {
  ObstructionVerdict v;
  v.c = c_formula(B);
  v.obstructed = v.c.b != 0;
  if (!v.obstructed) v.candidate = v.c.a;
  return v;
}

BigFloat gamma_coefficient(const Rational& C, const std::vector<BigFloat>& Q) {
  mpfr_prec_t p = Q.empty() ? 64 : Q[0].prec();
  BigFloat sum = BigFloat::zero(p);
  for (const auto& q : Q) {
    if (!(q < lit(1, p))) throw DomainError("gamma needs Q_i < 1");
    sum += (lit(1, p) + q) / (lit(1, p) - q);
  }
  return BigFloat::from_rational(C, p) + sum / lit(24, p);
}

}  // namespace nahmlab
