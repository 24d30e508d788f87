#include "nahmlab/builtins.hpp"

#include <map>

#include "nahmlab/asymptotics.hpp"
#include "nahmlab/modular.hpp"
#include "nahmlab/nahm.hpp"
#include "nahmlab/products.hpp"
#include "nahmlab/registry.hpp"
#include "nahmlab/replay.hpp"
#include "nahmlab/theta.hpp"
#include "nahmlab/transform.hpp"

namespace nahmlab {

namespace {

void arity(const std::vector<std::string>& args, std::size_t n, const char* name) {
  if (args.size() != n)
    throw DomainError(std::string(name) + " takes " + std::to_string(n) + " argument" + (n == 1 ? "" : "s"));
}

CheckOutcome ok(std::string message = {}) { return {true, std::nullopt, std::move(message), nullptr}; }

CheckOutcome failed(std::string observed, std::string expected, std::optional<std::string> exponent = std::nullopt) {
  CheckOutcome c;
  c.mismatch = Mismatch{std::move(exponent), std::move(observed), std::move(expected)};
  return c;
}

template <class R>
CheckOutcome from_match(const MatchReport<R>& m) {
  if (m.equal) return ok();
  CheckOutcome c;
  c.mismatch = mismatch_of(m);
  return c;
}

BigFloat parse_tol(const std::string& s, mpfr_prec_t prec) { return BigFloat::from_string(s, prec); }

// ---- series-level checks ----

CheckOutcome xvar_grid(const std::vector<std::string>& a, const BuiltinContext& ctx) {
  arity(a, 1, "xvar-grid");
  const std::int64_t n = parse_int(a[0]);
  for (std::int64_t i = 0; i < n; ++i)
    for (std::int64_t j = 0; j < n; ++j)
      for (std::int64_t k = 0; k < n; ++k)
        if (!xvar_coefficient_check(i, j, k, ctx.depth))
          return failed("mismatch", "equal", "(i,j,k) = (" + std::to_string(i) + "," + std::to_string(j) + "," +
                                                 std::to_string(k) + ")");
  return ok(std::to_string(n * n * n) + " index triples");
}

// leading(expr; exponent; c0,c1,c2): leading exponent and first nonzero coefficients
CheckOutcome leading(const std::vector<std::string>& a, const BuiltinContext&) {
  arity(a, 3, "leading");
  Exponent e = parse_exponent(a[1]);
  auto want = parse_vector(a[2]);
  QSeries s = expand(a[0], e + Exponent(static_cast<std::int64_t>(want.size()) + 2), default_registry());
  auto lt = leading_term(s);
  if (!lt) return failed("zero", "q^" + e.to_string());
  if (lt->exponent != e) return failed("q^" + lt->exponent.to_string(), "q^" + e.to_string());
  std::size_t n = 0;
  for (const auto& t : s.terms()) {
    if (n == want.size()) break;
    Exponent at(t.key, s.denom());
    if (t.coeff != want[n]) return failed(t.coeff.get_str(), want[n].get_str(), at.to_string());
    ++n;
  }
  if (n < want.size()) return failed("too few terms", std::to_string(want.size()));
  return ok();
}

CheckOutcome theta_relations(const std::vector<std::string>& a, const BuiltinContext& ctx) {
  arity(a, 1, "theta-relations");
  auto results = check_theta_relations(parse_rational(a[0]), ctx.depth, ctx.prec);
  CheckOutcome c = ok(std::to_string(results.size()) + " relations");
  for (const auto& r : results) {
    if (r.pass) continue;
    c.pass = false;
    c.mismatch = Mismatch{std::nullopt, r.id + " " + r.params + ": " + r.mismatch.value_or("failed"), "equal"};
    break;
  }
  return c;
}

// theta of the odd characters mod 5 against the residue-class sums
CheckOutcome character_theta_check(const std::vector<std::string>& a, const BuiltinContext& ctx) {
  arity(a, 1, "character-theta");
  const int which = static_cast<int>(parse_int(a[0]));
  if (which != 0 && which != 1) throw DomainError("character-theta takes 0 or 1");
  auto lhs = character_theta(which, ctx.depth);
  auto t1 = embed<Gauss>(theta_residue_class(1, 5, ctx.depth));
  auto t2 = embed<Gauss>(theta_residue_class(2, 5, ctx.depth));
  Gauss two_i(Rational(0), Rational(which == 0 ? 2 : -2));
  auto rhs = t1.scaled(Gauss(Rational(2), Rational(0))) + t2.scaled(two_i);
  return from_match(compare(lhs, rhs, ctx.depth));
}

CheckOutcome sturm(const std::vector<std::string>& a, const BuiltinContext&) {
  arity(a, 3, "sturm");
  std::int64_t got = sturm_bound(parse_rational(a[0]), parse_int(a[1]));
  std::int64_t want = parse_int(a[2]);
  if (got != want) return failed(std::to_string(got), std::to_string(want));
  return ok();
}

CheckOutcome replay(const std::vector<std::string>& a, const BuiltinContext& ctx) {
  arity(a, 1, "ct-replay");
  const int i = static_cast<int>(parse_int(a[0]));
  QSeries target = replay_target(i, ctx.depth);
  QSeries ct = replay_constant_term(i, ctx.depth);
  auto m = compare(target, ct, ctx.depth);
  if (!m.equal) return from_match(m);
  // a wider z-window must not change anything below the truncation
  auto w = compare(ct, replay_constant_term(i, ctx.depth, 5), ctx.depth);
  if (!w.equal) {
    CheckOutcome c = from_match(w);
    c.message = "constant term depends on the z-window";
    return c;
  }
  return ok();
}

// ---- modular ----

CheckOutcome wronskian_eisenstein(const std::vector<std::string>& a, const BuiltinContext& ctx) {
  arity(a, 0, "wronskian-eisenstein");
  auto r = eisenstein_wronskian_check(ctx.depth);
  CheckOutcome c;
  c.pass = r.pass;
  c.detail = to_json(r);
  if (!r.order_ok)
    c.mismatch = Mismatch{std::nullopt, "order " + r.order.order.to_string(), "order " + r.expected_order.to_string()};
  else if (!r.identity.pass)
    c.mismatch = Mismatch{r.identity.mismatch ? std::optional(r.identity.mismatch->to_string()) : std::nullopt,
                          r.identity.lhs_coeff, r.identity.rhs_coeff};
  return c;
}

std::vector<QSeries> basis(bool g, Exponent d) {
  std::vector<QSeries> v;
  for (int i = 1; i <= 6; ++i) v.push_back(g ? g_basis(i, d) : tilde_f(i, d));
  return v;
}

// wronskian-order(tildeF|gbasis; expected)
CheckOutcome wronskian_order(const std::vector<std::string>& a, const BuiltinContext&) {
  arity(a, 2, "wronskian-order");
  if (a[0] != "tildeF" && a[0] != "gbasis") throw DomainError("wronskian-order takes tildeF or gbasis");
  const bool g = a[0] == "gbasis";
  Exponent want = parse_exponent(a[1]);
  auto w = wronskian_to_depth([g](Exponent d) { return basis(g, d); }, want + Exponent(1), false);
  if (w.identically_zero) return failed("identically zero", want.to_string());
  if (w.order.order != want) return failed(w.order.order.to_string(), want.to_string());
  return ok();
}

// For components with distinct leading exponents l_i and coefficients c_i the
// Wronskian starts with prod c_i * prod_(i<j) (l_j - l_i) q^(sum l_i).
CheckOutcome wronskian_order_rule(const std::vector<std::string>& a, const BuiltinContext&) {
  arity(a, 1, "wronskian-order-rule");
  if (a[0] != "gbasis") throw DomainError("wronskian-order-rule takes gbasis");
  auto comps = basis(true, Exponent(2));
  Rational coeff(1), sum(0);
  std::vector<Rational> lead;
  for (const auto& f : comps) {
    auto lt = leading_term(f);
    if (!lt) throw DomainError("component vanishes to the computed depth");
    coeff *= lt->coeff;
    lead.push_back(lt->exponent.to_rational());
    sum += lead.back();
  }
  for (std::size_t i = 0; i < lead.size(); ++i)
    for (std::size_t j = i + 1; j < lead.size(); ++j) coeff *= lead[j] - lead[i];
  auto w = wronskian_to_depth([](Exponent d) { return basis(true, d); }, Exponent(sum) + Exponent(1), false);
  auto lt = leading_term(w.value);
  if (!lt) return failed("zero", "q^" + to_string(sum));
  if (lt->exponent.to_rational() != sum) return failed("q^" + lt->exponent.to_string(), "q^" + to_string(sum));
  if (lt->coeff != coeff) return failed(lt->coeff.get_str(), coeff.get_str(), lt->exponent.to_string());
  return ok();
}

// D E2 = (E2^2 - E4)/12, D E4 = (E2 E4 - E6)/3, D E6 = (E2 E6 - E4^2)/2
CheckOutcome ramanujan(const std::vector<std::string>& a, const BuiltinContext& ctx) {
  arity(a, 1, "ramanujan");
  auto kind = parse_eisenstein(a[0]);
  if (!kind) throw DomainError("ramanujan takes E2, E4 or E6");
  const Exponent d = ctx.depth;
  QSeries e2 = eisenstein(EisensteinKind::E2, d), e4 = eisenstein(EisensteinKind::E4, d),
          e6 = eisenstein(EisensteinKind::E6, d);
  QSeries lhs, rhs;
  switch (*kind) {
    case EisensteinKind::E2: lhs = derivative(e2); rhs = (e2 * e2 - e4).scaled(Rational(1, 12)); break;
    case EisensteinKind::E4: lhs = derivative(e4); rhs = (e2 * e4 - e6).scaled(Rational(1, 3)); break;
    case EisensteinKind::E6: lhs = derivative(e6); rhs = (e2 * e6 - e4 * e4).scaled(Rational(1, 2)); break;
  }
  return from_match(compare(lhs, rhs, d));
}

// the Serre derivative lands in weight k + 2: E4 -> -E6/3, E6 -> -E4^2/2
CheckOutcome serre_check(const std::vector<std::string>& a, const BuiltinContext& ctx) {
  arity(a, 1, "serre");
  auto kind = parse_eisenstein(a[0]);
  if (!kind || *kind == EisensteinKind::E2) throw DomainError("serre takes E4 or E6");
  const Exponent d = ctx.depth;
  QSeries e4 = eisenstein(EisensteinKind::E4, d), e6 = eisenstein(EisensteinKind::E6, d);
  if (*kind == EisensteinKind::E4) return from_match(compare(serre(e4, Rational(4)), e6.scaled(Rational(-1, 3)), d));
  return from_match(compare(serre(e6, Rational(6)), (e4 * e4).scaled(Rational(-1, 2)), d));
}

CheckOutcome conjecture(const std::vector<std::string>& a, const BuiltinContext& ctx) {
  arity(a, 1, "conjecture");
  auto r = conjecture_check(static_cast<int>(parse_int(a[0])), ctx.depth);
  CheckOutcome c;
  c.pass = r.pass;
  c.detail = to_json(r);
  if (!r.pass) {
    c.mismatch = Mismatch{r.mismatch ? std::optional(r.mismatch->to_string()) : std::nullopt, r.lhs_coeff, r.rhs_coeff};
    c.message = "falsification: " + r.rhs_description;
  }
  return c;
}

// ---- asymptotics ----

// tba(matrix; tol; closed forms as a+b*sqrt5 pairs "a:b,a:b,...")
CheckOutcome tba(const std::vector<std::string>& a, const BuiltinContext&) {
  arity(a, 3, "tba");
  Matrix A = parse_matrix(a[0]);
  TbaOptions opt;
  opt.prec = 256;
  BigFloat tol = parse_tol(a[1], opt.prec);
  TbaSolution sol = solve_tba(A, opt);
  auto forms = split_args(a[2], ",");
  if (forms.size() != A.rows()) throw DomainError("tba needs one closed form per row");
  std::vector<Root5> exact;
  const BigFloat r5 = sqrt(BigFloat::from_int(5, opt.prec));
  for (std::size_t i = 0; i < forms.size(); ++i) {
    auto ab = split_args(forms[i], ":");
    if (ab.size() != 2) throw DomainError("closed form must be a:b");
    Root5 x(parse_rational(ab[0]), parse_rational(ab[1]));
    exact.push_back(x);
    BigFloat v = BigFloat::from_rational(x.a, opt.prec) + BigFloat::from_rational(x.b, opt.prec) * r5;
    BigFloat err = abs(sol.Q[i] - v);
    if (!(err < tol)) return failed(sol.Q[i].to_string(40), to_string(x), "Q" + std::to_string(i + 1));
  }
  for (const auto& r : tba_exact_residuals(A, exact))
    if (r != Root5()) return failed("exact residual " + to_string(r), "0");
  CheckOutcome c = ok(std::to_string(sol.iterations) + " iterations");
  c.detail = to_json(sol);
  return c;
}

// tba-uniqueness(matrix; starts; agree)
CheckOutcome tba_unique(const std::vector<std::string>& a, const BuiltinContext&) {
  arity(a, 3, "tba-uniqueness");
  const mpfr_prec_t p = 128;
  auto r = tba_uniqueness(parse_matrix(a[0]), static_cast<int>(parse_int(a[1])), 20240601, parse_tol(a[2], p), p);
  if (!r.unique) return failed("spread " + r.spread.to_string(6), "below " + a[2]);
  return ok("spread " + r.spread.to_string(6));
}

// obstruction(b1,b2,b3; obstructed|candidate; a; b) with c = a + b sqrt5
CheckOutcome obstruction(const std::vector<std::string>& a, const BuiltinContext&) {
  arity(a, 4, "obstruction");
  auto v = modularity_obstruction(parse_vector(a[0]));
  const std::string verdict = v.obstructed ? "obstructed" : "candidate";
  Root5 want(parse_rational(a[2]), parse_rational(a[3]));
  if (verdict != a[1]) return failed(verdict, a[1]);
  if (v.c != want) return failed(to_string(v.c), to_string(want));
  CheckOutcome c = ok();
  c.detail = to_json(v);
  return c;
}

// ---- transforms ----

CheckOutcome residual_outcome(const ResidualReport& r) {
  CheckOutcome c;
  c.pass = r.pass;
  c.detail = to_json(r);
  if (!r.pass) c.mismatch = Mismatch{std::nullopt, "residual " + r.residual.to_string(6), "below " + r.tol.to_string(3)};
  return c;
}

// transform(name; S|T; tau; tol)
CheckOutcome transform(const std::vector<std::string>& a, const BuiltinContext& ctx) {
  arity(a, 4, "transform");
  auto d = descriptor_by_name(a[0], ctx.depth, ctx.prec);
  BigComplex tau = parse_tau(a[2], ctx.prec);
  BigFloat tol = parse_tol(a[3], ctx.prec);
  if (a[1] == "S") return residual_outcome(check_S(d, tau, tol, ctx.prec));
  if (a[1] == "T") return residual_outcome(check_T(d, tau, tol, ctx.prec));
  throw DomainError("transform takes S or T");
}

// closure(name; S|T; tol): the image stays in the span of the components.
// name w1 is the first rho1 component on its own.
CheckOutcome closure(const std::vector<std::string>& a, const BuiltinContext& ctx) {
  arity(a, 3, "closure");
  const mpfr_prec_t p = ctx.prec;
  VVMFDescriptor d = descriptor_by_name(a[0] == "w1" ? "rho1" : a[0], ctx.depth, p);
  if (a[0] == "w1") {
    d.components.resize(1);
    d.S = {{d.S[0][0]}};
    d.T = {{d.T[0][0]}};
  }
  if (a[1] != "S" && a[1] != "T") throw DomainError("closure takes S or T");
  std::vector<BigComplex> given = {parse_tau("0,1", p), parse_tau("1/2,1", p), parse_tau("0,2", p),
                                   parse_tau("1/3,1", p)};
  auto samples = closure_samples(given, std::max<std::size_t>(2 * d.components.size(), given.size()), p);
  ImageFn image = a[1] == "S" ? s_image(d, p) : t_image(d, p);
  auto r = closure_check(a[0] + "-" + a[1], d.components, image, samples, parse_tol(a[2], p), p);
  CheckOutcome c;
  c.pass = r.pass;
  c.detail = to_json(r);
  if (!r.pass)
    c.mismatch = Mismatch{std::nullopt,
                          r.well_conditioned ? "residual " + r.residual.to_string(6) : "ill-conditioned samples",
                          "below " + r.tol.to_string(3)};
  return c;
}

// At tau = i the S-law forces (W1, W2)(i) to be a fixed vector: W2/W1 = sqrt2 - 1.
CheckOutcome fixed_point(const std::vector<std::string>& a, const BuiltinContext& ctx) {
  arity(a, 1, "fixed-point");
  if (a[0] != "rho1") throw DomainError("fixed-point takes rho1");
  const mpfr_prec_t p = ctx.prec;
  BigComplex tau = parse_tau("0,1", p);
  BigComplex w1 = evaluate(w_char(1, ctx.depth), tau, p).value;
  BigComplex w2 = evaluate(w_char(2, ctx.depth), tau, p).value;
  BigComplex want(sqrt(BigFloat::from_int(2, p)) - BigFloat::from_int(1, p), BigFloat::zero(p));
  BigComplex ratio_value = w2 / w1;
  BigFloat err = abs(ratio_value - want);
  BigFloat tol = BigFloat::from_string("1e-20", p);
  if (!(err < tol)) return failed(ratio_value.to_string(), want.to_string());
  return ok();
}

const std::map<std::string, Builtin, std::less<>>& table() {
  static const std::map<std::string, Builtin, std::less<>> t = {
      {"xvar-grid", xvar_grid},
      {"leading", leading},
      {"theta-relations", theta_relations},
      {"character-theta", character_theta_check},
      {"sturm", sturm},
      {"ct-replay", replay},
      {"wronskian-eisenstein", wronskian_eisenstein},
      {"wronskian-order", wronskian_order},
      {"wronskian-order-rule", wronskian_order_rule},
      {"ramanujan", ramanujan},
      {"serre", serre_check},
      {"conjecture", conjecture},
      {"tba", tba},
      {"tba-uniqueness", tba_unique},
      {"obstruction", obstruction},
      {"transform", transform},
      {"closure", closure},
      {"fixed-point", fixed_point},
  };
  return t;
}

}  // namespace

const Builtin* find_builtin(std::string_view name) {
  auto it = table().find(name);
  return it == table().end() ? nullptr : &it->second;
}

std::vector<std::string> builtin_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : table()) out.push_back(k);
  return out;
}

}  // namespace nahmlab
