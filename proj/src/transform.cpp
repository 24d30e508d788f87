#include "nahmlab/transform.hpp"

#include "nahmlab/modular.hpp"
#include "nahmlab/products.hpp"
#include "nahmlab/theta.hpp"

namespace nahmlab {

namespace {

BigFloat real(long v, mpfr_prec_t prec) { return BigFloat::from_int(v, prec); }
BigFloat real(const Rational& r, mpfr_prec_t prec) { return BigFloat::from_rational(r, prec); }
BigComplex cplx(const BigFloat& x) { return BigComplex(x); }
BigComplex zero_c(mpfr_prec_t prec) { return BigComplex(BigFloat::zero(prec), BigFloat::zero(prec)); }

ComplexMatrix zeros(std::size_t n, std::size_t m, mpfr_prec_t prec) {
  return ComplexMatrix(n, std::vector<BigComplex>(m, zero_c(prec)));
}

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b, mpfr_prec_t prec) {
  ComplexMatrix r = zeros(a.size(), b.empty() ? 0 : b[0].size(), prec);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (a[i][k].is_zero()) continue;
      for (std::size_t j = 0; j < b[k].size(); ++j) r[i][j] += a[i][k] * b[k][j];
    }
  return r;
}

std::vector<BigComplex> apply(const ComplexMatrix& m, const std::vector<BigComplex>& v, mpfr_prec_t prec) {
  std::vector<BigComplex> r(m.size(), zero_c(prec));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j)
      if (!m[i][j].is_zero()) r[i] += m[i][j] * v[j];
  return r;
}

// Solves A X = B in place by Gaussian elimination with partial pivoting;
// returns the determinant of A.
BigComplex solve(ComplexMatrix a, ComplexMatrix& b, mpfr_prec_t prec) {
  const std::size_t n = a.size();
  BigComplex det = cplx(real(1, prec));
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (abs(a[r][c]) > abs(a[piv][c])) piv = r;
    if (a[piv][c].is_zero()) return zero_c(prec);
    if (piv != c) {
      std::swap(a[piv], a[c]);
      std::swap(b[piv], b[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      BigComplex f = a[r][c] / a[c][c];
      if (f.is_zero()) continue;
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      for (std::size_t k = 0; k < b[r].size(); ++k) b[r][k] -= f * b[c][k];
    }
  }
  for (std::size_t c = n; c-- > 0;) {
    for (std::size_t k = 0; k < b[c].size(); ++k) {
      BigComplex acc = b[c][k];
      for (std::size_t j = c + 1; j < n; ++j) acc -= a[c][j] * b[j][k];
      b[c][k] = acc / a[c][c];
    }
  }
  return det;
}

std::vector<BigComplex> evaluate_all(const std::vector<QSeries>& comps, const BigComplex& tau, mpfr_prec_t prec) {
  std::vector<BigComplex> v;
  v.reserve(comps.size());
  for (const auto& c : comps) v.push_back(evaluate(c, tau, prec).value);
  return v;
}

BigFloat max_diff(const std::vector<BigComplex>& a, const std::vector<BigComplex>& b, mpfr_prec_t prec) {
  BigFloat m = BigFloat::zero(prec);
  for (std::size_t i = 0; i < a.size(); ++i) m = max(m, abs(a[i] - b[i]));
  return m;
}

BigComplex unit_of(const Rational& x, mpfr_prec_t prec) { return BigComplex::unit(real(x, prec)); }

ComplexMatrix diagonal_units(const std::vector<Rational>& exps, mpfr_prec_t prec) {
  ComplexMatrix t = zeros(exps.size(), exps.size(), prec);
  for (std::size_t i = 0; i < exps.size(); ++i) t[i][i] = unit_of(exps[i], prec);
  return t;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b, mpfr_prec_t prec) {
  const std::size_t n = a.size() * b.size();
  ComplexMatrix r = zeros(n, n, prec);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (a[i][j].is_zero()) continue;
      for (std::size_t k = 0; k < b.size(); ++k)
        for (std::size_t l = 0; l < b.size(); ++l) r[i * b.size() + k][j * b.size() + l] = a[i][j] * b[k][l];
    }
  return r;
}

}  // namespace

Evaluation evaluate(const QSeries& s, const BigComplex& tau, mpfr_prec_t prec, const std::optional<BigFloat>& tol) {
  if (tau.im.sign() <= 0) throw DomainError("tau must lie in the upper half-plane");
  const mpfr_prec_t wp = prec + 32;
  const BigFloat two_pi = BigFloat::pi(wp) * real(2, wp);
  BigComplex sum = zero_c(wp);
  BigFloat cmax = BigFloat::zero(wp);
  for (const auto& t : s.terms()) {
    BigFloat e = real(Rational(t.key, s.denom()), wp);
    BigFloat mag = exp(-(two_pi * e * tau.im));
    BigFloat ang = two_pi * e * tau.re;
    BigFloat c = real(t.coeff, wp);
    cmax = max(cmax, abs(c));
    sum += BigComplex(cos(ang) * mag * c, sin(ang) * mag * c);
  }
  Evaluation out;
  out.value = sum.rounded(prec);
  out.tail = BigFloat::zero(prec);
  if (s.trunc()) {
    if (cmax.is_zero()) cmax = real(1, wp);
    BigFloat n = real(s.trunc()->to_rational(), wp);
    BigFloat qabs = exp(-(two_pi * tau.im));
    BigFloat step = exp(-(two_pi * tau.im) / real(s.denom(), wp));
    BigFloat one = real(1, wp);
    out.tail = (cmax * pow(qabs, n) / (one - step)).rounded(prec);
  }
  BigFloat limit = tol ? *tol : BigFloat::two_pow(-static_cast<long>(prec), prec) * max(real(1, prec), abs(out.value));
  if (out.tail > limit)
    throw TruncationError("evaluation tail estimate " + out.tail.to_string(6) + " exceeds tolerance " +
                          limit.to_string(6) + "; raise the depth");
  return out;
}

BigComplex automorphy(const BigComplex& tau, const Rational& weight, mpfr_prec_t prec) {
  if (weight == 0) return cplx(real(1, prec));
  BigComplex z(tau.im, -tau.re);  // -i tau
  return pow(z.rounded(prec), real(weight, prec));
}

BigComplex s_action(const BigComplex& tau) {
  mpfr_prec_t p = tau.prec();
  return cplx(real(-1, p)) / tau;
}

nlohmann::json to_json(const ResidualReport& r) {
  return {{"descriptor", r.descriptor}, {"check", r.check},          {"tau", r.tau},
          {"residual", r.residual.to_string(6)}, {"tol", r.tol.to_string(3)}, {"pass", r.pass}};
}

ResidualReport check_S(const VVMFDescriptor& d, const BigComplex& tau, const BigFloat& tol, mpfr_prec_t prec) {
  ResidualReport r;
  r.descriptor = d.name;
  r.check = "S";
  r.tau = tau_to_string(tau);
  r.tol = tol;
  auto lhs = evaluate_all(d.components, s_action(tau), prec);
  auto rhs = apply(d.S, evaluate_all(d.components, tau, prec), prec);
  BigComplex j = automorphy(tau, d.weight, prec);
  for (auto& v : rhs) v = j * v;
  r.residual = max_diff(lhs, rhs, prec);
  r.pass = r.residual < tol;
  return r;
}

ResidualReport check_T(const VVMFDescriptor& d, const BigComplex& tau, const BigFloat& tol, mpfr_prec_t prec) {
  ResidualReport r;
  r.descriptor = d.name;
  r.check = "T";
  r.tau = tau_to_string(tau);
  r.tol = tol;
  BigComplex shifted(tau.re + real(1, prec), tau.im);
  auto lhs = evaluate_all(d.components, shifted, prec);
  auto rhs = apply(d.T, evaluate_all(d.components, tau, prec), prec);
  r.residual = max_diff(lhs, rhs, prec);
  r.pass = r.residual < tol;
  return r;
}

ImageFn s_image(const VVMFDescriptor& d, mpfr_prec_t prec) {
  return [&d, prec](const BigComplex& tau) {
    auto v = evaluate_all(d.components, s_action(tau), prec);
    BigComplex j = automorphy(tau, d.weight, prec);
    for (auto& x : v) x = x / j;
    return v;
  };
}

ImageFn t_image(const VVMFDescriptor& d, mpfr_prec_t prec) {
  return [&d, prec](const BigComplex& tau) {
    BigComplex shifted(tau.re + real(1, prec), tau.im);
    return evaluate_all(d.components, shifted, prec);
  };
}

nlohmann::json to_json(const ClosureReport& r) {
  return {{"id", r.id},
          {"samples", r.samples},
          {"gram", r.gram.to_string(6)},
          {"residual", r.residual.to_string(6)},
          {"tol", r.tol.to_string(3)},
          {"well_conditioned", r.well_conditioned},
          {"pass", r.pass}};
}

ClosureReport closure_check(const std::string& id, const std::vector<QSeries>& span, const ImageFn& image,
                            const std::vector<BigComplex>& samples, const BigFloat& tol, mpfr_prec_t prec) {
  const std::size_t k = span.size();
  if (k == 0) throw DomainError("closure check needs a nonempty span");
  if (samples.size() < 2 * k) throw DomainError("closure check needs at least 2 dim sample points");
  ClosureReport rep;
  rep.id = id;
  rep.samples = samples.size();
  rep.tol = tol;
  const std::size_t ns = samples.size();
  std::vector<std::vector<BigComplex>> xs(ns), ys(ns);
  std::vector<std::string> errors(ns);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t s = 0; s < ns; ++s) {
    try {
      xs[s] = evaluate_all(span, samples[s], prec);
      ys[s] = image(samples[s]);
    } catch (const std::exception& e) {
      errors[s] = e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw TruncationError(e);
  const std::size_t m = ys[0].size();
  // normal equations (X^H X) M^T = X^H Y
  ComplexMatrix g = zeros(k, k, prec), rhs = zeros(k, m, prec);
  for (std::size_t s = 0; s < ns; ++s)
    for (std::size_t i = 0; i < k; ++i) {
      BigComplex ci = xs[s][i].conjugate();
      for (std::size_t j = 0; j < k; ++j) g[i][j] += ci * xs[s][j];
      for (std::size_t j = 0; j < m; ++j) rhs[i][j] += ci * ys[s][j];
    }
  ComplexMatrix gn = g, dummy = zeros(k, 0, prec);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) gn[i][j] = g[i][j] / cplx(sqrt(g[i][i].re * g[j][j].re));
  rep.gram = abs(solve(gn, dummy, prec));
  rep.well_conditioned = rep.gram > BigFloat::two_pow(-static_cast<long>(prec) / 3, prec);
  if (!rep.well_conditioned) {
    rep.residual = BigFloat::from_int(1, prec);
    rep.pass = false;
    return rep;
  }
  solve(g, rhs, prec);  // rhs now holds M^T
  BigFloat worst = BigFloat::zero(prec);
  for (std::size_t s = 0; s < ns; ++s)
    for (std::size_t j = 0; j < m; ++j) {
      BigComplex fit = zero_c(prec);
      for (std::size_t i = 0; i < k; ++i) fit += rhs[i][j] * xs[s][i];
      worst = max(worst, abs(fit - ys[s][j]));
    }
  rep.residual = worst;
  rep.pass = worst < tol;
  return rep;
}

std::vector<BigComplex> closure_samples(const std::vector<BigComplex>& given, std::size_t count, mpfr_prec_t prec) {
  std::vector<BigComplex> out = given;
  const long xs[] = {-40, -15, 10, 35, -25, 20};
  const long ys[] = {95, 130, 175};
  for (long y : ys)
    for (long x : xs) {
      if (out.size() >= count) return out;
      out.emplace_back(real(ratio(x, 100), prec), real(ratio(y, 100), prec));
    }
  if (out.size() < count) throw DomainError("too many sample points requested");
  return out;
}

VVMFDescriptor weber_descriptor(Exponent depth, mpfr_prec_t prec) {
  VVMFDescriptor d;
  d.name = "weber";
  d.labels = {"f", "f1", "f2"};
  for (const char* k : {"weber(f)", "weber(f1)", "weber(f2)"}) d.components.push_back(expand(k, depth));
  BigFloat r2 = sqrt(real(2, prec));
  d.S = zeros(3, 3, prec);
  d.S[0][0] = cplx(real(1, prec));
  d.S[1][2] = cplx(r2);
  d.S[2][1] = cplx(real(1, prec) / r2);
  d.T = zeros(3, 3, prec);
  d.T[0][1] = unit_of(ratio(-1, 48), prec);
  d.T[1][0] = unit_of(ratio(-1, 48), prec);
  d.T[2][2] = unit_of(ratio(1, 24), prec);
  return d;
}

VVMFDescriptor rho1_descriptor(Exponent depth, mpfr_prec_t prec) {
  VVMFDescriptor d;
  d.name = "rho1";
  d.labels = {"W1", "W2"};
  d.components = {w_char(1, depth), w_char(2, depth)};
  BigComplex h = cplx(real(1, prec) / sqrt(real(2, prec)));
  d.S = {{h, h}, {h, -h}};
  d.T = diagonal_units({ratio(-1, 24), ratio(5, 24)}, prec);
  return d;
}

VVMFDescriptor rho2_descriptor(Exponent depth, mpfr_prec_t prec, bool printed_entry33) {
  VVMFDescriptor d;
  d.name = printed_entry33 ? "rho2-printed" : "rho2";
  d.labels = {"Z1", "Z2", "Z3", "Z4"};
  for (int i = 1; i <= 4; ++i) d.components.push_back(z_char(i, depth));
  BigFloat pi = BigFloat::pi(prec);
  BigFloat c = sqrt(real(2, prec) / real(5, prec));
  BigComplex a = cplx(sin(real(2, prec) * pi / real(5, prec)) * c);
  BigComplex b = cplx(sin(pi / real(5, prec)) * c);
  d.S = {{a, -a, -b, b}, {-a, -a, b, b}, {-b, b, -a, a}, {b, b, a, a}};
  if (printed_entry33) d.S[2][2] = -d.S[2][2];
  d.T = diagonal_units({ratio(1, 40), ratio(31, 40), ratio(9, 40), ratio(-1, 40)}, prec);
  return d;
}

VVMFDescriptor rho_tilde_descriptor(Exponent depth, mpfr_prec_t prec) {
  VVMFDescriptor d;
  d.name = "rho-tilde";
  for (int i = 1; i <= 6; ++i) {
    d.labels.push_back("F" + std::to_string(i));
    d.components.push_back(tilde_f(i, depth));
  }
  // coordinates in the 24-dim space weber_u * W_a * Z_b, index 8u + 4a + b
  ComplexMatrix c = zeros(6, 24, prec);
  auto set = [&](int row, int u, int a, int b, long v) { c[row][8 * u + 4 * a + b] = cplx(real(v, prec)); };
  set(0, 0, 0, 3, 1), set(0, 0, 1, 2, 1);   // f (W1 Z4 + W2 Z3)
  set(1, 2, 0, 0, 1), set(1, 2, 1, 1, 1);   // f2 (W1 Z1 + W2 Z2)
  set(2, 2, 0, 2, 1), set(2, 2, 1, 3, 1);   // f2 (W1 Z3 + W2 Z4)
  set(3, 0, 0, 1, 1), set(3, 0, 1, 0, 1);   // f (W1 Z2 + W2 Z1)
  set(4, 1, 0, 3, 1), set(4, 1, 1, 2, -1);  // f1 (W1 Z4 - W2 Z3)
  set(5, 1, 1, 0, 1), set(5, 1, 0, 1, -1);  // f1 (W2 Z1 - W1 Z2)
  ComplexMatrix ct = zeros(24, 6, prec);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 24; ++j) ct[j][i] = c[i][j];
  // rows of c are orthogonal with norm^2 = 2, so c^+ = c^T / 2
  BigComplex half = cplx(real(ratio(1, 2), prec));
  auto project = [&](const ComplexMatrix& k, BigFloat& resid) {
    ComplexMatrix ck = multiply(c, k, prec);
    ComplexMatrix m = multiply(ck, ct, prec);
    for (auto& row : m)
      for (auto& x : row) x = x * half;
    ComplexMatrix mc = multiply(m, c, prec);
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 24; ++j) resid = max(resid, abs(ck[i][j] - mc[i][j]));
    return m;
  };
  VVMFDescriptor w = weber_descriptor(Exponent(1), prec);
  VVMFDescriptor r1 = rho1_descriptor(Exponent(1), prec);
  VVMFDescriptor r2 = rho2_descriptor(Exponent(1), prec);
  BigFloat resid = BigFloat::zero(prec);
  d.S = project(kron(kron(w.S, r1.S, prec), r2.S, prec), resid);
  d.T = project(kron(kron(w.T, r1.T, prec), r2.T, prec), resid);
  d.assembly_residual = resid;
  return d;
}

VVMFDescriptor theta_descriptor(const Rational& k, Exponent depth, mpfr_prec_t prec, bool printed_phase) {
  Rational twok = 2 * k;
  if (twok.get_den() != 1 || twok.get_num() % 2 == 0 || k <= 0)
    throw DomainError("theta descriptor needs k in N + 1/2");
  const long K2 = twok.get_num().get_si();
  VVMFDescriptor d;
  d.name = printed_phase ? "theta-printed" : "theta";
  d.weight = ratio(3, 2);
  std::vector<Rational> ja, jb;
  for (long j = 1; j <= K2 - 1; ++j) ja.push_back(Rational(j));
  for (long j = 1; j <= K2; ++j) jb.push_back(ratio(2 * j - 1, 2));
  for (const auto& j : ja) {
    d.labels.push_back("dtheta(" + j.get_str() + "," + k.get_str() + ")");
    d.components.push_back(dtheta(j, k, depth));
  }
  for (const auto& j : jb) {
    d.labels.push_back("dtheta(" + j.get_str() + "," + k.get_str() + ")");
    d.components.push_back(dtheta(j, k, depth));
  }
  for (const auto& j : ja) {
    d.labels.push_back("dg(" + j.get_str() + "," + k.get_str() + ")");
    d.components.push_back(dg(j, k, depth));
  }
  const std::size_t na = ja.size(), nb = jb.size(), n = 2 * na + nb;
  const std::size_t offb = na, offc = na + nb;
  // (-tau) sqrt(-i tau / 2k) = -i (-i tau)^(3/2) / sqrt(2k)
  BigComplex c(BigFloat::zero(prec), -(real(1, prec) / sqrt(real(twok, prec))));
  // exp(i pi x) = unit(x / 2)
  auto phase = [&](const Rational& x) { return c * unit_of(x / 2, prec); };
  d.S = zeros(n, n, prec);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < na; ++j) d.S[i][j] = phase(ja[i] * ja[j] / k);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j) {
      Rational x = ja[i] * (2 * jb[j]) / (printed_phase ? k : twok);
      d.S[offc + i][offb + j] = phase(x);
    }
  for (std::size_t i = 0; i < nb; ++i)
    for (std::size_t j = 0; j < na; ++j) d.S[offb + i][offc + j] = phase(jb[i] * ja[j] / k);
  d.T = zeros(n, n, prec);
  auto tphase = [&](const Rational& j) { return unit_of(j * j / (4 * k), prec); };
  for (std::size_t i = 0; i < na; ++i) {
    d.T[i][offc + i] = tphase(ja[i]);
    d.T[offc + i][i] = tphase(ja[i]);
  }
  for (std::size_t i = 0; i < nb; ++i) d.T[offb + i][offb + i] = tphase(jb[i]);
  return d;
}

VVMFDescriptor descriptor_by_name(const std::string& name, Exponent depth, mpfr_prec_t prec) {
  if (name == "weber") return weber_descriptor(depth, prec);
  if (name == "rho1") return rho1_descriptor(depth, prec);
  if (name == "rho2") return rho2_descriptor(depth, prec);
  if (name == "rho2-printed") return rho2_descriptor(depth, prec, true);
  if (name == "rho-tilde") return rho_tilde_descriptor(depth, prec);
  if (name == "theta") return theta_descriptor(ratio(5, 2), depth, prec);
  if (name == "theta-printed") return theta_descriptor(ratio(5, 2), depth, prec, true);
  // theta:K and theta-printed:K for other K in N + 1/2
  for (std::string_view stem : {"theta:", "theta-printed:"})
    if (name.starts_with(stem))
      return theta_descriptor(parse_rational(std::string_view(name).substr(stem.size())), depth, prec,
                              stem == "theta-printed:");
  throw DomainError("unknown transform suite '" + name + "'");
}

std::vector<std::string> descriptor_names() {
  return {"weber", "rho1", "rho2", "rho2-printed", "rho-tilde", "theta", "theta-printed"};
}

BigComplex parse_tau(std::string_view text, mpfr_prec_t prec) {
  auto comma = text.find(',');
  if (comma == std::string_view::npos) return BigComplex::parse(text, prec);
  return {BigFloat::from_string(text.substr(0, comma), prec), BigFloat::from_string(text.substr(comma + 1), prec)};
}

std::string tau_to_string(const BigComplex& tau) { return tau.re.to_string(8) + "," + tau.im.to_string(8); }

}  // namespace nahmlab
