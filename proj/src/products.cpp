#include "nahmlab/products.hpp"

#include <algorithm>
#include <sstream>

#include "nahmlab/theta.hpp"

namespace nahmlab {

// ---- registry ----

void Registry::add(Extension e) {
  std::string n = e.name;
  table_[n] = std::make_shared<const Extension>(std::move(e));
}

std::shared_ptr<const Extension> Registry::find(std::string_view name) const {
  auto it = table_.find(name);
  return it == table_.end() ? nullptr : it->second;
}

std::vector<std::string> Registry::names() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : table_) out.push_back(k);
  return out;
}

const Registry& empty_registry() {
  static const Registry r;
  return r;
}

// ---- atom parameters ----

Rational bernoulli_p2(const Rational& t) {
  Rational f = t - floor(t);
  return f * f - f + Rational(1, 6);
}

Rational generalized_eta_prefactor(std::int64_t delta, std::int64_t g) {
  return ratio(delta, 2) * bernoulli_p2(ratio(g, delta));
}

void validate_atom(const ProductAtom& a) {
  std::visit(
      [](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, PochhammerAtom>) {
          if (x.sign != 1 && x.sign != -1) throw DomainError("Pochhammer sign must be + or -");
          if (x.base <= 0) throw DomainError("Pochhammer base exponent must be positive");
          if (!x.length && x.r <= 0) throw DomainError("infinite Pochhammer symbol needs a positive exponent");
          if (x.length && *x.length < 0) throw DomainError("Pochhammer length must be nonnegative");
        } else if constexpr (std::is_same_v<T, JAtom>) {
          if (x.m < 1) throw DomainError("J(m) needs m >= 1");
        } else if constexpr (std::is_same_v<T, JamAtom>) {
          if (x.m < 1 || x.a <= 0 || x.a >= x.m) throw DomainError("Jam(a,m) needs 0 < a < m");
        } else if constexpr (std::is_same_v<T, GenEtaAtom>) {
          if (x.delta < 1 || x.g <= 0 || x.g >= x.delta) throw DomainError("geta(delta;g) needs 0 < g < delta");
        } else if constexpr (std::is_same_v<T, PartialThetaAtom>) {
          if (x.k <= 0) throw DomainError("partial theta needs k > 0");
        } else if constexpr (std::is_same_v<T, ExtensionAtom>) {
          if (!x.ext) throw DomainError("unresolved extension atom");
          if (x.ext->validate) x.ext->validate(x.args);
        }
      },
      a);
}

// ---- factored products ----

namespace {

void add_pochhammer_factors(FactoredProduct& p, int sign, const Rational& r, const Rational& base,
                            std::optional<std::int64_t> length, const Rational& span, std::int64_t mult) {
  // factor (1 - sign q^e)
  const int fs = sign > 0 ? -1 : 1;
  for (std::int64_t k = 0; !length || k < *length; ++k) {
    Rational e = r + base * k;
    if (e <= 0) {
      if (e == 0) {
        if (fs < 0) {
          p.coeff = 0;
        } else {
          p.coeff *= 2;
        }
        continue;
      }
      // 1 + s q^e = s q^e (1 + s q^-e)  for s = +-1
      if (fs < 0) p.coeff = -p.coeff;
      p.shift += e * mult;
      p.factors.push_back({fs, Rational(-e), mult});
      continue;
    }
    if (!length && e >= span) break;
    if (length && e >= span) continue;
    p.factors.push_back({fs, e, mult});
  }
}

}  // namespace

std::optional<FactoredProduct> factor_atom(const ProductAtom& a, const Rational& span) {
  FactoredProduct p;
  bool ok = true;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, PochhammerAtom>) {
          add_pochhammer_factors(p, x.sign, x.r, x.base, x.length, span, 1);
        } else if constexpr (std::is_same_v<T, JAtom>) {
          add_pochhammer_factors(p, 1, Rational(x.m), Rational(x.m), std::nullopt, span, 1);
        } else if constexpr (std::is_same_v<T, JamAtom>) {
          add_pochhammer_factors(p, 1, Rational(x.a), Rational(x.m), std::nullopt, span, 1);
          add_pochhammer_factors(p, 1, Rational(x.m - x.a), Rational(x.m), std::nullopt, span, 1);
          add_pochhammer_factors(p, 1, Rational(x.m), Rational(x.m), std::nullopt, span, 1);
        } else if constexpr (std::is_same_v<T, GenEtaAtom>) {
          // product over n > 0 with n = +-g mod delta (as a set of residues)
          p.shift = generalized_eta_prefactor(x.delta, x.g);
          add_pochhammer_factors(p, 1, Rational(x.g), Rational(x.delta), std::nullopt, span, 1);
          if (2 * x.g != x.delta)
            add_pochhammer_factors(p, 1, Rational(x.delta - x.g), Rational(x.delta), std::nullopt, span, 1);
        } else if constexpr (std::is_same_v<T, EtaAtom>) {
          p.shift = Rational(1, 24);
          add_pochhammer_factors(p, 1, Rational(1), Rational(1), std::nullopt, span, 1);
        } else if constexpr (std::is_same_v<T, WeberAtom>) {
          switch (x.kind) {
            case WeberKind::f:
              p.shift = Rational(-1, 48);
              add_pochhammer_factors(p, -1, Rational(1, 2), Rational(1), std::nullopt, span, 1);
              break;
            case WeberKind::f1:
              p.shift = Rational(-1, 48);
              add_pochhammer_factors(p, 1, Rational(1, 2), Rational(1), std::nullopt, span, 1);
              break;
            case WeberKind::f2:
              p.shift = Rational(1, 24);
              add_pochhammer_factors(p, -1, Rational(1), Rational(1), std::nullopt, span, 1);
              break;
          }
        } else if constexpr (std::is_same_v<T, QPowAtom>) {
          p.shift = x.r;
        } else if constexpr (std::is_same_v<T, ConstAtom>) {
          p.coeff = x.c;
        } else {
          ok = false;
        }
      },
      a);
  if (!ok) return std::nullopt;
  return p;
}

namespace {

bool atom_is_finite(const ProductAtom& a) {
  if (const auto* p = std::get_if<PochhammerAtom>(&a)) return p->length.has_value();
  return std::holds_alternative<QPowAtom>(a) || std::holds_alternative<ConstAtom>(a);
}

// Merge equal factors, drop multiplicity zero.
void normalize_factors(std::vector<LinearFactor>& fs) {
  std::sort(fs.begin(), fs.end(), [](const LinearFactor& a, const LinearFactor& b) {
    if (a.e != b.e) return a.e < b.e;
    return a.sign < b.sign;
  });
  std::vector<LinearFactor> out;
  for (const auto& f : fs) {
    if (!out.empty() && out.back().e == f.e && out.back().sign == f.sign)
      out.back().mult += f.mult;
    else
      out.push_back(f);
  }
  std::erase_if(out, [](const LinearFactor& f) { return f.mult == 0; });
  fs = std::move(out);
}

QSeries expand_factored_impl(const FactoredProduct& p, Exponent depth, bool exact) {
  if (p.coeff == 0) return QSeries::zero();
  std::int64_t d = Exponent(p.shift).den();
  for (const auto& f : p.factors) d = lcm64(d, Exponent(f.e).den());
  const Exponent shift(p.shift);
  std::int64_t n;
  if (exact) {
    // total degree of the polynomial part (no negative powers allowed)
    Rational deg = 0;
    for (const auto& f : p.factors) {
      if (f.mult < 0) throw DomainError("exact expansion of a quotient of binomials");
      deg += f.e * f.mult;
    }
    n = (Exponent(deg) * Exponent(d)).num() + 1;
  } else {
    Exponent rel = depth - shift;
    if (rel <= Exponent(0)) return QSeries::zero(depth);
    n = QSeries::key_limit(rel, d);
  }
  std::vector<mpz_class> buf(static_cast<std::size_t>(n));
  buf[0] = 1;
  for (const auto& f : p.factors) {
    std::int64_t step = (Exponent(f.e) * Exponent(d)).num();
    if (step >= n) continue;
    if (f.mult > 0)
      for (std::int64_t k = 0; k < f.mult; ++k) kernels::mul_binomial(buf, step, f.sign);
    else
      for (std::int64_t k = 0; k < -f.mult; ++k) kernels::div_binomial(buf, step, f.sign);
  }
  std::vector<QSeries::Term> terms;
  const std::int64_t base = (shift * Exponent(d)).num();
  for (std::int64_t i = 0; i < n; ++i)
    if (buf[static_cast<std::size_t>(i)] != 0)
      terms.push_back({base + i, Rational(buf[static_cast<std::size_t>(i)]) * p.coeff});
  return QSeries(d, exact ? Trunc() : Trunc(depth), std::move(terms));
}

}  // namespace

QSeries expand_factored(const FactoredProduct& p, Exponent depth) {
  FactoredProduct q = p;
  normalize_factors(q.factors);
  return expand_factored_impl(q, depth, false);
}

QSeries pochhammer(int sign, const Rational& r, const Rational& base, std::optional<std::int64_t> length,
                   Exponent depth) {
  PochhammerAtom a{sign, r, base, length};
  validate_atom(a);
  return expand_atom(a, depth);
}

Exponent atom_valuation(const ProductAtom& a) {
  if (std::holds_alternative<Theta2Atom>(a)) return Exponent(1, 4);
  if (std::holds_alternative<Theta3Atom>(a)) return Exponent(0);
  if (const auto* pt = std::get_if<PartialThetaAtom>(&a)) {
    // nearest nonzero values of |2kn + j|
    Rational two_k = 2 * pt->k;
    Rational n0 = floor(-pt->j / two_k);
    std::optional<Rational> best;
    for (int dn = -1; dn <= 2; ++dn) {
      Rational v = two_k * (n0 + dn) + pt->j;
      if (v == 0) continue;
      Rational e = v * v / (4 * pt->k);
      if (!best || e < *best) best = e;
    }
    return Exponent(*best);
  }
  if (const auto* ex = std::get_if<ExtensionAtom>(&a)) {
    if (ex->ext->valuation) return ex->ext->valuation(ex->args);
    return Exponent(0);
  }
  auto p = factor_atom(a, Rational(0));
  if (!p) return Exponent(0);
  return Exponent(p->shift);
}

QSeries expand_atom(const ProductAtom& a, Exponent depth) {
  validate_atom(a);
  if (std::holds_alternative<Theta2Atom>(a)) return theta2_sum(depth);
  if (std::holds_alternative<Theta3Atom>(a)) return theta3_sum(depth);
  if (const auto* pt = std::get_if<PartialThetaAtom>(&a)) return partial_theta({pt->j, pt->k, pt->alternating}, depth);
  if (const auto* ex = std::get_if<ExtensionAtom>(&a)) return ex->ext->expand(ex->args, depth);
  if (atom_is_finite(a)) {
    // exact polynomial; span large enough to keep every factor
    auto p = factor_atom(a, Rational(0));
    Rational span = 1;
    if (const auto* ph = std::get_if<PochhammerAtom>(&a))
      span = abs(ph->r) + ph->base * (*ph->length + 1) + 1;
    p = factor_atom(a, span);
    normalize_factors(p->factors);
    return expand_factored_impl(*p, depth, true);
  }
  Exponent v = atom_valuation(a);
  auto p = factor_atom(a, (depth - v).to_rational());
  return expand_factored(*p, depth);
}

// ---- expression evaluation ----

namespace {

Exponent valuation(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Atom: return atom_valuation(e.atom);
    case Expr::Kind::Number: return Exponent(0);
    case Expr::Kind::Add:
    case Expr::Kind::Sub: return min(valuation(*e.args[0]), valuation(*e.args[1]));
    case Expr::Kind::Mul: return valuation(*e.args[0]) + valuation(*e.args[1]);
    case Expr::Kind::Div: return valuation(*e.args[0]) - valuation(*e.args[1]);
    case Expr::Kind::Pow: return valuation(*e.args[0]) * Exponent(e.power);
    case Expr::Kind::Neg:
    case Expr::Kind::TauShift: return valuation(*e.args[0]);
    case Expr::Kind::Subst: return valuation(*e.args[0]) * Exponent(e.number);
    case Expr::Kind::Dissect: {
      Exponent v = (valuation(*e.args[0]) - Exponent(e.residue)) / Exponent(e.power);
      return Exponent(v.floor());
    }
  }
  return Exponent(0);
}

struct ChainFactor {
  const Expr* node;
  std::int64_t power;
};

// Flatten products, quotients and integer powers into a factor list.
void flatten(const Expr& e, std::int64_t power, Rational& scalar, std::vector<ChainFactor>& out) {
  switch (e.kind) {
    case Expr::Kind::Mul:
      flatten(*e.args[0], power, scalar, out);
      flatten(*e.args[1], power, scalar, out);
      return;
    case Expr::Kind::Div:
      flatten(*e.args[0], power, scalar, out);
      flatten(*e.args[1], -power, scalar, out);
      return;
    case Expr::Kind::Pow:
      flatten(*e.args[0], power * e.power, scalar, out);
      return;
    case Expr::Kind::Neg:
      if (power % 2 != 0) scalar = -scalar;
      flatten(*e.args[0], power, scalar, out);
      return;
    case Expr::Kind::Number: {
      if (e.number == 0) {
        if (power < 0) throw DomainError("division by zero");
        if (power > 0) scalar = 0;
        return;
      }
      Rational b = power < 0 ? Rational(1 / e.number) : e.number;
      for (std::int64_t k = 0; k < (power < 0 ? -power : power); ++k) scalar *= b;
      return;
    }
    default:
      out.push_back({&e, power});
  }
}

QSeries eval(const Expr& e, Exponent need);

QSeries eval_chain(const Expr& e, Exponent need) {
  Rational scalar = 1;
  std::vector<ChainFactor> chain;
  flatten(e, 1, scalar, chain);
  if (scalar == 0) return QSeries::zero();

  FactoredProduct mono;
  bool mono_infinite = false;
  Exponent v_mono(0);
  struct General {
    const Expr* node;
    std::int64_t power;
    Exponent v;
  };
  std::vector<General> general;
  std::vector<std::pair<const ProductAtom*, std::int64_t>> mono_atoms;
  for (const auto& f : chain) {
    if (f.node->kind == Expr::Kind::Atom && factor_atom(f.node->atom, Rational(0))) {
      validate_atom(f.node->atom);
      mono_atoms.emplace_back(&f.node->atom, f.power);
      if (!atom_is_finite(f.node->atom)) mono_infinite = true;
      v_mono += atom_valuation(f.node->atom) * Exponent(f.power);
    } else {
      general.push_back({f.node, f.power, valuation(*f.node)});
    }
  }
  Exponent total = v_mono;
  for (const auto& g : general) total += g.v * Exponent(g.power);

  QSeries result = QSeries::constant(scalar);
  if (!mono_atoms.empty()) {
    Exponent depth_mono = need - (total - v_mono);
    // factors beyond this span cannot reach below the depth
    Rational span = (depth_mono - v_mono).to_rational() + 1;
    if (span < 1) span = 1;
    for (const auto& [atom, power] : mono_atoms) {
      Rational sp = span;
      if (const auto* ph = std::get_if<PochhammerAtom>(atom); ph && ph->length)
        sp = abs(ph->r) + ph->base * (*ph->length + 1) + span;
      auto p = factor_atom(*atom, sp);
      Rational c = 1;
      for (std::int64_t k = 0; k < (power < 0 ? -power : power); ++k) c *= p->coeff;
      if (c == 0) {
        if (power < 0) throw DomainError("division by a zero product");
        return QSeries::zero();
      }
      mono.coeff *= power < 0 ? Rational(1 / c) : c;
      mono.shift += p->shift * power;
      for (auto fct : p->factors) {
        fct.mult *= power;
        mono.factors.push_back(fct);
      }
    }
    normalize_factors(mono.factors);
    bool exact = !mono_infinite;
    if (mono_infinite) {
      // cancelled infinite factors leave an exact result
      exact = mono.factors.empty();
    }
    if (exact) {
      bool poly = std::all_of(mono.factors.begin(), mono.factors.end(), [](const LinearFactor& f) { return f.mult > 0; });
      if (poly) {
        result = result * expand_factored_impl(mono, depth_mono, true);
      } else {
        result = result * expand_factored_impl(mono, depth_mono, false);
      }
    } else {
      result = result * expand_factored_impl(mono, depth_mono, false);
    }
  }
  for (const auto& g : general) {
    Exponent others = total - g.v * Exponent(g.power);
    Exponent n_f = need - others;
    const std::int64_t m = g.power;
    if (m > 0) {
      Exponent n_g = n_f - Exponent(m - 1) * g.v;
      QSeries s = eval(*g.node, n_g);
      result = result * pow(s, m);
    } else {
      const std::int64_t am = -m;
      Exponent n_g = n_f + Exponent(am + 1) * g.v;
      QSeries s = eval(*g.node, n_g);
      QSeries h = pow(s, am);
      if (h.empty()) throw DomainError("division by a series with no known nonzero coefficient");
      if (h.is_exact() && h.size() > 1)
        result = result * invert(h, n_f);
      else
        result = result * invert(h);
    }
  }
  return result;
}

QSeries eval(const Expr& e, Exponent need) {
  switch (e.kind) {
    case Expr::Kind::Number: return e.number == 0 ? QSeries::zero() : QSeries::constant(e.number);
    case Expr::Kind::Atom: return expand_atom(e.atom, need);
    case Expr::Kind::Add: return eval(*e.args[0], need) + eval(*e.args[1], need);
    case Expr::Kind::Sub: return eval(*e.args[0], need) - eval(*e.args[1], need);
    case Expr::Kind::Neg:
    case Expr::Kind::Mul:
    case Expr::Kind::Div:
    case Expr::Kind::Pow: return eval_chain(e, need);
    case Expr::Kind::Subst: {
      Exponent m(e.number);
      return substitute_power(eval(*e.args[0], need / m), m);
    }
    case Expr::Kind::TauShift: return tau_shift(eval(*e.args[0], need));
    case Expr::Kind::Dissect: {
      Exponent inner = need * Exponent(e.power) + Exponent(e.residue);
      return dissect(eval(*e.args[0], inner), e.power, e.residue);
    }
  }
  throw DomainError("unknown expression node");
}

}  // namespace

QSeries expand(const Expr& e, Exponent depth) {
  static const std::int64_t slacks[] = {0, 1, 4, 16, 64};
  for (std::int64_t slack : slacks) {
    QSeries s = eval(e, depth + Exponent(slack));
    if (!s.trunc()) return s;
    if (*s.trunc() >= depth) return s.truncated(depth);
  }
  throw TruncationError("depth underflow: cannot reach q^" + depth.to_string());
}

QSeries expand(std::string_view text, Exponent depth, const Registry& registry) {
  return expand(*parse(text, registry), depth);
}

// ---- printing ----

std::size_t count_atoms(const Expr& e) {
  std::size_t n = e.kind == Expr::Kind::Atom ? 1 : 0;
  for (const auto& a : e.args) n += count_atoms(*a);
  return n;
}

std::string to_string(const ProductAtom& a) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, PochhammerAtom>)
          return "P(" + std::string(x.sign > 0 ? "+" : "-") + x.r.get_str() + ";" + x.base.get_str() + ";" +
                 (x.length ? std::to_string(*x.length) : std::string("inf")) + ")";
        else if constexpr (std::is_same_v<T, JAtom>)
          return "J(" + std::to_string(x.m) + ")";
        else if constexpr (std::is_same_v<T, JamAtom>)
          return "Jam(" + std::to_string(x.a) + "," + std::to_string(x.m) + ")";
        else if constexpr (std::is_same_v<T, GenEtaAtom>)
          return "geta(" + std::to_string(x.delta) + ";" + std::to_string(x.g) + ")";
        else if constexpr (std::is_same_v<T, EtaAtom>)
          return "eta";
        else if constexpr (std::is_same_v<T, WeberAtom>)
          return std::string("weber(") + (x.kind == WeberKind::f ? "f" : x.kind == WeberKind::f1 ? "f1" : "f2") + ")";
        else if constexpr (std::is_same_v<T, Theta2Atom>)
          return "theta2";
        else if constexpr (std::is_same_v<T, Theta3Atom>)
          return "theta3";
        else if constexpr (std::is_same_v<T, PartialThetaAtom>)
          return std::string(x.alternating ? "dg(" : "dtheta(") + x.j.get_str() + "," + x.k.get_str() + ")";
        else if constexpr (std::is_same_v<T, QPowAtom>)
          return "qpow(" + x.r.get_str() + ")";
        else if constexpr (std::is_same_v<T, ConstAtom>)
          return x.c.get_str();
        else
          return x.ext->name + (x.ext->takes_arguments ? "(" + x.args + ")" : std::string());
      },
      a);
}

std::string to_string(const Expr& e) {
  auto wrap = [](const Expr& x) { return "(" + to_string(x) + ")"; };
  switch (e.kind) {
    case Expr::Kind::Atom: return to_string(e.atom);
    case Expr::Kind::Number: return e.number.get_str();
    case Expr::Kind::Add: return wrap(*e.args[0]) + "+" + wrap(*e.args[1]);
    case Expr::Kind::Sub: return wrap(*e.args[0]) + "-" + wrap(*e.args[1]);
    case Expr::Kind::Mul: return wrap(*e.args[0]) + "*" + wrap(*e.args[1]);
    case Expr::Kind::Div: return wrap(*e.args[0]) + "/" + wrap(*e.args[1]);
    case Expr::Kind::Pow: return wrap(*e.args[0]) + "^" + std::to_string(e.power);
    case Expr::Kind::Neg: return "-" + wrap(*e.args[0]);
    case Expr::Kind::Subst: return "subst(" + to_string(*e.args[0]) + ";" + e.number.get_str() + ")";
    case Expr::Kind::TauShift: return "tshift(" + to_string(*e.args[0]) + ")";
    case Expr::Kind::Dissect:
      return "dissect(" + to_string(*e.args[0]) + ";" + std::to_string(e.power) + ";" + std::to_string(e.residue) + ")";
  }
  return "";
}

}  // namespace nahmlab
