// Command-line front end: suite verification and the single-shot computations.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nahmlab/asymptotics.hpp"
#include "nahmlab/modular.hpp"
#include "nahmlab/nahm.hpp"
#include "nahmlab/products.hpp"
#include "nahmlab/registry.hpp"
#include "nahmlab/suite.hpp"
#include "nahmlab/transform.hpp"

using namespace nahmlab;

namespace {

struct Globals {
  std::string depth;
  std::string ring = "rational";
  mpfr_prec_t prec = 0;  // 0: command default
  std::string format = "text";
  int jobs = 0;
  bool deep = false;
};

Exponent depth_or(const Globals& g, Exponent fallback) {
  return g.depth.empty() ? fallback : parse_exponent(g.depth);
}

mpfr_prec_t prec_or(const Globals& g, mpfr_prec_t fallback) { return g.prec > 0 ? g.prec : fallback; }

bool json_out(const Globals& g) { return g.format == "json"; }

template <class R>
void print_series(const FracSeries<R>& s, const Globals& g) {
  if (json_out(g))
    std::cout << to_json(s).dump() << "\n";
  else
    std::cout << to_text(s) << "\n";
}

void print_series_in_ring(const QSeries& s, const Globals& g, mpfr_prec_t prec) {
  if (g.ring == "rational") return print_series(s, g);
  if (g.ring == "root5") return print_series(embed<Root5>(s), g);
  if (g.ring == "gauss") return print_series(embed<Gauss>(s), g);
  return print_series(embed<BigComplex>(s, prec), g);
}

int cmd_verify(const Globals& g, std::vector<std::string> suites, bool all, bool list) {
  if (list) {
    for (const auto& s : list_suites()) std::cout << s << "\n";
    return 0;
  }
  if (all) suites = list_suites();
  if (suites.empty()) throw DomainError("verify needs a suite id, --all or --list");
  RunOptions opt;
  if (!g.depth.empty()) opt.depth = parse_exponent(g.depth);
  if (g.ring != "rational") opt.ring = g.ring;
  opt.prec = prec_or(g, 192);
  opt.deep = g.deep;
  opt.jobs = g.jobs;
  bool ok = true;
  nlohmann::json reports = nlohmann::json::array();
  for (const auto& id : suites) {
    VerificationReport r = run_suite(id, opt);
    ok = ok && r.ok();
    if (json_out(g))
      reports.push_back(to_json(r));
    else
      std::cout << to_text(r);
  }
  if (json_out(g)) std::cout << (reports.size() == 1 ? reports[0] : reports).dump(2) << "\n";
  return ok ? 0 : 1;
}

int cmd_expand(const Globals& g, const std::string& text) {
  QSeries s = expand(text, depth_or(g, 10), default_registry());
  print_series_in_ring(s, g, prec_or(g, 64));
  return 0;
}

int cmd_nahm(const Globals& g, const std::string& matrix, const std::string& b, const std::string& c, bool dual,
             bool minimum, bool triple) {
  NahmTriple t{parse_matrix(matrix), parse_vector(b), parse_rational(c)};
  validate(t);
  if (dual) t = dual_triple(t);
  if (triple) {
    std::string bs;
    for (const auto& x : t.B) bs += (bs.empty() ? "" : ",") + to_string(x);
    if (json_out(g))
      std::cout << nlohmann::json{{"A", t.A.to_string()}, {"B", bs}, {"C", to_string(t.C)}}.dump(2) << "\n";
    else
      std::cout << "A = " << t.A.to_string() << "\nB = " << bs << "\nC = " << to_string(t.C) << "\n";
    return 0;
  }
  if (minimum) {
    std::cout << to_string(minimal_exponent(t)) << "\n";
    return 0;
  }
  print_series(nahm_sum(t, depth_or(g, 10)), g);
  return 0;
}

int cmd_tba(const Globals& g, const std::string& matrix, const std::string& tol) {
  TbaOptions opt;
  opt.prec = prec_or(g, 256);
  if (!tol.empty()) opt.tol = BigFloat::from_string(tol, opt.prec);
  TbaSolution s = solve_tba(parse_matrix(matrix), opt);
  if (json_out(g)) {
    std::cout << to_json(s).dump(2) << "\n";
  } else {
    for (std::size_t i = 0; i < s.Q.size(); ++i) {
      std::cout << "Q" << i + 1 << " = " << s.Q[i].to_string(40);
      if (s.exact[i]) std::cout << "  = " << to_string(*s.exact[i]);
      std::cout << "\n";
    }
    std::cout << "iterations " << s.iterations << "\n";
  }
  return 0;
}

int cmd_obstruction(const Globals& g, const std::string& b) {
  auto v = modularity_obstruction(parse_vector(b));
  if (json_out(g)) {
    std::cout << to_json(v).dump() << "\n";
  } else {
    std::cout << (v.obstructed ? "obstructed" : "candidate") << "  c = " << to_string(v.c);
    if (v.candidate) std::cout << "  C = " << v.candidate->get_str();
    std::cout << "\n";
  }
  return 0;
}

int cmd_transform(const Globals& g, const std::string& name, const std::vector<std::string>& taus,
                  const std::string& tol_text) {
  const mpfr_prec_t p = prec_or(g, 192);
  VVMFDescriptor d = descriptor_by_name(name, depth_or(g, 120), p);
  BigFloat tol = BigFloat::from_string(tol_text, p);
  bool ok = true;
  nlohmann::json out = nlohmann::json::array();
  for (const auto& t : taus) {
    BigComplex tau = parse_tau(t, p);
    for (const auto& r : {check_S(d, tau, tol, p), check_T(d, tau, tol, p)}) {
      ok = ok && r.pass;
      if (json_out(g))
        out.push_back(to_json(r));
      else
        std::cout << (r.pass ? "pass" : "fail") << "  " << r.descriptor << " " << r.check << " at " << r.tau
                  << "  residual " << r.residual.to_string(6) << "\n";
    }
  }
  if (json_out(g)) std::cout << out.dump(2) << "\n";
  return ok ? 0 : 1;
}

int cmd_wronskian(const Globals& g, const std::string& basis, const std::string& serre_weight, bool normalized) {
  std::function<std::vector<QSeries>(Exponent)> comps;
  if (basis == "tildeF" || basis == "gbasis") {
    const bool gb = basis == "gbasis";
    comps = [gb](Exponent d) {
      std::vector<QSeries> v;
      for (int i = 1; i <= 6; ++i) v.push_back(gb ? g_basis(i, d) : tilde_f(i, d));
      return v;
    };
  } else {
    auto exprs = split_args(basis, ";");
    comps = [exprs](Exponent d) {
      std::vector<QSeries> v;
      for (const auto& e : exprs) v.push_back(expand(e, d, default_registry()));
      return v;
    };
  }
  const Exponent depth = depth_or(g, 10);
  WronskianResult w;
  if (serre_weight.empty()) {
    w = wronskian_to_depth(comps, depth, normalized);
  } else {
    // Serre rows: build directly at a generous component depth
    Rational k = parse_rational(serre_weight);
    QSeries v = wronskian({comps(depth + Exponent(4)), k});
    w.value = normalized ? normalize_leading(v) : v;
    w.order = vanishing_order(v);
    w.identically_zero = v.empty();
  }
  if (json_out(g)) {
    std::cout << nlohmann::json{{"order", w.order.order.to_string()},
                                {"zero-to-truncation", w.order.zero_to_truncation},
                                {"series", to_json(w.value)}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << "order " << w.order.order.to_string() << (w.order.zero_to_truncation ? " (lower bound)" : "") << "\n";
    std::cout << to_text(w.value) << "\n";
  }
  return 0;
}

int cmd_conjecture(const Globals& g, int n) {
  ConjectureReport r = conjecture_check(n, depth_or(g, 40));
  if (json_out(g)) {
    std::cout << to_json(r).dump(2) << "\n";
  } else {
    std::cout << (r.pass ? "pass" : "fail (falsification)") << "  n = " << n << "  shift " << r.a.get_str()
              << "  depth " << r.depth.to_string() << "\n  rhs " << r.rhs_description << "\n";
    if (r.mismatch) std::cout << "  first difference at q^" << r.mismatch->to_string() << ": " << r.lhs_coeff << " vs "
                              << r.rhs_coeff << "\n";
  }
  return r.pass ? 0 : 1;
}

int cmd_eisenstein_wronskian(const Globals& g) {
  EisensteinWronskianReport r = eisenstein_wronskian_check(depth_or(g, 30));
  if (json_out(g))
    std::cout << to_json(r).dump(2) << "\n";
  else
    std::cout << (r.pass ? "pass" : "fail") << "  order " << r.order.order.to_string() << " (expected "
              << r.expected_order.to_string() << ")  identity to q^" << r.depth.to_string() << ": "
              << (r.identity.pass ? "holds" : "differs") << "\n";
  return r.pass ? 0 : 1;
}

int cmd_sturm(const Globals& g, const std::string& weight, std::int64_t level) {
  std::int64_t b = sturm_bound(parse_rational(weight), level);
  if (json_out(g))
    std::cout << nlohmann::json{{"weight", weight}, {"level", level}, {"index", gamma1_index(level)}, {"bound", b}}.dump()
              << "\n";
  else
    std::cout << b << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact q-series identities for tadpole Nahm sums"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", NAHMLAB_VERSION);
  Globals g;
  app.add_option("--depth", g.depth, "truncation depth (q-exponent)");
  app.add_option("--ring", g.ring, "coefficient ring")->check(CLI::IsMember({"rational", "root5", "gauss", "complex"}));
  app.add_option("--prec", g.prec, "working precision in bits");
  app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--jobs", g.jobs, "parallel checks");
  app.add_flag("--deep", g.deep, "use the deep depths of suite checks");

  std::vector<std::string> suites;
  bool all = false, list = false;
  auto* verify = app.add_subcommand("verify", "run identity suites");
  verify->add_option("suites", suites, "suite ids");
  verify->add_flag("--all", all, "every installed suite");
  verify->add_flag("--list", list, "list installed suites");

  std::string expr;
  auto* expand_cmd = app.add_subcommand("expand", "expand a product expression");
  expand_cmd->add_option("expr", expr, "expression")->required();

  std::string matrix = "tadpole:3", bvec = "0,0,0", cval = "0";
  bool dual = false, minimum = false, triple = false;
  auto* nahm = app.add_subcommand("nahm", "expand a Nahm sum");
  nahm->add_option("--matrix,-A", matrix, "tadpole:R, tadpole-inv:R or rows '2,-1;-1,2'");
  nahm->add_option("--B,-B", bvec, "comma list");
  nahm->add_option("--C,-C", cval, "scalar");
  nahm->add_flag("--dual", dual, "use the dual triple");
  nahm->add_flag("--min-exponent", minimum, "print C - B^T A^-1 B / 2 only");
  nahm->add_flag("--triple", triple, "print the (possibly dual) triple instead of the sum");

  std::string tol;
  auto* tba = app.add_subcommand("tba", "solve the TBA system");
  tba->add_option("--matrix,-A", matrix, "matrix");
  tba->add_option("--tol", tol, "residual tolerance");

  std::string bobs;
  auto* obs = app.add_subcommand("obstruction", "asymptotic modularity obstruction for the rank-3 tadpole");
  obs->add_option("--B,-B", bobs, "b1,b2,b3")->required();

  std::string family = "weber", ttol = "1e-20";
  std::vector<std::string> taus;
  auto* tr = app.add_subcommand("transform", "S and T residuals of a vector-valued family");
  tr->add_option("--suite", family, "weber, rho1, rho2, rho-tilde, theta, theta:K (K in N + 1/2)");
  tr->add_option("--tau", taus, "points re,im")->required();
  tr->add_option("--tol", ttol, "residual tolerance");

  std::string basis = "tildeF", serre_weight;
  bool normalized = false;
  auto* wr = app.add_subcommand("wronskian", "Wronskian of a basis");
  wr->add_option("--basis", basis, "tildeF, gbasis or expressions separated by ';'");
  wr->add_option("--serre", serre_weight, "use Serre derivatives starting at this weight");
  wr->add_flag("--normalize", normalized, "divide by the leading coefficient");

  int n = 3;
  auto* conj = app.add_subcommand("conjecture", "rank-n tadpole sum against its Wronskian form");
  conj->add_option("--n", n, "rank")->required();

  auto* ew = app.add_subcommand("remark44", "Wronskian of the shifted rank-3 sums against eta^36 (E4^3, E6^2)");

  std::string weight = "2";
  std::int64_t level = 1;
  auto* st = app.add_subcommand("sturm", "Sturm bound for Gamma_1(N)");
  st->add_option("--weight,-k", weight, "weight");
  st->add_option("--level,-N", level, "level")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*verify) return cmd_verify(g, suites, all, list);
    if (*expand_cmd) return cmd_expand(g, expr);
    if (*nahm) return cmd_nahm(g, matrix, bvec, cval, dual, minimum, triple);
    if (*tba) return cmd_tba(g, matrix, tol);
    if (*obs) return cmd_obstruction(g, bobs);
    if (*tr) return cmd_transform(g, family, taus, ttol);
    if (*wr) return cmd_wronskian(g, basis, serre_weight, normalized);
    if (*conj) return cmd_conjecture(g, n);
    if (*ew) return cmd_eisenstein_wronskian(g);
    if (*st) return cmd_sturm(g, weight, level);
  } catch (const ParseError& e) {
    std::cerr << "syntax error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
