#include "nahmlab/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <omp.h>

#include "nahmlab/products.hpp"
#include "nahmlab/registry.hpp"

#ifndef NAHMLAB_VERSION
#define NAHMLAB_VERSION "0.0.0"
#endif
#ifndef NAHMLAB_SUITE_DIR
#define NAHMLAB_SUITE_DIR "suites"
#endif

namespace nahmlab {

namespace {

std::string trim(std::string_view s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string_view::npos) return {};
  std::size_t b = s.find_last_not_of(" \t\r");
  return std::string(s.substr(a, b - a + 1));
}

// position of a top-level "==" (outside parentheses)
std::size_t find_equals(std::string_view s) {
  int depth = 0;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (depth == 0 && s[i] == '=' && s[i + 1] == '=') return i;
  }
  return std::string_view::npos;
}

// Peels "@ N", "deep=N" and "expect=fail" off the end of a check body.
void parse_options(std::string& body, CheckSpec& c, std::size_t line) {
  for (;;) {
    body = trim(body);
    std::size_t sp = body.find_last_of(" \t");
    std::string last = sp == std::string::npos ? body : body.substr(sp + 1);
    std::string rest = sp == std::string::npos ? std::string() : body.substr(0, sp);
    if (last == "expect=fail") {
      c.expect_fail = true;
    } else if (last.starts_with("deep=")) {
      c.deep = parse_exponent(last.substr(5));
    } else if (!rest.empty() && trim(rest).ends_with("@")) {
      c.depth = parse_exponent(last);
      rest = trim(rest);
      rest.pop_back();
    } else if (last.starts_with("@") && last.size() > 1) {
      c.depth = parse_exponent(last.substr(1));
    } else {
      return;
    }
    body = rest;
    if (body.empty()) throw ParseError("check has options but no body", line, 1);
  }
}

CheckSpec parse_check(const std::string& text, std::size_t line) {
  CheckSpec c;
  c.line = line;
  std::size_t colon = text.find(':');
  if (colon == std::string::npos) throw ParseError("expected 'id: check'", line, 1);
  c.id = trim(std::string_view(text).substr(0, colon));
  if (c.id.empty() || c.id.find_first_of(" \t") != std::string::npos)
    throw ParseError("bad check id '" + c.id + "'", line, 1);
  std::string body = trim(std::string_view(text).substr(colon + 1));
  try {
    parse_options(body, c, line);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(e.what(), line, colon + 2);
  }
  if (body.starts_with("builtin ")) {
    c.builtin = true;
    std::string call = trim(std::string_view(body).substr(8));
    std::size_t open = call.find('(');
    if (open == std::string::npos || call.back() != ')') throw ParseError("expected builtin name(args)", line, colon + 2);
    c.name = trim(std::string_view(call).substr(0, open));
    c.args = split_args(std::string_view(call).substr(open + 1, call.size() - open - 2), ";");
    return c;
  }
  std::size_t eq = find_equals(body);
  // unbalanced parentheses: split anyway and let the expression parser report
  if (eq == std::string::npos) eq = body.find("==");
  if (eq == std::string::npos) {
    c.malformed = "expected 'LHS == RHS' on line " + std::to_string(line);
    return c;
  }
  c.lhs = trim(std::string_view(body).substr(0, eq));
  c.rhs = trim(std::string_view(body).substr(eq + 2));
  if (c.lhs.empty() || c.rhs.empty()) c.malformed = "empty side of an identity on line " + std::to_string(line);
  return c;
}

std::string fnv1a(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string coefficient_text(const BigComplex& z) { return z.to_string(); }

template <class R>
CheckOutcome compare_in(const QSeries& a, const QSeries& b, Exponent depth) {
  auto m = compare(embed<R>(a), embed<R>(b), depth);
  CheckOutcome c;
  c.pass = m.equal;
  if (!m.equal) c.mismatch = mismatch_of(m);
  return c;
}

Exponent effective_depth(const SuiteDefinition& s, const CheckSpec& c, const RunOptions& opt) {
  if (opt.depth) return *opt.depth;
  if (opt.deep && c.deep) return *c.deep;
  return c.depth.value_or(s.depth);
}

CheckResult run_check(const SuiteDefinition& s, const CheckSpec& c, const RunOptions& opt) {
  CheckResult r;
  r.id = c.id;
  r.depth = effective_depth(s, c, opt);
  r.expect_fail = c.expect_fail;
  const std::string ring = opt.ring.value_or(s.ring);
  auto t0 = std::chrono::steady_clock::now();
  try {
    CheckOutcome out;
    if (!c.malformed.empty()) throw ParseError(c.malformed, c.line, 1);
    if (c.builtin) {
      const Builtin* b = find_builtin(c.name);
      if (!b) throw DomainError("unknown builtin '" + c.name + "'");
      out = (*b)(c.args, BuiltinContext{r.depth, opt.prec});
    } else {
      out = check_identity(c.lhs, c.rhs, r.depth, ring, opt.prec);
    }
    r.message = out.message;
    r.detail = out.detail;
    if (c.expect_fail) {
      // negative controls pass by failing; the mismatch stays in the report
      r.status = out.pass ? "fail" : "pass";
      if (out.pass) {
        r.mismatch = Mismatch{std::nullopt, "holds", "expected a mismatch"};
      } else {
        r.mismatch = out.mismatch;
      }
    } else {
      r.status = out.pass ? "pass" : "fail";
      if (!out.pass) r.mismatch = out.mismatch ? out.mismatch : Mismatch{std::nullopt, "failed", "pass"};
    }
  } catch (const std::exception& e) {
    r.status = "error";
    r.message = e.what();
  }
  r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace

SuiteDefinition parse_suite(std::string_view text) {
  SuiteDefinition s;
  s.source = std::string(text);
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  std::set<std::string> ids;
  while (std::getline(in, raw)) {
    ++line;
    std::size_t hash = raw.find('#');
    std::string l = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (l.empty()) continue;
    std::size_t sp = l.find_first_of(" \t");
    std::string key = l.substr(0, sp);
    std::string value = sp == std::string::npos ? std::string() : trim(std::string_view(l).substr(sp));
    if (key == "suite") {
      s.id = value;
    } else if (key == "description") {
      s.description = value;
    } else if (key == "depth") {
      try {
        s.depth = parse_exponent(value);
      } catch (const Error& e) {
        throw ParseError(e.what(), line, sp + 2);
      }
    } else if (key == "ring") {
      if (value != "rational" && value != "root5" && value != "gauss" && value != "complex")
        throw ParseError("unknown ring '" + value + "'", line, sp + 2);
      s.ring = value;
    } else {
      CheckSpec c = parse_check(l, line);
      if (!ids.insert(c.id).second) throw ParseError("duplicate check id '" + c.id + "'", line, 1);
      s.checks.push_back(std::move(c));
    }
  }
  if (s.id.empty()) throw ParseError("suite file has no 'suite' line", line, 1);
  return s;
}

std::filesystem::path suite_directory() {
  if (const char* env = std::getenv("NAHMLAB_SUITES"); env && *env) return env;
  return NAHMLAB_SUITE_DIR;
}

std::vector<std::string> list_suites() {
  std::vector<std::string> out;
  std::error_code ec;
  for (const auto& e : std::filesystem::directory_iterator(suite_directory(), ec))
    if (e.path().extension() == ".suite") out.push_back(e.path().stem().string());
  std::sort(out.begin(), out.end());
  return out;
}

SuiteDefinition load_suite(const std::string& id) {
  auto path = suite_directory() / (id + ".suite");
  std::ifstream f(path);
  if (!f) throw DomainError("unknown suite '" + id + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  SuiteDefinition s = parse_suite(ss.str());
  if (s.id != id) throw DomainError("suite file " + path.string() + " declares id '" + s.id + "'");
  return s;
}

CheckOutcome check_identity(const std::string& lhs, const std::string& rhs, Exponent depth, const std::string& ring,
                            mpfr_prec_t prec) {
  const Registry& reg = default_registry();
  auto parse_side = [&](const std::string& text, const char* side) {
    try {
      return parse(text, reg);
    } catch (const ParseError& e) {
      throw Error(std::string(side) + ": " + e.what());
    }
  };
  ExprPtr a = parse_side(lhs, "lhs"), b = parse_side(rhs, "rhs");
  QSeries sa = expand(*a, depth), sb = expand(*b, depth);
  if (ring == "rational") {
    auto m = compare(sa, sb, depth);
    CheckOutcome c;
    c.pass = m.equal;
    if (!m.equal) c.mismatch = mismatch_of(m);
    return c;
  }
  if (ring == "root5") return compare_in<Root5>(sa, sb, depth);
  if (ring == "gauss") return compare_in<Gauss>(sa, sb, depth);
  if (ring == "complex") {
    auto ca = embed<BigComplex>(sa, prec), cb = embed<BigComplex>(sb, prec);
    BigFloat tol = BigFloat::two_pow(-static_cast<long>(prec) + 8, prec);
    auto m = compare_approx(ca, cb, depth, tol);
    CheckOutcome c;
    c.pass = m.equal;
    if (!m.equal)
      c.mismatch = Mismatch{m.exponent ? std::optional(m.exponent->to_string()) : std::nullopt,
                            m.exponent ? coefficient_text(ca.coefficient(*m.exponent)) : "",
                            m.exponent ? coefficient_text(cb.coefficient(*m.exponent)) : ""};
    return c;
  }
  throw DomainError("unknown ring '" + ring + "'");
}

std::string config_hash(const SuiteDefinition& suite, const RunOptions& opt) {
  std::string key = suite.source;
  key += "\nversion=" NAHMLAB_VERSION;
  key += "\ndepth=" + (opt.depth ? opt.depth->to_string() : std::string("-"));
  key += "\nring=" + opt.ring.value_or("-");
  key += "\nprec=" + std::to_string(opt.prec);
  key += std::string("\ndeep=") + (opt.deep ? "1" : "0");
  return fnv1a(key);
}

VerificationReport run_suite(const SuiteDefinition& suite, const RunOptions& opt) {
  VerificationReport rep;
  rep.suite = suite.id;
  rep.version = NAHMLAB_VERSION;
  rep.config_hash = config_hash(suite, opt);
  rep.checks.resize(suite.checks.size());
  const int jobs = opt.jobs > 0 ? opt.jobs : omp_get_max_threads();
  const auto n = static_cast<std::ptrdiff_t>(suite.checks.size());
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    rep.checks[static_cast<std::size_t>(i)] = run_check(suite, suite.checks[static_cast<std::size_t>(i)], opt);
  std::sort(rep.checks.begin(), rep.checks.end(), [](const CheckResult& a, const CheckResult& b) { return a.id < b.id; });
  return rep;
}

VerificationReport run_suite(const std::string& id, const RunOptions& opt) { return run_suite(load_suite(id), opt); }

bool VerificationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.status == "pass"; });
}

std::size_t VerificationReport::passed() const {
  return static_cast<std::size_t>(
      std::count_if(checks.begin(), checks.end(), [](const CheckResult& c) { return c.status == "pass"; }));
}

nlohmann::json to_json(const VerificationReport& r, bool timing) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) {
    nlohmann::json j{{"id", c.id}, {"status", c.status}, {"depth", c.depth.to_string()}};
    if (timing) j["elapsed-ms"] = c.elapsed_ms;
    if (c.expect_fail) j["expect"] = "fail";
    if (c.mismatch) {
      j["mismatch"] = {{"exponent", c.mismatch->exponent ? nlohmann::json(*c.mismatch->exponent) : nlohmann::json()},
                       {"lhs", c.mismatch->lhs},
                       {"rhs", c.mismatch->rhs}};
    }
    if (!c.message.empty()) j["message"] = c.message;
    checks.push_back(std::move(j));
  }
  return {{"suite", r.suite}, {"version", r.version}, {"config-hash", r.config_hash}, {"checks", checks}};
}

std::string to_text(const VerificationReport& r) {
  std::ostringstream out;
  out << "suite " << r.suite << " (" << r.passed() << "/" << r.checks.size() << " pass, config " << r.config_hash
      << ")\n";
  for (const auto& c : r.checks) {
    char ms[32];
    std::snprintf(ms, sizeof ms, "%.1f", c.elapsed_ms);
    out << "  " << c.status << "  " << c.id << "  @" << c.depth.to_string() << "  " << ms << " ms";
    if (c.expect_fail) out << "  (negative control)";
    if (c.mismatch && (c.status != "pass" || c.expect_fail)) {
      out << "  at " << c.mismatch->exponent.value_or("-") << ": " << c.mismatch->lhs << " vs " << c.mismatch->rhs;
    }
    if (!c.message.empty()) out << "  " << c.message;
    out << "\n";
  }
  return out.str();
}

}  // namespace nahmlab
