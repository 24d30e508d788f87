#include "nahmlab/registry.hpp"

#include <cctype>

#include "nahmlab/modular.hpp"
#include "nahmlab/nahm.hpp"
#include "nahmlab/theta.hpp"

namespace nahmlab {

std::vector<std::string> split_args(std::string_view text, std::string_view seps) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  auto flush = [&] {
    std::size_t a = cur.find_first_not_of(" \t\n");
    std::size_t b = cur.find_last_not_of(" \t\n");
    out.push_back(a == std::string::npos ? std::string() : cur.substr(a, b - a + 1));
    cur.clear();
  };
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (depth == 0 && seps.find(c) != std::string_view::npos) {
      flush();
      continue;
    }
    cur.push_back(c);
  }
  flush();
  if (out.size() == 1 && out[0].empty()) out.clear();
  return out;
}

std::int64_t parse_int(std::string_view text) {
  Rational r = parse_rational(text);
  if (r.get_den() != 1 || !r.get_num().fits_slong_p()) throw DomainError("expected an integer, got '" + std::string(text) + "'");
  return r.get_num().get_si();
}

namespace {

std::vector<std::string> expect_args(std::string_view args, std::size_t n, const char* name, std::string_view seps = ",") {
  auto v = split_args(args, seps);
  if (v.size() != n)
    throw DomainError(std::string(name) + " takes " + std::to_string(n) + " argument" + (n == 1 ? "" : "s"));
  return v;
}

struct Chi0Args {
  std::vector<Rational> shifts;
  std::vector<int> signs;
};

Chi0Args chi0_args(std::string_view args) {
  auto parts = split_args(args, "|");
  if (parts.empty() || parts.size() > 2) throw DomainError("chi0 takes shifts and optional signs");
  Chi0Args a;
  a.shifts = parse_vector(parts[0]);
  if (a.shifts.empty()) throw DomainError("chi0 needs at least one shift");
  if (parts.size() == 2) {
    for (const auto& s : split_args(parts[1], ",")) {
      if (s == "+")
        a.signs.push_back(1);
      else if (s == "-")
        a.signs.push_back(-1);
      else
        throw DomainError("chi0 signs must be + or -");
    }
    if (a.signs.size() != a.shifts.size()) throw DomainError("chi0 needs one sign per shift");
  }
  return a;
}

NahmTriple chi0_triple(const Chi0Args& a) {
  return {tadpole(static_cast<int>(a.shifts.size())), a.shifts, Rational(0)};
}

NahmTriple nahm_args(std::string_view args) {
  auto v = expect_args(args, 3, "nahm", "|");
  NahmTriple t{parse_matrix(v[0]), parse_vector(v[1]), parse_rational(v[2])};
  validate(t);
  return t;
}

struct HsumArgs {
  std::int64_t a, b, m, s;
};

HsumArgs hsum_args(std::string_view args) {
  auto v = expect_args(args, 4, "hsum");
  HsumArgs h{parse_int(v[0]), parse_int(v[1]), parse_int(v[2]), parse_int(v[3])};
  if (h.a <= 0 || h.m < 0 || h.s < 0 || h.a + h.b < 0) throw DomainError("hsum needs a > 0, m, s >= 0, a + b >= 0");
  return h;
}

int index_arg(std::string_view args, int lo, int hi, const char* name) {
  auto v = expect_args(args, 1, name);
  std::int64_t i = parse_int(v[0]);
  if (i < lo || i > hi)
    throw DomainError(std::string(name) + " index must be " + std::to_string(lo) + ".." + std::to_string(hi));
  return static_cast<int>(i);
}

std::pair<int, int> ch35_args(std::string_view args) {
  auto v = expect_args(args, 2, "ch35");
  std::int64_t r = parse_int(v[0]), s = parse_int(v[1]);
  if (r < 1 || r > 2 || s < 1 || s > 2) throw DomainError("ch35 needs r, s in {1,2}");
  return {static_cast<int>(r), static_cast<int>(s)};
}

std::pair<std::int64_t, std::int64_t> tres_args(std::string_view args) {
  auto v = expect_args(args, 2, "tres");
  std::int64_t a = parse_int(v[0]), m = parse_int(v[1]);
  if (m <= 0) throw DomainError("tres needs a positive modulus");
  return {a, m};
}

std::array<Rational, 4> lsum_args(std::string_view args) {
  auto v = expect_args(args, 4, "lsum");
  std::array<Rational, 4> r{parse_rational(v[0]), parse_rational(v[1]), parse_rational(v[2]), parse_rational(v[3])};
  if (r[2] <= 0) throw DomainError("lsum needs a > 0");
  return r;
}

Exponent floor_exponent(const Rational& r) { return Exponent(floor(r)); }

Registry build() {
  Registry reg;
  reg.add({"nahm", true, [](std::string_view a) { nahm_args(a); },
           [](std::string_view a, Exponent d) { return nahm_sum(nahm_args(a), d); },
           [](std::string_view a) { return floor_exponent(minimal_exponent(nahm_args(a))); }});
  reg.add({"chi0", true, [](std::string_view a) { chi0_args(a); },
           [](std::string_view a, Exponent d) {
             auto c = chi0_args(a);
             return chi0(c.shifts, d, c.signs);
           },
           [](std::string_view a) { return floor_exponent(minimal_exponent(chi0_triple(chi0_args(a)))); }});
  reg.add({"hsum", true, [](std::string_view a) { hsum_args(a); },
           [](std::string_view a, Exponent d) {
             auto h = hsum_args(a);
             return rogers_sum(h.a, h.b, h.m, h.s, d);
           },
           [](std::string_view) { return Exponent(0); }});
  reg.add({"Z", true, [](std::string_view a) { index_arg(a, 1, 4, "Z"); },
           [](std::string_view a, Exponent d) { return z_char(index_arg(a, 1, 4, "Z"), d); },
           [](std::string_view) { return Exponent(-1, 40); }});
  reg.add({"W", true, [](std::string_view a) { index_arg(a, 1, 2, "W"); },
           [](std::string_view a, Exponent d) { return w_char(index_arg(a, 1, 2, "W"), d); },
           [](std::string_view) { return Exponent(-1, 24); }});
  reg.add({"ch35", true, [](std::string_view a) { ch35_args(a); },
           [](std::string_view a, Exponent d) {
             auto [r, s] = ch35_args(a);
             return minimal_model_char(r, s, d);
           },
           [](std::string_view) { return Exponent(-1, 24); }});
  reg.add({"tres", true, [](std::string_view a) { tres_args(a); },
           [](std::string_view a, Exponent d) {
             auto [r, m] = tres_args(a);
             return theta_residue_class(r, m, d);
           },
           [](std::string_view) { return Exponent(0); }});
  reg.add({"lsum", true, [](std::string_view a) { lsum_args(a); },
           [](std::string_view a, Exponent d) {
             auto r = lsum_args(a);
             return linear_theta(r[0], r[1], r[2], r[3], d);
           },
           [](std::string_view a) {
             auto r = lsum_args(a);
             return floor_exponent(-r[3] * r[3] / (4 * r[2]));
           }});
  for (const char* e : {"E2", "E4", "E6"}) {
    EisensteinKind k = *parse_eisenstein(e);
    reg.add({e, false, nullptr, [k](std::string_view, Exponent d) { return eisenstein(k, d); },
             [](std::string_view) { return Exponent(0); }});
  }
  reg.add({"tildeF", true, [](std::string_view a) { index_arg(a, 1, 6, "tildeF"); },
           [](std::string_view a, Exponent d) { return tilde_f(index_arg(a, 1, 6, "tildeF"), d); },
           [](std::string_view a) {
             return Exponent(tadpole3_shifts()[static_cast<std::size_t>(index_arg(a, 1, 6, "tildeF") - 1)]);
           }});
  reg.add({"gbasis", true, [](std::string_view a) { index_arg(a, 1, 6, "gbasis"); },
           [](std::string_view a, Exponent d) { return g_basis(index_arg(a, 1, 6, "gbasis"), d); },
           [](std::string_view) { return Exponent(-7, 80); }});
  return reg;
}

}  // namespace

const Registry& default_registry() {
  static const Registry reg = build();
  return reg;
}

}  // namespace nahmlab
