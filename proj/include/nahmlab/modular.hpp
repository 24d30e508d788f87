#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nahmlab/series.hpp"

namespace nahmlab {

enum class EisensteinKind { E2, E4, E6 };

// Normalized with constant term 1, exponents below depth.
QSeries eisenstein(EisensteinKind which, Exponent depth);
std::optional<EisensteinKind> parse_eisenstein(std::string_view name);

// D - (k/12) E2 f, with E2 expanded as far as f allows.
QSeries serre(const QSeries& f, const Rational& k);

struct WronskianSpec {
  std::vector<QSeries> components;
  // nullopt: rows are D^r f; otherwise iterated Serre derivatives starting at this weight
  std::optional<Rational> serre_weight;
};

// Determinant of the l x l matrix of derivatives, by expansion in minors
// (memoized over column subsets).
QSeries wronskian(const WronskianSpec& spec);
// Divides by the leading coefficient; an all-zero determinant is returned unchanged.
QSeries normalize_leading(const QSeries& s);

struct WronskianResult {
  QSeries value;        // normalized when requested
  Rational leading{0};  // coefficient that was divided out (0 if identically zero)
  VanishingOrder order;
  bool identically_zero = false;
};

// Builds the components at growing depth until the determinant is known
// below `depth`.
WronskianResult wronskian_to_depth(const std::function<std::vector<QSeries>(Exponent)>& components, Exponent depth,
                                   bool normalized);

// Shift exponents lambda_i of the six rank-3 tadpole sums.
const std::array<Rational, 6>& tadpole3_shifts();
// q^(lambda_i) F_i for i = 1..6
QSeries tilde_f(int i, Exponent depth);
// (F1+F5, F1-F5, F4+F6, F4-F6, F2, F3) shifted; i = 1..6
QSeries g_basis(int i, Exponent depth);

struct IdentityCheck {
  std::string id;
  Exponent depth;
  bool pass = false;
  std::optional<Exponent> mismatch;  // first differing exponent
  std::string lhs_coeff, rhs_coeff;
  std::string note;
};

nlohmann::json to_json(const IdentityCheck& c);

struct EisensteinWronskianReport {
  Exponent depth;
  VanishingOrder order;
  Exponent expected_order;
  bool order_ok = false;
  IdentityCheck identity;
  bool pass = false;
};

// W_D(tildeF_1..tildeF_6): order 3/2 and, after normalizing, equal to
// eta^36 (70027513 E4^3 - 64135033 E6^2) / 5892480.
nlohmann::json to_json(const EisensteinWronskianReport& r);
EisensteinWronskianReport eisenstein_wronskian_check(Exponent depth);

struct ConjectureReport {
  int n = 0;
  Rational a{0};  // the exponent shift a_k
  Exponent depth;
  bool pass = false;
  std::optional<Exponent> mismatch;
  std::string lhs_coeff, rhs_coeff;
  std::string rhs_description;
};

// Rank-n tadpole sum at B = 0, shifted by a, against the Weber/eta prefactor
// times a normalized Wronskian of partial thetas (n odd) or quadratic thetas (n even).
nlohmann::json to_json(const ConjectureReport& r);
Rational conjecture_shift(int n);
ConjectureReport conjecture_check(int n, Exponent depth);

// Gamma_1(N) index without the quotient by -I.
std::int64_t gamma1_index(std::int64_t level);
// 1 + floor((k/12) * index / 2)
std::int64_t sturm_bound(const Rational& weight, std::int64_t level);

}  // namespace nahmlab
