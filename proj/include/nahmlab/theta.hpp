#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nahmlab/series.hpp"

namespace nahmlab {

struct PartialThetaSpec {
  Rational j;
  Rational k;
  bool alternating = false;  // adds the sign (-1)^n
};

// sum over n in Z of [(-1)^n] (2kn+j) q^((2kn+j)^2/(4k)), exponents below depth
QSeries partial_theta(const PartialThetaSpec& spec, Exponent depth);
inline QSeries dtheta(const Rational& j, const Rational& k, Exponent depth) { return partial_theta({j, k, false}, depth); }
inline QSeries dg(const Rational& j, const Rational& k, Exponent depth) { return partial_theta({j, k, true}, depth); }

// sum over n in Z of [(-1)^n] q^(a n^2 + b n + c), a > 0
QSeries quadratic_theta(const Rational& a, const Rational& b, const Rational& c, bool alternating, Exponent depth);

// sum over n >= 0 of q^(a n^2 + b n) / (q;q)_(m n + s)
QSeries rogers_sum(std::int64_t a, std::int64_t b, std::int64_t m, std::int64_t s, Exponent depth);

// sum over n = a (mod m) of n q^(n^2)
QSeries theta_residue_class(std::int64_t a, std::int64_t m, Exponent depth);

// sum over n in Z of (alpha n + beta) q^(a n^2 + b n), a > 0
QSeries linear_theta(const Rational& alpha, const Rational& beta, const Rational& a, const Rational& b, Exponent depth);

// theta_2 = sum q^((n+1/2)^2), theta_3 = sum q^(n^2) as direct sums
QSeries theta2_sum(Exponent depth);
QSeries theta3_sum(Exponent depth);

// sum over n of psi(n) n q^(n^2) for the two odd characters mod 5 taking
// psi(2) = i (which = 0) or psi(2) = -i (which = 1)
FracSeries<Gauss> character_theta(int which, Exponent depth);

// (3,5) minimal-model character ch^{r,s}, (r,s) in {1,2}^2
QSeries minimal_model_char(int r, int s, Exponent depth);
// Z_1..Z_4 from the Rogers-type sums, W_1 = theta_3/eta, W_2 = theta_2/eta
QSeries z_char(int i, Exponent depth);
QSeries w_char(int i, Exponent depth);

struct RelationResult {
  std::string id;
  std::string params;
  Exponent depth;
  bool pass = false;
  std::string ring;
  std::optional<std::string> mismatch;
};

nlohmann::json to_json(const RelationResult& r);

// Vanishing, symmetry and dissection identities plus the T-shift laws of the
// partial thetas for all j on the grid 0 <= j <= 2k (step 1/2).
std::vector<RelationResult> check_theta_relations(const Rational& k, Exponent depth, mpfr_prec_t prec = 128);

}  // namespace nahmlab
