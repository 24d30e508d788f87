#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nahmlab/nahm.hpp"
#include "nahmlab/rings.hpp"

namespace nahmlab {

struct TbaOptions {
  mpfr_prec_t prec = 256;
  std::optional<BigFloat> tol;   // default 2^(-prec + 16)
  int max_iterations = 100000;
  std::vector<BigFloat> start;   // default Q_i = 1/2
};

struct TbaSolution {
  std::vector<BigFloat> Q;
  std::vector<BigFloat> residuals;  // |1 - Q_i - prod Q_j^(A_ij)|
  int iterations = 0;
  std::vector<std::optional<Root5>> exact;  // recognized closed forms
};

nlohmann::json to_json(const TbaSolution& s);

// Solves 1 - Q_i = prod_j Q_j^(A_ij) in (0,1)^r. Iterates the equivalent
// system log Q = A^-1 log(1 - Q) with step 1/2. Throws ConvergenceError.
TbaSolution solve_tba(const Matrix& A, const TbaOptions& opt = {});

// Residuals of the TBA system at an exact point of Q(sqrt5)^r (integer A).
std::vector<Root5> tba_exact_residuals(const Matrix& A, const std::vector<Root5>& Q);

// a + b sqrt5 with denominators up to max_den close to x, if any
std::optional<Root5> recognize_root5(const BigFloat& x, const BigFloat& tol, int max_den = 12, int max_num = 48);

struct UniquenessReport {
  int starts = 0;
  BigFloat spread;  // largest distance from the reference solution
  bool unique = false;
};

UniquenessReport tba_uniqueness(const Matrix& A, int starts, std::uint64_t seed, const BigFloat& agree,
                                mpfr_prec_t prec = 128);

// The constant C for which the first asymptotic coefficient condition holds,
// as a function of B for the rank-3 tadpole.
Root5 c_formula(const std::vector<Rational>& B);

struct ObstructionVerdict {
  bool obstructed = false;
  Root5 c;
  std::optional<Rational> candidate;  // unique rational C when not obstructed
};

nlohmann::json to_json(const ObstructionVerdict& v);
ObstructionVerdict modularity_obstruction(const std::vector<Rational>& B);

// C + (1/24) sum (1 + Q_i)/(1 - Q_i)
BigFloat gamma_coefficient(const Rational& C, const std::vector<BigFloat>& Q);

}  // namespace nahmlab
