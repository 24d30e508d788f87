#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "nahmlab/series.hpp"

namespace nahmlab {

// Dense rational matrix, row-major.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, Rational(0)) {}
  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  bool is_symmetric() const;
  Matrix transpose() const;
  std::string to_string() const;  // "2,-1;-1,2"

  friend Matrix operator*(const Matrix& x, const Matrix& y);
  friend std::vector<Rational> operator*(const Matrix& x, const std::vector<Rational>& v);
  friend bool operator==(const Matrix& x, const Matrix& y) = default;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Rational> a_;
};

// Tadpole Cartan matrix: 2 on the diagonal except a 1 in the last slot, -1 beside it.
Matrix tadpole(int r);
Matrix tadpole_inverse(int r);
Matrix inverse(const Matrix& m);  // throws DomainError when singular
Rational determinant(const Matrix& m);
// Leading principal minors all positive (exact).
bool is_positive_definite(const Matrix& m);

// "tadpole:R", "tadpole-inv:R" or rows like "2,-1;-1,2"
Matrix parse_matrix(std::string_view text);
std::vector<Rational> parse_vector(std::string_view text);  // "1/2,0,-1"

struct NahmTriple {
  Matrix A;
  std::vector<Rational> B;
  Rational C{0};
};

void validate(const NahmTriple& t);  // symmetric, positive definite, sizes agree
NahmTriple dual_triple(const NahmTriple& t);
// C - B^T A^-1 B / 2, the minimum of the exponent over real vectors.
Rational minimal_exponent(const NahmTriple& t);

struct NahmOptions {
  int threads = 0;              // 0: OpenMP default
  Rational margin{0};           // widen the enumeration region by this much
  std::vector<int> signs;       // per variable: -1 weights the term by (-1)^(n_i)
};

// sum over n >= 0 of q^(n^T A n / 2 + B.n + C) / prod (q;q)_(n_i), exponents below depth.
// Nested loops with exact per-level bounds from the Schur complements of A;
// the outermost range is split across threads.
QSeries nahm_sum(const NahmTriple& t, Exponent depth, const NahmOptions& opt = {});

// Box enumeration with a per-point product of inverse Pochhammers. Slow;
// kept as the independent check for nahm_sum.
QSeries nahm_sum_reference(const NahmTriple& t, Exponent depth, const std::vector<int>& signs = {});

// Tadpole sum chi_0(q^s_1, ..., q^s_r).
QSeries chi0(const std::vector<Rational>& shifts, Exponent depth, const std::vector<int>& signs = {});

// Termwise form of the x-variable identity behind chi0(q,1,1) + chi0(1,q,1) = chi0(1/q,q,1).
bool xvar_coefficient_check(std::int64_t i, std::int64_t j, std::int64_t k, Exponent depth);

}  // namespace nahmlab
