#include "nahmlab/nahm.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include <omp.h>

#include "nahmlab/kernels.hpp"
#include "nahmlab/products.hpp"

namespace nahmlab {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

bool Matrix::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if ((*this)(i, j) != (*this)(j, i)) return false;
  return true;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

std::string Matrix::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < rows_; ++i) {
    if (i) s += ';';
    for (std::size_t j = 0; j < cols_; ++j) {
      if (j) s += ',';
      s += (*this)(i, j).get_str();
    }
  }
  return s;
}

Matrix operator*(const Matrix& x, const Matrix& y) {
  if (x.cols() != y.rows()) throw DomainError("matrix sizes do not match");
  Matrix r(x.rows(), y.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t k = 0; k < x.cols(); ++k) {
      if (x(i, k) == 0) continue;
      for (std::size_t j = 0; j < y.cols(); ++j) r(i, j) += x(i, k) * y(k, j);
    }
  return r;
}

std::vector<Rational> operator*(const Matrix& x, const std::vector<Rational>& v) {
  if (x.cols() != v.size()) throw DomainError("matrix and vector sizes do not match");
  std::vector<Rational> r(x.rows(), Rational(0));
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) r[i] += x(i, j) * v[j];
  return r;
}

Matrix tadpole(int r) {
  if (r < 1) throw DomainError("tadpole rank must be at least 1");
  const auto n = static_cast<std::size_t>(r);
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = i + 1 < n ? 2 : 1;
    if (i > 0) m(i, i - 1) = m(i - 1, i) = -1;
  }
  return m;
}

Matrix tadpole_inverse(int r) {
  // entries min(i, j) with 1-based indices
  if (r < 1) throw DomainError("tadpole rank must be at least 1");
  const auto n = static_cast<std::size_t>(r);
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = static_cast<long>(std::min(i, j) + 1);
  return m;
}

Matrix inverse(const Matrix& m) {
  if (m.rows() != m.cols()) throw DomainError("inverse of a non-square matrix");
  const std::size_t n = m.rows();
  Matrix a = m, inv = Matrix::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a(p, c) == 0) ++p;
    if (p == n) throw DomainError("singular matrix");
    if (p != c)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(p, j), a(c, j));
        std::swap(inv(p, j), inv(c, j));
      }
    Rational piv = a(c, c);
    for (std::size_t j = 0; j < n; ++j) {
      a(c, j) /= piv;
      inv(c, j) /= piv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a(i, c) == 0) continue;
      Rational f = a(i, c);
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= f * a(c, j);
        inv(i, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

Rational determinant(const Matrix& m) {
  if (m.rows() != m.cols()) throw DomainError("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  Matrix a = m;
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a(p, c) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(c, j));
      det = -det;
    }
    det *= a(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (a(i, c) == 0) continue;
      Rational f = a(i, c) / a(c, c);
      for (std::size_t j = c; j < n; ++j) a(i, j) -= f * a(c, j);
    }
  }
  return det;
}

bool is_positive_definite(const Matrix& m) {
  if (!m.is_symmetric()) return false;
  for (std::size_t k = 1; k <= m.rows(); ++k) {
    Matrix minor(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) minor(i, j) = m(i, j);
    if (determinant(minor) <= 0) return false;
  }
  return true;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t p = s.find(sep, start);
    out.push_back(trim(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start)));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

int parse_rank(std::string_view s) {
  Rational r = parse_rational(s);
  if (r.get_den() != 1 || r < 1 || r > 64) throw DomainError("bad tadpole rank '" + std::string(s) + "'");
  return static_cast<int>(r.get_num().get_si());
}

}  // namespace

Matrix parse_matrix(std::string_view text) {
  text = trim(text);
  if (text.starts_with("tadpole-inv:")) return tadpole_inverse(parse_rank(text.substr(12)));
  if (text.starts_with("tadpole:")) return tadpole(parse_rank(text.substr(8)));
  auto rows = split(text, ';');
  const std::size_t n = rows.size();
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    auto cells = split(rows[i], ',');
    if (cells.size() != n) throw DomainError("matrix must be square: '" + std::string(text) + "'");
    for (std::size_t j = 0; j < n; ++j) m(i, j) = parse_rational(cells[j]);
  }
  return m;
}

std::vector<Rational> parse_vector(std::string_view text) {
  text = trim(text);
  if (text.empty()) return {};
  std::vector<Rational> v;
  for (auto c : split(text, ',')) v.push_back(parse_rational(c));
  return v;
}

void validate(const NahmTriple& t) {
  if (t.A.rows() == 0 || t.A.rows() != t.A.cols()) throw DomainError("A must be a nonempty square matrix");
  if (t.B.size() != t.A.rows()) throw DomainError("B must have one entry per row of A");
  if (!t.A.is_symmetric()) throw DomainError("A must be symmetric");
  if (!is_positive_definite(t.A)) throw DomainError("A must be positive definite");
}

NahmTriple dual_triple(const NahmTriple& t) {
  Matrix inv = inverse(t.A);
  std::vector<Rational> b = inv * t.B;
  Rational quad = 0;
  for (std::size_t i = 0; i < b.size(); ++i) quad += t.B[i] * b[i];
  const auto r = static_cast<long>(t.A.rows());
  return {inv, b, Rational(quad / 2 - ratio(r, 24) - t.C)};
}

Rational minimal_exponent(const NahmTriple& t) {
  std::vector<Rational> b = inverse(t.A) * t.B;
  Rational quad = 0;
  for (std::size_t i = 0; i < b.size(); ++i) quad += t.B[i] * b[i];
  return t.C - quad / 2;
}

namespace {

using Buffer = std::vector<mpz_class>;

// Exponent minimized over the trailing variables, as a quadratic in the
// leading i+1 variables: x^T M x / 2 + b.x + c.
struct Level {
  Matrix M;
  std::vector<Rational> b;
  Rational c;
};

struct Plan {
  std::size_t r = 0;
  std::int64_t denom = 1;
  std::int64_t kmin = 0, klim = 0;
  Rational limit;
  std::vector<Level> levels;
  std::vector<int> signs;

  std::int64_t width() const { return klim - kmin; }
};

Plan make_plan(const NahmTriple& t, Exponent depth, const NahmOptions& opt) {
  validate(t);
  Plan p;
  p.r = t.A.rows();
  if (!opt.signs.empty() && opt.signs.size() != p.r) throw DomainError("one sign per variable expected");
  p.signs = opt.signs.empty() ? std::vector<int>(p.r, 1) : opt.signs;
  if (opt.margin < 0) throw DomainError("margin must be nonnegative");

  mpz_class d = t.C.get_den();
  for (std::size_t i = 0; i < p.r; ++i) {
    mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), Rational(t.B[i]).get_den_mpz_t());
    mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), Rational(t.A(i, i) / 2).get_den_mpz_t());
    for (std::size_t j = 0; j < i; ++j) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), t.A(i, j).get_den_mpz_t());
  }
  if (!d.fits_slong_p() || d > 1'000'000) throw DomainError("exponent denominator too large");
  p.denom = d.get_si();

  const Rational vmin = minimal_exponent(t);
  if (depth.to_rational() <= vmin)
    throw TruncationError("depth " + depth.to_string() + " is not above the minimal exponent " + vmin.get_str());
  Rational lo = vmin * p.denom;
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
  p.kmin = fl.get_si();
  p.klim = FracSeries<Rational>::key_limit(depth, p.denom);
  p.limit = depth.to_rational() + opt.margin;

  for (std::size_t i = 0; i < p.r; ++i) {
    const std::size_t np = i + 1, nr = p.r - np;
    Level lv;
    lv.M = Matrix(np, np);
    lv.b.assign(np, Rational(0));
    lv.c = t.C;
    for (std::size_t a = 0; a < np; ++a) {
      lv.b[a] = t.B[a];
      for (std::size_t b = 0; b < np; ++b) lv.M(a, b) = t.A(a, b);
    }
    if (nr > 0) {
      Matrix arr(nr, nr);
      for (std::size_t a = 0; a < nr; ++a)
        for (std::size_t b = 0; b < nr; ++b) arr(a, b) = t.A(np + a, np + b);
      Matrix inv = inverse(arr);
      // X = A_PR A_RR^-1 (np x nr)
      Matrix x(np, nr);
      for (std::size_t a = 0; a < np; ++a)
        for (std::size_t b = 0; b < nr; ++b)
          for (std::size_t k = 0; k < nr; ++k) x(a, b) += t.A(a, np + k) * inv(k, b);
      for (std::size_t a = 0; a < np; ++a) {
        for (std::size_t b = 0; b < np; ++b)
          for (std::size_t k = 0; k < nr; ++k) lv.M(a, b) -= x(a, k) * t.A(np + k, b);
        for (std::size_t k = 0; k < nr; ++k) lv.b[a] -= x(a, k) * t.B[np + k];
      }
      for (std::size_t a = 0; a < nr; ++a)
        for (std::size_t b = 0; b < nr; ++b) lv.c -= t.B[np + a] * inv(a, b) * t.B[np + b] / 2;
    }
    p.levels.push_back(std::move(lv));
  }
  return p;
}

struct Quadratic {
  Rational s, l, c0;  // s t^2 + l t + c0
  Rational at(std::int64_t t) const { return s * t * t + l * t + c0; }
};

Quadratic level_quadratic(const Plan& p, std::size_t i, const std::vector<std::int64_t>& x) {
  const Level& lv = p.levels[i];
  Quadratic q;
  q.s = lv.M(i, i) / 2;
  q.l = lv.b[i];
  q.c0 = lv.c;
  for (std::size_t a = 0; a < i; ++a) {
    q.l += lv.M(i, a) * x[a];
    q.c0 += lv.b[a] * x[a];
    for (std::size_t b = 0; b < i; ++b) q.c0 += lv.M(a, b) * x[a] * x[b] / 2;
  }
  return q;
}

// Nonnegative t with q(t) < limit form an interval; returns false when empty.
bool level_range(const Quadratic& q, const Rational& limit, std::int64_t& lo, std::int64_t& hi) {
  Rational centre = -q.l / (2 * q.s);
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), centre.get_num_mpz_t(), centre.get_den_mpz_t());
  std::int64_t c = fl.fits_slong_p() ? fl.get_si() : (fl < 0 ? -1 : INT64_MAX / 4);
  if (c < 0) c = 0;
  std::int64_t start;
  if (q.at(c) < limit)
    start = c;
  else if (q.at(c + 1) < limit)
    start = c + 1;
  else
    return false;
  lo = hi = start;
  while (lo > 0 && q.at(lo - 1) < limit) --lo;
  while (q.at(hi + 1) < limit) ++hi;
  return true;
}

std::int64_t exponent_key(const Plan& p, const Rational& e) {
  Rational k = e * p.denom;
  if (k.get_den() != 1) throw Error("internal: exponent off the lattice");
  return k.get_num().get_si();
}

void add_scaled(Buffer& dst, const Buffer& src, int sign) {
  if (sign > 0)
    for (std::size_t i = 0; i < dst.size(); ++i) {
      if (src[i] != 0) dst[i] += src[i];
    }
  else
    for (std::size_t i = 0; i < dst.size(); ++i) {
      if (src[i] != 0) dst[i] -= src[i];
    }
}

void clear(Buffer& b) {
  for (auto& v : b) v = 0;
}

int term_sign(const Plan& p, std::size_t i, std::int64_t t) { return (p.signs[i] < 0 && (t & 1)) ? -1 : 1; }

void run_level(const Plan& p, std::size_t i, std::vector<std::int64_t>& x, std::vector<Buffer>& bufs);

// child(t) for variable i, written to bufs[i + 1]
void child(const Plan& p, std::size_t i, std::int64_t t, const Quadratic& q, std::vector<std::int64_t>& x,
           std::vector<Buffer>& bufs) {
  Buffer& out = bufs[i + 1];
  if (i + 1 == p.r) {
    clear(out);
    std::int64_t k = exponent_key(p, q.at(t)) - p.kmin;
    if (k >= 0 && k < p.width()) out[static_cast<std::size_t>(k)] = 1;
    return;
  }
  x.push_back(t);
  run_level(p, i + 1, x, bufs);
  x.pop_back();
}

// bufs[i] <- sum over t of sign(t) child(t) / (q;q)_t, by Horner's rule in t.
void run_level(const Plan& p, std::size_t i, std::vector<std::int64_t>& x, std::vector<Buffer>& bufs) {
  Buffer& acc = bufs[i];
  clear(acc);
  Quadratic q = level_quadratic(p, i, x);
  std::int64_t lo, hi;
  if (!level_range(q, p.limit, lo, hi)) return;
  for (std::int64_t t = hi; t >= lo; --t) {
    if (t < hi) kernels::div_binomial(acc, (t + 1) * p.denom, -1);
    child(p, i, t, q, x, bufs);
    add_scaled(acc, bufs[i + 1], term_sign(p, i, t));
  }
  kernels::div_pochhammer(acc, p.denom, lo);
}

QSeries to_series(const Plan& p, const Buffer& total, Exponent depth) {
  std::vector<QSeries::Term> terms;
  for (std::int64_t i = 0; i < p.width(); ++i)
    if (total[static_cast<std::size_t>(i)] != 0) terms.push_back({p.kmin + i, Rational(total[static_cast<std::size_t>(i)])});
  return QSeries(p.denom, depth, std::move(terms));
}

}  // namespace

QSeries nahm_sum(const NahmTriple& t, Exponent depth, const NahmOptions& opt) {
  Plan p = make_plan(t, depth, opt);
  const auto w = static_cast<std::size_t>(p.width());
  Buffer total(w);
  Quadratic q0 = level_quadratic(p, 0, {});
  std::int64_t lo, hi;
  if (!level_range(q0, p.limit, lo, hi)) return to_series(p, total, depth);
  const int nt = kernels::resolve_threads(opt.threads);
  const std::int64_t count = hi - lo + 1;
  std::string error;
#pragma omp parallel num_threads(nt) if (nt > 1 && count > 1)
  {
    std::vector<Buffer> bufs(p.r + 1, Buffer(w));
    Buffer local(w);
    std::vector<std::int64_t> x;
#pragma omp for schedule(dynamic)
    for (std::int64_t idx = 0; idx < count; ++idx) {
      try {
        const std::int64_t tt = lo + idx;
        child(p, 0, tt, q0, x, bufs);
        Buffer& c = bufs[1];
        kernels::div_pochhammer(c, p.denom, tt);
        add_scaled(local, c, term_sign(p, 0, tt));
      } catch (const std::exception& e) {
#pragma omp critical(nahm_error)
        error = e.what();
      }
    }
#pragma omp critical(nahm_merge)
    add_scaled(total, local, 1);
  }
  if (!error.empty()) throw Error(error);
  return to_series(p, total, depth);
}

QSeries nahm_sum_reference(const NahmTriple& t, Exponent depth, const std::vector<int>& signs) {
  validate(t);
  const std::size_t r = t.A.rows();
  if (!signs.empty() && signs.size() != r) throw DomainError("one sign per variable expected");
  const Rational vmin = minimal_exponent(t);
  if (depth.to_rational() <= vmin) throw TruncationError("depth is not above the minimal exponent");
  Matrix inv = inverse(t.A);
  std::vector<Rational> centre = inv * t.B;
  // |n_i - c_i|^2 <= 2 (N - vmin) (A^-1)_ii by Cauchy-Schwarz
  const double span = 2.0 * (depth.to_double() - vmin.get_d());
  std::vector<std::int64_t> ub(r);
  for (std::size_t i = 0; i < r; ++i) {
    double u = -centre[i].get_d() + std::sqrt(span * inv(i, i).get_d());
    ub[i] = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(u)) + 1);
  }
  const Exponent inner = depth - Exponent(vmin);
  std::map<std::int64_t, QSeries> inv_cache;
  auto inv_poch = [&](std::int64_t n) -> const QSeries& {
    auto it = inv_cache.find(n);
    if (it == inv_cache.end()) {
      QSeries poly = pochhammer(1, Rational(1), Rational(1), n, inner);
      it = inv_cache.emplace(n, invert(poly, inner)).first;
    }
    return it->second;
  };
  QSeries total = QSeries::zero(depth);
  std::vector<std::int64_t> n(r, 0);
  const Rational limit = depth.to_rational();
  for (;;) {
    Rational e = t.C;
    for (std::size_t i = 0; i < r; ++i) {
      e += t.B[i] * n[i];
      for (std::size_t j = 0; j < r; ++j) e += t.A(i, j) * n[i] * n[j] / 2;
    }
    if (e < limit) {
      int sg = 1;
      for (std::size_t i = 0; i < r; ++i)
        if (!signs.empty() && signs[i] < 0 && (n[i] & 1)) sg = -sg;
      QSeries term = QSeries::constant(Rational(sg));
      for (std::size_t i = 0; i < r; ++i) term = term * inv_poch(n[i]);
      total = total + shift(term, Exponent(e)).truncated(depth);
    }
    std::size_t i = 0;
    while (i < r && n[i] == ub[i]) n[i++] = 0;
    if (i == r) break;
    ++n[i];
  }
  return total;
}

QSeries chi0(const std::vector<Rational>& shifts, Exponent depth, const std::vector<int>& signs) {
  if (shifts.empty()) throw DomainError("chi0 needs at least one variable");
  NahmTriple t{tadpole(static_cast<int>(shifts.size())), shifts, Rational(0)};
  NahmOptions opt;
  opt.signs = signs;
  return nahm_sum(t, depth, opt);
}

bool xvar_coefficient_check(std::int64_t i, std::int64_t j, std::int64_t k, Exponent depth) {
  if (i < 0 || j < 0 || k < 0) throw DomainError("x-variable indices must be nonnegative");
  auto quad = [](std::int64_t a, std::int64_t b, std::int64_t c) -> Rational {
    return Rational(a * a + b * b - a * b - b * c) + ratio(c * c, 2);
  };
  auto term = [&](const Rational& e, std::int64_t a, std::int64_t b, std::int64_t c) {
    Exponent inner = depth - Exponent(e);
    if (inner <= Exponent(0)) return QSeries::zero(depth);
    QSeries den = pochhammer(1, 1, 1, a, inner) * pochhammer(1, 1, 1, b, inner) * pochhammer(1, 1, 1, c, inner);
    return shift(invert(den, inner), Exponent(e)).truncated(depth);
  };
  const Rational q = quad(i, j, k);
  QSeries lhs = term(q + j - i, i, j, k);
  QSeries rhs = term(q + j, i, j, k);
  if (i > 0) rhs = rhs + term(quad(i - 1, j, k) + (i - 1), i - 1, j, k);
  return compare(lhs, rhs, depth).equal;
}

}  // namespace nahmlab
