#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "nahmlab/series.hpp"

namespace nahmlab {

// Laurent series in z (degrees zmin..zmax) with q-series coefficients on a
// dense grid of keys [klo, klim) over a common denominator. Degrees outside the
// window are dropped; with a window from ct_window() they cannot reach the
// constant term below the truncation.
//
// A factor 1/(1 + c q^e z^s) is expanded as a power series in z^s, which is
// the expansion the constant-term method uses for factors such as 1/(1/z;q)_inf.
template <class R>
class BivariateSeries {
 public:
  using Traits = RingTraits<R>;

  BivariateSeries(std::int64_t zmin, std::int64_t zmax, std::int64_t denom, Exponent qmin, Exponent trunc)
      : zmin_(zmin), zmax_(zmax), denom_(denom), trunc_(trunc) {
    if (zmin > zmax) throw DomainError("empty z-window");
    if (denom <= 0) throw DomainError("denominator must be positive");
    klo_ = (qmin * Exponent(denom)).floor();
    klim_ = FracSeries<R>::key_limit(trunc, denom);
    if (klim_ <= klo_) throw DomainError("empty q-window");
    grid_.assign(static_cast<std::size_t>(zmax - zmin + 1), std::vector<R>(width(), Traits::zero()));
  }

  static BivariateSeries one(std::int64_t zmin, std::int64_t zmax, std::int64_t denom, Exponent qmin, Exponent trunc) {
    BivariateSeries b(zmin, zmax, denom, qmin, trunc);
    b.add_term(0, Exponent(0), Traits::one());
    return b;
  }

  std::int64_t zmin() const { return zmin_; }
  std::int64_t zmax() const { return zmax_; }
  std::int64_t denom() const { return denom_; }
  Exponent trunc() const { return trunc_; }
  Exponent qmin() const { return Exponent(klo_, denom_); }

  // coefficient c of q^e z^d (ignored outside the window)
  void add_term(std::int64_t d, Exponent e, const R& c) {
    if (d < zmin_ || d > zmax_) return;
    std::int64_t k = key_of(e);
    if (k >= klim_) return;
    if (k < klo_) throw TruncationError("term below the q-window of a bivariate series");
    cell(d, k) += c;
  }

  // *= (1 + c q^e z^s)
  void mul_binomial(const R& c, Exponent e, std::int64_t s) {
    const std::int64_t ek = key_of(e);
    auto src = grid_;
    for (std::int64_t d = zmin_; d <= zmax_; ++d) {
      std::int64_t from = d - s;
      if (from < zmin_ || from > zmax_) continue;
      axpy(row(d), src[idx(from)], ek, c);
    }
  }

  // /= (1 + c q^e z^s), as a series in z^s (or in q when s == 0)
  void div_binomial(const R& c, Exponent e, std::int64_t s) {
    const std::int64_t ek = key_of(e);
    if (s == 0) {
      if (ek <= 0) throw DomainError("z-free divisor needs a positive q-exponent");
      for (auto& r : grid_)
        for (std::int64_t i = ek; i < width(); ++i) r[static_cast<std::size_t>(i)] -= c * r[static_cast<std::size_t>(i - ek)];
      return;
    }
    R minus_c = -c;
    if (s > 0) {
      for (std::int64_t d = zmin_ + s; d <= zmax_; ++d) axpy(row(d), std::vector<R>(row(d - s)), ek, minus_c);
    } else {
      for (std::int64_t d = zmax_ + s; d >= zmin_; --d) axpy(row(d), std::vector<R>(row(d - s)), ek, minus_c);
    }
  }

  // *= prod_{j < length} (1 + c q^(e + j*step) z^s); length nullopt = infinite
  void mul_pochhammer(const R& c, Exponent e, Exponent step, std::int64_t s, std::optional<std::int64_t> length) {
    for (std::int64_t j = 0; !length || j < *length; ++j) {
      Exponent ej = e + step * Exponent(j);
      if (!affects(ej)) {
        if (!length && step > Exponent(0)) break;
        continue;
      }
      mul_binomial(c, ej, s);
    }
  }

  void div_pochhammer(const R& c, Exponent e, Exponent step, std::int64_t s, std::optional<std::int64_t> length) {
    for (std::int64_t j = 0; !length || j < *length; ++j) {
      Exponent ej = e + step * Exponent(j);
      if (!affects(ej)) {
        if (!length && step > Exponent(0)) break;
        continue;
      }
      div_binomial(c, ej, s);
    }
  }

  // multiply every z-degree by a z-free q-series
  void mul_series(const FracSeries<R>& f) {
    if (denom_ % f.denom() != 0) throw DomainError("series denominator does not divide the grid denominator");
    auto src = grid_;
    for (auto& r : grid_) std::fill(r.begin(), r.end(), Traits::zero());
    const std::int64_t scale_k = denom_ / f.denom();
    for (std::size_t d = 0; d < grid_.size(); ++d)
      for (const auto& t : f.terms()) axpy(grid_[d], src[d], t.key * scale_k, t.coeff);
  }

  friend BivariateSeries operator*(const BivariateSeries& a, const BivariateSeries& b) {
    a.check_compatible(b);
    BivariateSeries r(a.zmin_, a.zmax_, a.denom_, a.qmin(), a.trunc_);
    for (std::int64_t da = a.zmin_; da <= a.zmax_; ++da) {
      const auto& ra = a.row(da);
      for (std::int64_t db = b.zmin_; db <= b.zmax_; ++db) {
        std::int64_t d = da + db;
        if (d < r.zmin_ || d > r.zmax_) continue;
        const auto& rb = b.row(db);
        auto& out = r.row(d);
        for (std::int64_t i = 0; i < a.width(); ++i) {
          if (Traits::is_zero(ra[static_cast<std::size_t>(i)])) continue;
          // key(i) + key(j) = klo + out index  =>  out = i + j + klo
          for (std::int64_t j = 0; j < b.width(); ++j) {
            std::int64_t o = i + j + a.klo_;
            if (o >= r.width()) break;
            if (o < 0) {
              if (!Traits::is_zero(rb[static_cast<std::size_t>(j)]))
                throw TruncationError("bivariate product fell below the q-window");
              continue;
            }
            out[static_cast<std::size_t>(o)] += ra[static_cast<std::size_t>(i)] * rb[static_cast<std::size_t>(j)];
          }
        }
      }
    }
    return r;
  }

  FracSeries<R> component(std::int64_t d) const {
    if (d < zmin_ || d > zmax_) throw DomainError("z-degree outside the window");
    std::vector<typename FracSeries<R>::Term> terms;
    const auto& r = row(d);
    for (std::int64_t i = 0; i < width(); ++i)
      if (!Traits::is_zero(r[static_cast<std::size_t>(i)])) terms.push_back({klo_ + i, r[static_cast<std::size_t>(i)]});
    return FracSeries<R>(denom_, trunc_, std::move(terms));
  }

  FracSeries<R> constant_term() const {
    if (zmin_ > 0 || zmax_ < 0) throw DomainError("z-window excludes degree 0");
    return component(0);
  }

 private:
  std::int64_t width() const { return klim_ - klo_; }
  std::size_t idx(std::int64_t d) const { return static_cast<std::size_t>(d - zmin_); }
  std::vector<R>& row(std::int64_t d) { return grid_[idx(d)]; }
  const std::vector<R>& row(std::int64_t d) const { return grid_[idx(d)]; }
  R& cell(std::int64_t d, std::int64_t k) { return row(d)[static_cast<std::size_t>(k - klo_)]; }

  std::int64_t key_of(Exponent e) const {
    Exponent k = e * Exponent(denom_);
    if (!k.is_integer()) throw DomainError("exponent " + e.to_string() + " is off the grid lattice");
    return k.num();
  }

  // A factor q^e moves keys by e*denom; it matters while some shifted key can land in the window.
  bool affects(Exponent e) const { return key_of(e) < width(); }

  // dst[i] += c * src[i - shift] over the grid
  void axpy(std::vector<R>& dst, const std::vector<R>& src, std::int64_t shift, const R& c) const {
    const std::int64_t w = width();
    for (std::int64_t i = 0; i < w; ++i) {
      std::int64_t j = i - shift;
      if (j < 0) continue;
      if (j >= w) break;
      if (Traits::is_zero(src[static_cast<std::size_t>(j)])) continue;
      dst[static_cast<std::size_t>(i)] += c * src[static_cast<std::size_t>(j)];
    }
    if (shift < 0)
      for (std::int64_t j = 0; j < -shift && j < w; ++j)
        if (!Traits::is_zero(src[static_cast<std::size_t>(j)]))
          throw TruncationError("bivariate update fell below the q-window");
  }

  void check_compatible(const BivariateSeries& b) const {
    if (zmin_ != b.zmin_ || zmax_ != b.zmax_ || denom_ != b.denom_ || klo_ != b.klo_ || klim_ != b.klim_)
      throw DomainError("bivariate series windows differ");
  }

  std::int64_t zmin_, zmax_, denom_;
  Exponent trunc_;
  std::int64_t klo_ = 0, klim_ = 0;
  std::vector<std::vector<R>> grid_;
};

// z-window half-width for theta-type integrands whose z^k terms sit at
// q-order about k^2/(2 modulus).
inline std::int64_t ct_window(Exponent depth, Exponent modulus) {
  double v = std::sqrt(2.0 * depth.to_double() * modulus.to_double());
  return static_cast<std::int64_t>(std::ceil(v)) + 8;
}

}  // namespace nahmlab
