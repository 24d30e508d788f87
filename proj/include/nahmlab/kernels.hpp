#pragma once

// Inner loops shared by the series code. Each parallel kernel has a serial
// reference next to it; tests and the benchmark compare the two.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <span>
#include <vector>

#include <omp.h>

#include "nahmlab/rings.hpp"

namespace nahmlab::kernels {

template <class R>
struct SparseTerm {
  std::int64_t key;
  R coeff;
};

constexpr std::int64_t kNoLimit = std::numeric_limits<std::int64_t>::max();

inline int resolve_threads(int threads) { return threads > 0 ? threads : omp_get_max_threads(); }

// Product of two sparse series (sorted by key) keeping keys < limit.
template <class R>
std::vector<SparseTerm<R>> convolve_reference(std::span<const SparseTerm<R>> a, std::span<const SparseTerm<R>> b,
                                              std::int64_t limit) {
  std::map<std::int64_t, R> acc;
  for (const auto& x : a) {
    for (const auto& y : b) {
      std::int64_t k = x.key + y.key;
      if (k >= limit) break;
      auto [it, inserted] = acc.try_emplace(k, x.coeff * y.coeff);
      if (!inserted) it->second += x.coeff * y.coeff;
    }
  }
  std::vector<SparseTerm<R>> out;
  out.reserve(acc.size());
  for (auto& [k, v] : acc)
    if (!RingTraits<R>::is_zero(v)) out.push_back({k, std::move(v)});
  return out;
}

// Same result as convolve_reference. The output key range is cut into one
// slice per thread; within a slice every coefficient is summed in the same
// order as the serial loop, so results do not depend on the thread count.
template <class R>
std::vector<SparseTerm<R>> convolve(std::span<const SparseTerm<R>> a, std::span<const SparseTerm<R>> b,
                                    std::int64_t limit, int threads = 0) {
  if (a.empty() || b.empty()) return {};
  const std::int64_t base = a.front().key + b.front().key;
  if (base >= limit) return {};
  std::int64_t g = 0;
  for (const auto& x : a) g = std::gcd(g, x.key - a.front().key);
  for (const auto& y : b) g = std::gcd(g, y.key - b.front().key);
  if (g == 0) g = 1;
  const std::int64_t top = std::min(limit - 1, a.back().key + b.back().key);
  const std::int64_t len = (top - base) / g + 1;
  const double pairs = static_cast<double>(a.size()) * static_cast<double>(b.size());
  if (static_cast<double>(len) > 8.0 * pairs + 4096.0) return convolve_reference(a, b, limit);

  std::vector<R> acc(static_cast<std::size_t>(len), RingTraits<R>::zero());
  const int nt = std::max(1, std::min<int>(resolve_threads(threads), static_cast<int>(len)));
  const std::int64_t chunk = (len + nt - 1) / nt;
  const bool parallel = nt > 1 && pairs > 4096.0;

#pragma omp parallel for schedule(static, 1) num_threads(nt) if (parallel)
  for (int t = 0; t < nt; ++t) {
    const std::int64_t lo_idx = t * chunk;
    const std::int64_t hi_idx = std::min(len, lo_idx + chunk);
    if (lo_idx >= hi_idx) continue;
    const std::int64_t lo = base + lo_idx * g, hi = base + hi_idx * g;
    for (const auto& x : a) {
      if (x.key + b.front().key >= hi) break;
      auto it = std::lower_bound(b.begin(), b.end(), lo - x.key,
                                 [](const SparseTerm<R>& y, std::int64_t k) { return y.key < k; });
      for (; it != b.end() && x.key + it->key < hi; ++it)
        acc[static_cast<std::size_t>((x.key + it->key - base) / g)] += x.coeff * it->coeff;
    }
  }

  std::vector<SparseTerm<R>> out;
  for (std::int64_t i = 0; i < len; ++i)
    if (!RingTraits<R>::is_zero(acc[static_cast<std::size_t>(i)]))
      out.push_back({base + i * g, std::move(acc[static_cast<std::size_t>(i)])});
  return out;
}

// Dense buffers: f[i] is the coefficient of key (lo + i); everything at or
// beyond f.size() is unknown. The binomial updates below are exact on the
// window, which is what makes dense product expansion cheap.

// f <- f * (1 + sign * q^step)
template <class C>
void mul_binomial(std::vector<C>& f, std::int64_t step, int sign) {
  const auto n = static_cast<std::int64_t>(f.size());
  if (sign > 0)
    for (std::int64_t i = n - 1; i >= step; --i) f[i] += f[i - step];
  else
    for (std::int64_t i = n - 1; i >= step; --i) f[i] -= f[i - step];
}

// f <- f / (1 + sign * q^step)
template <class C>
void div_binomial(std::vector<C>& f, std::int64_t step, int sign) {
  const auto n = static_cast<std::int64_t>(f.size());
  if (sign > 0)
    for (std::int64_t i = step; i < n; ++i) f[i] -= f[i - step];
  else
    for (std::int64_t i = step; i < n; ++i) f[i] += f[i - step];
}

// f <- f * (1 + c * q^step)
template <class C>
void mul_binomial(std::vector<C>& f, std::int64_t step, const C& c) {
  const auto n = static_cast<std::int64_t>(f.size());
  for (std::int64_t i = n - 1; i >= step; --i) f[i] += c * f[i - step];
}

// f <- f / (1 + c * q^step)
template <class C>
void div_binomial(std::vector<C>& f, std::int64_t step, const C& c) {
  const auto n = static_cast<std::int64_t>(f.size());
  for (std::int64_t i = step; i < n; ++i) f[i] -= c * f[i - step];
}

// f <- f / (q^step; q^step)_m, i.e. divide by (1 - q^(k*step)) for k = 1..m.
template <class C>
void div_pochhammer(std::vector<C>& f, std::int64_t step, std::int64_t m) {
  const auto n = static_cast<std::int64_t>(f.size());
  for (std::int64_t k = 1; k <= m && k * step < n; ++k) div_binomial(f, k * step, -1);
}

}  // namespace nahmlab::kernels
