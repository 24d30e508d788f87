#pragma once

// Independent reference values computed by plain counting, used by the tests.

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "nahmlab/series.hpp"

namespace oracle {

using nahmlab::Exponent;
using nahmlab::QSeries;
using nahmlab::Rational;

// number of partitions of n into parts allowed by `part`, n < limit
inline std::vector<long> restricted_partitions(int limit, const std::function<bool(int)>& part) {
  std::vector<long> p(static_cast<std::size_t>(limit), 0);
  p[0] = 1;
  for (int k = 1; k < limit; ++k) {
    if (!part(k)) continue;
    for (int n = k; n < limit; ++n) p[static_cast<std::size_t>(n)] += p[static_cast<std::size_t>(n - k)];
  }
  return p;
}

// Euler's pentagonal theorem: (q;q)_inf coefficients below limit
inline std::vector<long> pentagonal(int limit) {
  std::vector<long> c(static_cast<std::size_t>(limit), 0);
  for (long k = -limit; k <= limit; ++k) {
    long e = k * (3 * k - 1) / 2;
    if (e >= 0 && e < limit) c[static_cast<std::size_t>(e)] += (k % 2 == 0) ? 1 : -1;
  }
  return c;
}

inline long sigma(long n, int p) {
  long s = 0;
  for (long d = 1; d <= n; ++d)
    if (n % d == 0) {
      long t = 1;
      for (int i = 0; i < p; ++i) t *= d;
      s += t;
    }
  return s;
}

// coefficients at integer exponents 0..limit-1 as a series truncated at limit
inline QSeries from_dense(const std::vector<long>& c, Exponent shift = Exponent(0)) {
  std::map<Exponent, Rational> m;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] != 0) m[Exponent(static_cast<std::int64_t>(i)) + shift] = Rational(c[i]);
  return QSeries::from_map(m, Exponent(static_cast<std::int64_t>(c.size())) + shift);
}

}  // namespace oracle
