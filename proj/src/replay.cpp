#include "nahmlab/replay.hpp"

#include "nahmlab/bivariate.hpp"
#include "nahmlab/nahm.hpp"
#include "nahmlab/products.hpp"

namespace nahmlab {

namespace {

// (sign q^e z^s; q^2)_inf with sign +1 for factors (1 + q^(e+2j) z^s)
struct Factor {
  int sign;
  std::int64_t e;
  std::int64_t s;
};

struct Replay {
  std::vector<Rational> shifts;
  std::int64_t scale;        // integer multiplier of the prefactor
  std::int64_t pre_start;    // prefactor (-q^pre_start; q^2)_inf
  std::vector<Factor> numerator;
  Factor denominator;
};

// every integrand carries (-qz, -q/z, q^2; q^2)_inf from the third summation
std::vector<Factor> with_common(std::vector<Factor> f) {
  f.push_back({1, 1, 1});
  f.push_back({1, 1, -1});
  f.push_back({-1, 2, 0});
  return f;
}

const std::vector<Replay>& replays() {
  static const std::vector<Replay> r = {
      {{0, 0, 0}, 1, 1, with_common({{1, 1, 1}, {1, 1, -1}}), {-1, 0, -1}},
      {{0, 0, Rational(1, 2)}, 1, 2, with_common({{1, 1, 1}, {1, 1, -1}}), {-1, 1, -1}},
      {{1, -1, Rational(1, 2)}, 1, 2, with_common({{1, 3, 1}, {1, -1, -1}}), {-1, -1, -1}},
      {{-1, 1, 0}, 1, 1, with_common({{1, -1, 1}, {1, 3, -1}}), {-1, 2, -1}},
      {{-1, 1, Rational(-1, 2)}, 2, 2, with_common({{1, 3, -1}, {1, -1, 1}}), {-1, 1, -1}},
      {{-2, 2, Rational(-1, 2)}, 2, 2, with_common({{1, -3, 1}, {1, 5, -1}}), {-1, 3, -1}},
  };
  return r;
}

const Replay& replay(int i) {
  if (i < 1 || i > kReplayCount) throw DomainError("replay index must be 1..6");
  return replays()[static_cast<std::size_t>(i - 1)];
}

}  // namespace

QSeries replay_target(int i, Exponent depth) {
  const Replay& r = replay(i);
  // chi0(q^2) below depth needs chi0(q) below depth/2
  Exponent half = depth / Exponent(2);
  return substitute_power(chi0(r.shifts, half), Exponent(2)).truncated(depth);
}

QSeries replay_constant_term(int i, Exponent depth, std::int64_t widen) {
  const Replay& r = replay(i);
  const std::int64_t w = ct_window(depth, Exponent(2)) + widen;
  // negative q-powers of the expanded factors can pull high terms down
  const Exponent margin(2 * w + 20);
  auto b = BivariateSeries<Rational>::one(-w, w, 1, -margin, depth + margin);
  for (const auto& f : r.numerator) b.mul_pochhammer(Rational(f.sign), Exponent(f.e), Exponent(2), f.s, std::nullopt);
  const Factor& d = r.denominator;
  b.div_pochhammer(Rational(d.sign), Exponent(d.e), Exponent(2), d.s, std::nullopt);
  QSeries ct = b.constant_term().truncated(depth);
  // a Laurent constant term needs the prefactor further out
  Exponent lead = ct.empty() ? Exponent(0) : min(Exponent(0), vanishing_order(ct).order);
  QSeries pre = pochhammer(-1, Rational(r.pre_start), Rational(2), std::nullopt, depth - lead);
  return (pre * ct).scaled(Rational(r.scale)).truncated(depth);
}

}  // namespace nahmlab
