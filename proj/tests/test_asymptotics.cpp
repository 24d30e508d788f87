#include <doctest.h>

#include "nahmlab/asymptotics.hpp"

using namespace nahmlab;

namespace {

Root5 r5(long an, long ad, long bn, long bd) { return {ratio(an, ad), ratio(bn, bd)}; }

}  // namespace

TEST_CASE("rank-3 tadpole TBA point") {
  TbaOptions o;
  o.prec = 256;
  o.tol = BigFloat::from_string("1e-60", 256);
  auto s = solve_tba(tadpole(3), o);
  const Root5 want[3] = {r5(3, 2, -1, 2), r5(-2, 1, 1, 1), r5(3, 4, -1, 4)};
  const BigFloat eps = BigFloat::from_string("1e-30", 256);
  for (int i = 0; i < 3; ++i) {
    CHECK(abs(s.Q[static_cast<std::size_t>(i)] - to_bigfloat(want[i], 256)) < eps);
    REQUIRE(s.exact[static_cast<std::size_t>(i)]);
    CHECK(*s.exact[static_cast<std::size_t>(i)] == want[i]);
  }
  CHECK(s.Q[0].to_string(10).substr(0, 10) == "0.38196601");
  for (const auto& r : tba_exact_residuals(tadpole(3), {want[0], want[1], want[2]})) CHECK(r.is_zero());
  // a nearby wrong point leaves a residual
  auto off = tba_exact_residuals(tadpole(3), {want[0], want[1], r5(1, 5, 0, 1)});
  CHECK_FALSE(off[2].is_zero());
}

TEST_CASE("rank one TBA is the golden ratio conjugate") {
  Matrix a(1, 1);
  a(0, 0) = 2;
  auto s = solve_tba(a);
  BigFloat want = (sqrt(BigFloat::from_int(5, 256)) - BigFloat::from_int(1, 256)) / BigFloat::from_int(2, 256);
  CHECK(abs(s.Q[0] - want) < BigFloat::from_string("1e-60", 256));
  REQUIRE(s.exact[0]);
  CHECK(*s.exact[0] == r5(-1, 2, 1, 2));
  // 1 + Q = 1/Q and 1 - Q = Q^2, so (1+Q)/(1-Q) = Q^-3 = 2 + sqrt5
  BigFloat g = gamma_coefficient(0, s.Q);
  BigFloat expect = to_bigfloat(r5(2, 24, 1, 24), 256);
  CHECK(abs(g - expect) < BigFloat::from_string("1e-50", 256));
}

TEST_CASE("gamma coefficient limits") {
  std::vector<BigFloat> zeros(3, BigFloat::zero(128));
  CHECK(abs(gamma_coefficient(0, zeros) - BigFloat::from_rational(ratio(3, 24), 128)) <
        BigFloat::from_string("1e-30", 128));
  std::vector<BigFloat> bad{BigFloat::from_int(1, 128)};
  CHECK_THROWS(gamma_coefficient(0, bad));
}

TEST_CASE("uniqueness sweep") {
  auto r = tba_uniqueness(tadpole(3), 12, 20240601, BigFloat::from_string("1e-10", 128));
  CHECK(r.unique);
  CHECK(r.starts == 12);
}

TEST_CASE("TBA input checks") {
  Matrix bad(2, 2);
  bad(0, 0) = 1;
  bad(0, 1) = bad(1, 0) = 2;
  bad(1, 1) = 1;
  CHECK_THROWS_AS(solve_tba(bad), DomainError);
  TbaOptions o;
  o.max_iterations = 3;
  CHECK_THROWS_AS(solve_tba(tadpole(3), o), ConvergenceError);
}

TEST_CASE("constant for the first asymptotic coefficient") {
  CHECK(c_formula({0, 0, 0}) == r5(-7, 80, 0, 1));
  CHECK(c_formula({1, 0, 0}) == r5(-139, 80, 68, 80));
  CHECK(c_formula({0, 0, ratio(1, 2)}) == r5(1, 40, 0, 1));
  CHECK_THROWS(c_formula({0, 0}));
}

TEST_CASE("obstruction verdicts") {
  auto v = modularity_obstruction({1, 0, 0});
  CHECK(v.obstructed);
  CHECK_FALSE(v.candidate);
  CHECK(modularity_obstruction({0, 1, 0}).obstructed);
  auto z = modularity_obstruction({0, 0, 0});
  CHECK_FALSE(z.obstructed);
  REQUIRE(z.candidate);
  CHECK(*z.candidate == ratio(-7, 80));
  auto j = to_json(v);
  CHECK(j["verdict"] == "obstructed");
  CHECK(j["c"]["a"] == "-139/80");
}

TEST_CASE("c_formula is quadratic in B") {
  // third differences along each axis and mixed second differences are constant
  for (int axis = 0; axis < 3; ++axis) {
    auto at = [axis](long t) {
      std::vector<Rational> b{1, -2, 3};
      b[static_cast<std::size_t>(axis)] += t;
      return c_formula(b);
    };
    Root5 d2a = at(2) - at(1) - at(1) + at(0);
    Root5 d2b = at(3) - at(2) - at(2) + at(1);
    CHECK(d2a == d2b);
  }
}
