#include <doctest.h>

#include "nahmlab/bivariate.hpp"
#include "nahmlab/products.hpp"
#include "nahmlab/series.hpp"
#include "oracles.hpp"

using namespace nahmlab;

namespace {

QSeries poly(std::initializer_list<std::pair<Exponent, long>> terms, Trunc trunc = std::nullopt) {
  std::map<Exponent, Rational> m;
  for (auto [e, c] : terms) m[e] += c;
  return QSeries::from_map(m, trunc);
}

QSeries q(Exponent e) { return QSeries::monomial(e, Rational(1)); }

}  // namespace

TEST_CASE("euler product matches the pentagonal numbers") {
  QSeries e = pochhammer(1, Rational(1), Rational(1), std::nullopt, 8);
  CHECK(e == poly({{0, 1}, {1, -1}, {2, -1}, {5, 1}, {7, 1}}, Exponent(8)));
  QSeries deep = pochhammer(1, Rational(1), Rational(1), std::nullopt, 400);
  CHECK(compare(deep, oracle::from_dense(oracle::pentagonal(400)), 400).equal);
}

TEST_CASE("inverse of a mod-5 product counts partitions") {
  QSeries p = pochhammer(1, Rational(1), Rational(5), std::nullopt, 7) *
              pochhammer(1, Rational(4), Rational(5), std::nullopt, 7);
  QSeries inv = invert(p);
  CHECK(inv == poly({{0, 1}, {1, 1}, {2, 1}, {3, 1}, {4, 2}, {5, 2}, {6, 3}}, Exponent(7)));
  auto counts = oracle::restricted_partitions(120, [](int k) { return k % 5 == 1 || k % 5 == 4; });
  QSeries big = invert(pochhammer(1, Rational(1), Rational(5), std::nullopt, 120) *
                       pochhammer(1, Rational(4), Rational(5), std::nullopt, 120));
  CHECK(compare(big, oracle::from_dense(counts), 120).equal);
}

TEST_CASE("fractional exponents") {
  CHECK(q(Exponent(1, 2)) * q(Exponent(1, 2)) == q(1));
  CHECK(shift(poly({{0, 1}, {1, 1}}), Exponent(1, 40)) == poly({{Exponent(1, 40), 1}, {Exponent(41, 40), 1}}));
  CHECK(substitute_power(poly({{0, 1}, {1, 1}}), Exponent(2)) == poly({{0, 1}, {2, 1}}));
  CHECK(substitute_power(poly({{0, 1}, {1, 1}}), Exponent(1, 2)) == poly({{0, 1}, {Exponent(1, 2), 1}}));
  QSeries mixed = q(Exponent(1, 3)) + q(Exponent(1, 4));
  CHECK(mixed.denom() == 12);
}

TEST_CASE("dissection") {
  QSeries f = poly({{0, 1}, {1, 1}, {2, 1}});
  CHECK(dissect(f, 2, 0) == poly({{0, 1}, {1, 1}}));
  CHECK(dissect(f, 2, 1) == poly({{0, 1}}));
  CHECK(dissect(f, 3, 2) == poly({{0, 1}}));
}

TEST_CASE("half-period shift") {
  QSeries h = q(Exponent(1, 2));
  CHECK(tau_shift(h) == -h);
  QSeries f = poly({{0, 3}, {Exponent(1, 2), 1}, {1, 2}, {Exponent(3, 2), -5}});
  CHECK(tau_shift(tau_shift(f)) == f);
  CHECK(tau_shift(poly({{0, 1}, {1, 4}})) == poly({{0, 1}, {1, 4}}));
  CHECK_THROWS(tau_shift(q(Exponent(1, 4))));
  // quarter exponents go to the Gaussian ring: q^(1/4) -> i q^(1/4)
  auto g = tau_shift_gauss(q(Exponent(1, 4)));
  CHECK(g.coefficient(Exponent(1, 4)) == Gauss::i());
}

TEST_CASE("constant term of a bivariate series") {
  BivariateSeries<Rational> b(-3, 3, 1, Exponent(0), Exponent(10));
  b.add_term(1, 0, Rational(1));
  b.add_term(0, 0, Rational(2));
  b.add_term(-1, 1, Rational(1));
  CHECK(b.constant_term() == QSeries::constant(Rational(2), Exponent(10)));
  CHECK(b.component(-1) == QSeries::monomial(1, Rational(1), Exponent(10)));
}

TEST_CASE("comparison reports the first mismatch") {
  QSeries a = poly({{0, 1}, {1, 1}}, Exponent(20));
  QSeries b = poly({{0, 1}, {1, 2}}, Exponent(20));
  auto r = compare(a, b, Exponent(10));
  CHECK_FALSE(r.equal);
  REQUIRE(r.exponent);
  CHECK(*r.exponent == Exponent(1));
  CHECK(r.lhs == 1);
  CHECK(r.rhs == 2);
  CHECK(compare(a, a, Exponent(20)).equal);
  CHECK_THROWS_AS(compare(a, b, Exponent(21)), TruncationError);
}

TEST_CASE("leading term and vanishing order") {
  auto lt = leading_term(q(3));
  REQUIRE(lt);
  CHECK(lt->exponent == Exponent(3));
  CHECK(lt->coeff == 1);
  QSeries g = poly({{Exponent(33, 80), 6}, {Exponent(113, 80), 18}}, Exponent(3));
  CHECK(leading_term(g)->exponent == Exponent(33, 80));
  CHECK(leading_term(g)->coeff == 6);
  auto z = vanishing_order(QSeries::zero(Exponent(5)));
  CHECK(z.zero_to_truncation);
  CHECK(z.order == Exponent(5));
  CHECK_THROWS(vanishing_order(QSeries::zero()));
}

TEST_CASE("truncation bookkeeping") {
  QSeries a = poly({{0, 1}, {1, 1}}, Exponent(5));
  QSeries b = q(2);
  QSeries p = a * b;
  REQUIRE(p.trunc());
  CHECK(*p.trunc() == Exponent(7));
  CHECK_THROWS_AS(p.coefficient(7), TruncationError);
  QSeries s = a + poly({{0, 1}}, Exponent(3));
  CHECK(*s.trunc() == Exponent(3));
  CHECK_THROWS_AS(invert(poly({{0, 1}, {1, 1}})), TruncationError);
  CHECK(invert(poly({{0, 1}, {1, 1}}), Exponent(4)) == poly({{0, 1}, {1, -1}, {2, 1}, {3, -1}}, Exponent(4)));
  CHECK_THROWS_AS(invert(QSeries::zero(Exponent(3))), DomainError);
}

TEST_CASE("powers, quotients and derivatives") {
  QSeries a = poly({{0, 1}, {1, 1}});
  CHECK(pow(a, 3) == poly({{0, 1}, {1, 3}, {2, 3}, {3, 1}}));
  CHECK(divide(pow(a, 3), a, Exponent(6)) == pow(a, 2).truncated(6));
  CHECK(derivative(q(Exponent(1, 10))) == QSeries::monomial(Exponent(1, 10), ratio(1, 10)));
  CHECK(derivative(QSeries::constant(Rational(1))).empty());
  CHECK(pow(q(Exponent(1, 2)), -2) == q(-1));
}

TEST_CASE("json and text round trips") {
  QSeries f = poly({{Exponent(-1, 24), 1}, {Exponent(23, 24), -1}, {Exponent(47, 24), 2}}, Exponent(3));
  CHECK(from_json<Rational>(to_json(f)) == f);
  CHECK(to_text(f).find("O(q^(3))") != std::string::npos);
  auto r5 = embed<Root5>(f);
  CHECK(from_json<Root5>(to_json(r5)) == r5);
}

TEST_CASE("approximate comparison") {
  QSeries f = poly({{0, 1}, {1, 3}}, Exponent(4));
  auto c = embed_complex(embed<Gauss>(f), 128);
  auto d = embed<BigComplex>(f, 128);
  CHECK(compare_approx(c, d, Exponent(4), BigFloat::two_pow(-100, 128)).equal);
  auto e = embed<BigComplex>(poly({{0, 1}, {1, 4}}, Exponent(4)), 128);
  auto r = compare_approx(c, e, Exponent(4), BigFloat::two_pow(-100, 128));
  CHECK_FALSE(r.equal);
  CHECK(*r.exponent == Exponent(1));
}
