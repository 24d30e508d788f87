#include <doctest.h>

#include "nahmlab/products.hpp"
#include "oracles.hpp"

using namespace nahmlab;

namespace {

QSeries ex(std::string_view text, Exponent depth) { return expand(text, depth); }

bool same_to(const QSeries& a, const QSeries& b, Exponent depth) { return compare(a, b, depth).equal; }

}  // namespace

TEST_CASE("finite and infinite pochhammer symbols") {
  CHECK(pochhammer(1, Rational(1), Rational(1), 1, 10) == QSeries::from_map({{0, 1}, {1, -1}}));
  // (q;q)_3 is an exact polynomial
  QSeries f = pochhammer(1, Rational(1), Rational(1), 3, 100);
  CHECK(f.is_exact());
  CHECK(f == ex("(1-qpow(1))*(1-qpow(2))*(1-qpow(3))", 100));
  // (-q^(1/2); q)_inf = sum q^(n^2/2) / (q;q)_n
  QSeries g = pochhammer(-1, ratio(1, 2), Rational(1), std::nullopt, 2);
  QSeries want = QSeries::from_map({{0, 1}, {Exponent(1, 2), 1}, {Exponent(3, 2), 1}}, Exponent(2));
  CHECK(g == want);
  CHECK_THROWS_AS(pochhammer(1, Rational(0), Rational(1), std::nullopt, 5), DomainError);
  CHECK_THROWS_AS(pochhammer(1, Rational(-1), Rational(1), std::nullopt, 5), DomainError);
}

TEST_CASE("euler's second identity as an independent oracle") {
  // (-q^(1/2);q)_inf counts partitions into distinct parts with weight q^(1/2) per part
  const int N = 30;
  QSeries prod = pochhammer(-1, ratio(1, 2), Rational(1), std::nullopt, N);
  std::map<Exponent, Rational> sum;
  QSeries acc = QSeries::zero(Exponent(N));
  for (int n = 0; n * n < 2 * N; ++n) {
    QSeries den = pochhammer(1, Rational(1), Rational(1), n, N);
    acc += divide(QSeries::monomial(Exponent(n * n, 2), Rational(1)), den, Exponent(N));
  }
  CHECK(same_to(prod, acc, N));
}

TEST_CASE("theta functions as products") {
  const Exponent N(60);
  QSeries t2 = expand_atom(Theta2Atom{}, N);
  QSeries t3 = expand_atom(Theta3Atom{}, N);
  CHECK(t2.coefficient(Exponent(1, 4)) == 2);
  CHECK(t2.coefficient(Exponent(9, 4)) == 2);
  CHECK(t2.coefficient(Exponent(5, 4)) == 0);
  CHECK(t3.coefficient(1) == 2);
  CHECK(t3.coefficient(4) == 2);
  CHECK(t3.coefficient(2) == 0);
  CHECK(same_to(t2, ex("2*qpow(1/4)*J(4)^2/J(2)", N), N));
  CHECK(same_to(t3, ex("J(2)^5/(J(1)^2*J(4)^2)", N), N));
}

TEST_CASE("eta and generalized eta") {
  const Exponent N(40);
  QSeries eta = expand_atom(EtaAtom{}, N);
  CHECK(same_to(eta, shift(oracle::from_dense(oracle::pentagonal(40)), Exponent(1, 24)), N));
  CHECK(bernoulli_p2(ratio(1, 5)) == ratio(1, 25) - ratio(1, 5) + ratio(1, 6));
  CHECK(bernoulli_p2(ratio(6, 5)) == bernoulli_p2(ratio(1, 5)));
  // 10 * (1/25 - 1/5 + 1/6) = 1/15
  CHECK(generalized_eta_prefactor(20, 4) == ratio(1, 15));
  QSeries ge = expand_atom(GenEtaAtom{20, 4}, N);
  CHECK(leading_term(ge)->exponent == Exponent(1, 15));
  CHECK(same_to(ge, ex("qpow(1/15)*Jam(4,20)/J(20)", N), N));
  CHECK_THROWS_AS(validate_atom(GenEtaAtom{4, 4}), DomainError);
  CHECK_THROWS_AS(validate_atom(GenEtaAtom{4, 0}), DomainError);
}

TEST_CASE("J atoms") {
  const Exponent N(50);
  CHECK(same_to(expand_atom(JAtom{3}, N), substitute_power(expand_atom(JAtom{1}, N), Exponent(3)), N));
  CHECK(same_to(expand_atom(JamAtom{1, 5}, N), ex("P(+1;5;inf)*P(+4;5;inf)*J(5)", N), N));
  CHECK_THROWS_AS(validate_atom(JAtom{0}), DomainError);
  CHECK_THROWS_AS(validate_atom(JamAtom{5, 5}), DomainError);
  CHECK_THROWS_AS(validate_atom(JamAtom{0, 5}), DomainError);
}

TEST_CASE("weber functions") {
  const Exponent N(40);
  QSeries f = ex("weber(f)", N), f1 = ex("weber(f1)", N), f2 = ex("weber(f2)", N);
  CHECK(leading_term(f)->exponent == Exponent(-1, 48));
  CHECK(leading_term(f2)->exponent == Exponent(1, 24));
  // two expansion paths for f * f1
  CHECK(same_to(f * f1, ex("qpow(-1/24)*P(+1;2;inf)", N), N - 1));
  // with f2 normalized without sqrt2 the triple product is 1
  CHECK(same_to(f * f1 * f2, QSeries::constant(Rational(1)), N - 1));
}

TEST_CASE("two-term identity for J1 squared") {
  const Exponent N(200);
  CHECK(same_to(ex("J(1)^2", N), ex("J(2)*J(8)^5/(J(4)^2*J(16)^2) - 2*qpow(1)*J(2)*J(16)^2/J(8)", N), N));
}

TEST_CASE("expansion errors") {
  CHECK_THROWS_AS(ex("J(1)/(J(1)-J(1))", 5), DomainError);
  // a Laurent unit: q^-1 (1 - q + q^2 - ...)
  QSeries u = ex("1/(qpow(1)+qpow(2))", 5);
  CHECK(leading_term(u)->exponent == Exponent(-1));
  CHECK(u.coefficient(1) == 1);
  CHECK(u.coefficient(2) == -1);
  CHECK(ex("qpow(1)/qpow(1)", 5) == QSeries::constant(Rational(1)));
}
