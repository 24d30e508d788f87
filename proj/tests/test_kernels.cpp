#include <doctest.h>

#include <random>

#include "nahmlab/kernels.hpp"
#include "nahmlab/nahm.hpp"

using namespace nahmlab;
using kernels::SparseTerm;

namespace {

std::vector<SparseTerm<Rational>> random_sparse(std::mt19937_64& rng, int n, int stride, int spread) {
  std::uniform_int_distribution<int> gap(1, spread), coeff(-9, 9);
  std::vector<SparseTerm<Rational>> v;
  std::int64_t k = std::uniform_int_distribution<int>(-5, 5)(rng) * stride;
  for (int i = 0; i < n; ++i) {
    int c = coeff(rng);
    if (c != 0) v.push_back({k, Rational(c)});
    k += gap(rng) * stride;
  }
  return v;
}

bool same(const std::vector<SparseTerm<Rational>>& a, const std::vector<SparseTerm<Rational>>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].key != b[i].key || a[i].coeff != b[i].coeff) return false;
  return true;
}

}  // namespace

TEST_CASE("parallel convolution equals the serial reference") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    int stride = 1 + trial % 3;
    auto a = random_sparse(rng, 30 + trial * 7, stride, 4);
    auto b = random_sparse(rng, 20 + trial * 5, stride, 3);
    std::int64_t limit = 50 + trial * 13;
    auto ref = kernels::convolve_reference<Rational>(a, b, limit);
    for (int threads : {1, 2, 4}) CHECK(same(kernels::convolve<Rational>(a, b, limit, threads), ref));
  }
}

TEST_CASE("convolution keeps keys below the limit only") {
  std::vector<SparseTerm<Rational>> a{{0, Rational(1)}, {1, Rational(1)}};
  auto r = kernels::convolve<Rational>(a, a, 2, 1);
  REQUIRE(r.size() == 2);
  CHECK(r[0].key == 0);
  CHECK(r[1].coeff == 2);
  CHECK(kernels::convolve<Rational>(a, a, 0, 1).empty());
}

TEST_CASE("dense binomial updates invert each other") {
  std::vector<Rational> f{Rational(1), Rational(2), Rational(0), Rational(-1), Rational(5), Rational(3)};
  auto g = f;
  kernels::mul_binomial(g, 2, -1);
  kernels::div_binomial(g, 2, -1);
  CHECK(g == f);
  kernels::mul_binomial(g, 1, Rational(3));
  kernels::div_binomial(g, 1, Rational(3));
  CHECK(g == f);
  std::vector<Rational> one(8, Rational(0));
  one[0] = 1;
  kernels::div_pochhammer(one, 1, 2);  // 1/((1-q)(1-q^2)): floor(n/2) + 1
  for (std::size_t n = 0; n < one.size(); ++n) CHECK(one[n] == Rational(static_cast<long>(n / 2 + 1)));
}

TEST_CASE("lattice enumeration equals the box reference") {
  std::vector<NahmTriple> triples;
  triples.push_back({tadpole(3), {0, 0, 0}, 0});
  triples.push_back({tadpole(3), {Rational(-1), Rational(1), ratio(-1, 2)}, 0});
  triples.push_back({tadpole(2), {ratio(1, 2), 0}, ratio(-1, 24)});
  triples.push_back({tadpole_inverse(3), {ratio(1, 2), 1, ratio(3, 2)}, 0});
  triples.push_back({parse_matrix("2,1;1,2"), {0, 1}, 0});
  for (const auto& t : triples) {
    auto ref = nahm_sum_reference(t, Exponent(14));
    for (int threads : {1, 3}) {
      NahmOptions o;
      o.threads = threads;
      CHECK(nahm_sum(t, Exponent(14), o) == ref);
    }
  }
  std::vector<int> signs{1, -1, 1};
  NahmOptions o;
  o.signs = signs;
  CHECK(nahm_sum(triples[0], Exponent(12), o) == nahm_sum_reference(triples[0], Exponent(12), signs));
}
