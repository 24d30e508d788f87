// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include "nahmlab/kernels.hpp"
#include "nahmlab/nahm.hpp"
#include "nahmlab/products.hpp"

using namespace nahmlab;

namespace {

std::vector<kernels::SparseTerm<Rational>> dense_terms(const QSeries& s) {
  return {s.terms().begin(), s.terms().end()};
}

void BM_convolve(benchmark::State& st) {
  const std::int64_t n = st.range(0);
  auto a = dense_terms(pochhammer(1, Rational(1), Rational(1), std::nullopt, n).scaled(Rational(3)));
  auto b = dense_terms(invert(pochhammer(1, Rational(1), Rational(1), std::nullopt, n)));
  const int threads = static_cast<int>(st.range(1));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::convolve<Rational>(a, b, n, threads));
}

void BM_convolve_reference(benchmark::State& st) {
  const std::int64_t n = st.range(0);
  auto a = dense_terms(pochhammer(1, Rational(1), Rational(1), std::nullopt, n).scaled(Rational(3)));
  auto b = dense_terms(invert(pochhammer(1, Rational(1), Rational(1), std::nullopt, n)));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::convolve_reference<Rational>(a, b, n));
}

void BM_nahm_sum(benchmark::State& st) {
  NahmTriple t{tadpole(3), {0, 0, Rational(1, 2)}, 0};
  NahmOptions o;
  o.threads = static_cast<int>(st.range(1));
  for (auto _ : st) benchmark::DoNotOptimize(nahm_sum(t, Exponent(st.range(0)), o));
}

void BM_nahm_sum_reference(benchmark::State& st) {
  NahmTriple t{tadpole(3), {0, 0, Rational(1, 2)}, 0};
  for (auto _ : st) benchmark::DoNotOptimize(nahm_sum_reference(t, Exponent(st.range(0))));
}

}  // namespace

BENCHMARK(BM_convolve)->Args({400, 1})->Args({400, 0})->Args({1600, 1})->Args({1600, 0});
BENCHMARK(BM_convolve_reference)->Arg(400)->Arg(1600);
BENCHMARK(BM_nahm_sum)->Args({20, 1})->Args({20, 0})->Args({40, 1})->Args({40, 0});
BENCHMARK(BM_nahm_sum_reference)->Arg(20)->Arg(40);

BENCHMARK_MAIN();
