#include <benchmark/benchmark.h>

#include "brauer/auxprimes.hpp"
#include "brauer/hilbert.hpp"
#include "brauer/verdict.hpp"
#include "support/oracles.hpp"

using namespace brauer;

static void BM_HilbertSymbolOdd(benchmark::State& state) {
  const std::int64_t p = state.range(0);
  for (auto _ : state)
    for (std::int64_t a = 1; a <= 30; ++a) benchmark::DoNotOptimize(hilbert_symbol(a * p, -7 * p, p));
}
BENCHMARK(BM_HilbertSymbolOdd)->Arg(3)->Arg(47)->Arg(1000003);

static void BM_HilbertSymbolTwo(benchmark::State& state) {
  for (auto _ : state)
    for (std::int64_t a = 1; a <= 30; ++a) benchmark::DoNotOptimize(hilbert_symbol(Rational(a, 12), -6, 2));
}
BENCHMARK(BM_HilbertSymbolTwo);

static void BM_ConicOracle(benchmark::State& state) {
  const std::int64_t p = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(oracle::conic_solvable(Rational(-3), Rational(2 * p), p));
}
BENCHMARK(BM_ConicOracle)->Arg(2)->Arg(13)->Arg(47);

static void BM_ProductFormula(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(product_formula_check(Rational(-421362), Rational(91, 60)));
}
BENCHMARK(BM_ProductFormula);

static void BM_PPrimeSieve(benchmark::State& state) {
  const NewformData f = load_fixture(oracle::fixture_dir() / "36.5.json");
  const PrimeLocalData local = local_decompose(f, 2);
  for (auto _ : state) benchmark::DoNotOptimize(qualifying_primes(f, AuxPrimeRequest::from_local(AuxKind::PPrime, local), 4));
}
BENCHMARK(BM_PPrimeSieve);

static void BM_DecideExample(benchmark::State& state) {
  const NewformData f = load_fixture(oracle::fixture_dir() / "20.3.json");
  const Place place = places_above(f, 2).front();
  InertialDescriptor desc;
  desc.p = 2;
  desc.K_disc = BigInt(5);
  desc.a_chi = 1;
  for (auto _ : state) benchmark::DoNotOptimize(decide(f, 2, place, desc));
}
BENCHMARK(BM_DecideExample);

BENCHMARK_MAIN();
