// Serial rational reference vs parallel lattice kernel on the same ball
// enumeration. Both must agree on the sup and its witness; the benchmark
// aborts otherwise.

#include <benchmark/benchmark.h>

#include <cstdlib>
#include <iostream>

#include "ucantor/oracle.hpp"

using namespace ucantor;

namespace {

struct Case {
  CantorConfig config;
  MeasureSpec measure;
};

Case make_case(int which) {
  const ProbVector skew({Rational(1, 3), Rational(2, 3)});
  if (which == 0) return {CantorConfig::middle_thirds(), MatchingSequence::uniform()};
  return {CantorConfig(SequenceSpec::constant(2), SequenceSpec({}, GeometricTail{1, Rational(1, 4)})),
          MatchingSequence::constant(skew)};
}

OracleOptions options() {
  OracleOptions o;
  o.eval_depth = 10;
  return o;
}

void check_agreement(const Case& c, long K) {
  const auto fast = sup_doubling_ratio(c.measure, c.config, K, options());
  const auto slow = sup_doubling_series_reference(c.measure, c.config, {K}, options());
  if (fast.sup_ratio_lower != slow.sup_ratio_lower || fast.witness_x != slow.witness_x ||
      fast.witness_r != slow.witness_r) {
    std::cerr << "kernel and reference disagree at K=" << K << '\n';
    std::abort();
  }
}

void BM_Kernel(benchmark::State& state) {
  const Case c = make_case(static_cast<int>(state.range(0)));
  const long K = state.range(1);
  check_agreement(c, K);
  for (auto _ : state) benchmark::DoNotOptimize(sup_doubling_ratio(c.measure, c.config, K, options()));
}

void BM_Reference(benchmark::State& state) {
  const Case c = make_case(static_cast<int>(state.range(0)));
  const long K = state.range(1);
  for (auto _ : state)
    benchmark::DoNotOptimize(sup_doubling_series_reference(c.measure, c.config, {K}, options()));
}

}  // namespace

// Args: (case, K); case 0 = middle-thirds uniform, 1 = c_k = 4^-k with (1/3, 2/3).
BENCHMARK(BM_Kernel)->Args({0, 4})->Args({0, 6})->Args({1, 4})->Args({1, 6})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Reference)->Args({0, 4})->Args({0, 6})->Args({1, 4})->Args({1, 6})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
