#include <benchmark/benchmark.h>

#include "henon/asymptotics.hpp"
#include "henon/morse.hpp"

using namespace henon;

namespace {

constexpr double kP = 4.0;

void BM_SolveRadial(benchmark::State& st) {
  const ProblemParams params{3, kP, static_cast<int>(st.range(0)), 10.0};
  for (auto _ : st) benchmark::DoNotOptimize(solve_radial(params, Tolerances{}));
}
BENCHMARK(BM_SolveRadial)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_SolveHalfline(benchmark::State& st) {
  const int K = static_cast<int>(st.range(0));
  const double g = ProblemParams{3, kP, K, 10.0}.gamma();
  for (auto _ : st) benchmark::DoNotOptimize(solve_halfline(g, kP, K, 40.0, 1e-3, Tolerances{}));
}
BENCHMARK(BM_SolveHalfline)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_NegativeSpectrum(benchmark::State& st) {
  const int K = static_cast<int>(st.range(0));
  const double g = ProblemParams{3, kP, K, 10.0}.gamma();
  const auto U = solve_halfline(g, kP, K, 40.0, 1e-3, Tolerances{});
  for (auto _ : st) benchmark::DoNotOptimize(negative_spectrum(g, U, K));
}
BENCHMARK(BM_NegativeSpectrum)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

// Finite-difference oracle; the argument is 1/h.
void BM_DiscretizedSpectrum(benchmark::State& st) {
  const int K = 2;
  const double g = ProblemParams{3, kP, K, 10.0}.gamma();
  const auto U = solve_halfline(g, kP, K, 40.0, 1e-3, Tolerances{});
  const double h = 1.0 / static_cast<double>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(discretized_spectrum(g, U, 40.0, h, K));
}
BENCHMARK(BM_DiscretizedSpectrum)->Arg(500)->Arg(1000)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_LimitData(benchmark::State& st) {
  const Family f{3, kP, static_cast<int>(st.range(0))};
  for (auto _ : st) benchmark::DoNotOptimize(compute_limit_data(f, SpectrumSettings{}));
}
BENCHMARK(BM_LimitData)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_MorseIndex(benchmark::State& st) {
  const double a = static_cast<double>(st.range(0));
  const auto spec = spectrum_at_alpha({3, kP, 2, a}, SpectrumSettings{});
  for (auto _ : st) benchmark::DoNotOptimize(morse_index({3, kP, 2, a}, spec));
}
BENCHMARK(BM_MorseIndex)->Arg(10)->Arg(40)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
