#include <benchmark/benchmark.h>

#include "gaussep/ensembles.hpp"
#include "gaussep/separability.hpp"

namespace {

using namespace gaussep;

void BM_SymEig(benchmark::State& st) {
  const int modes = static_cast<int>(st.range(0));
  const SymMatrix sigma = random_bonafide_covariance(modes, 7, 0.6, 1.0);
  for (auto _ : st) benchmark::DoNotOptimize(sym_eig(sigma));
}
BENCHMARK(BM_SymEig)->Arg(1)->Arg(2)->Arg(4)->Arg(8);

void BM_Williamson(benchmark::State& st) {
  const int modes = static_cast<int>(st.range(0));
  const SymMatrix sigma = random_bonafide_covariance(modes, 11, 0.6, 1.0);
  const SymplecticForm j = standard_J(modes);
  for (auto _ : st) benchmark::DoNotOptimize(williamson(sigma, j));
}
BENCHMARK(BM_Williamson)->Arg(1)->Arg(2)->Arg(4)->Arg(8);

// Separable noisy TMSV pairs, so the feasibility solver runs every time.
void BM_Criterion(benchmark::State& st) {
  const int pairs = static_cast<int>(st.range(0));
  const GaussianState state =
      make_state(tmsv_noisy_covariance(0.5, 0.8, 1.0, pairs), Vector(), 1.0, Partition(pairs, pairs));
  for (auto _ : st) benchmark::DoNotOptimize(degosson_criterion(state));
}
BENCHMARK(BM_Criterion)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_PptOnly(benchmark::State& st) {
  const GaussianState state = make_state(tmsv_covariance(0.5, 1.0), Vector(), 1.0, Partition(1, 1));
  for (auto _ : st) benchmark::DoNotOptimize(ppt_test(state));
}
BENCHMARK(BM_PptOnly);

}  // namespace
BENCHMARK_MAIN();
