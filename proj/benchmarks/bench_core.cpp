#include <benchmark/benchmark.h>

#include "qdesign/designs.hpp"
#include "qdesign/info.hpp"
#include "qdesign/optimize.hpp"
#include "qdesign/random.hpp"

using namespace qdesign;

static void BM_BornStatistics(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const WeightedStateSet set = d == 4 ? builtin_mub(4) : builtin_mub(static_cast<int>(d));
  const Ensemble e = as_ensemble(set);
  const Povm p = as_povm(set);
  for (auto _ : state) {
    benchmark::DoNotOptimize(born_statistics(e, p));
  }
}
BENCHMARK(BM_BornStatistics)->Arg(2)->Arg(3)->Arg(4);

static void BM_CheckDesign(benchmark::State& state) {
  const WeightedStateSet set = builtin_mub(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(check_design(set, 2));
  }
}
BENCHMARK(BM_CheckDesign)->Arg(2)->Arg(3)->Arg(4);

static void BM_HermitianSqrt(benchmark::State& state) {
  Rng rng(5);
  const DensityOperator rho = random_density(static_cast<int>(state.range(0)), rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hermitian_sqrt(rho));
  }
}
BENCHMARK(BM_HermitianSqrt)->Arg(4)->Arg(8)->Arg(16);

static void BM_AccInfoGradient(benchmark::State& state) {
  const Ensemble e = as_ensemble(builtin_mub(3));
  const AccessibleInfoObjective objective(e, 9);
  Rng rng(7);
  const ComplexMatrix a = random_isometry(9, 3, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(objective.gradient_at(a));
  }
}
BENCHMARK(BM_AccInfoGradient);

static void BM_MutualInformation(benchmark::State& state) {
  const WeightedStateSet set = builtin_mub(4);
  const JointDistribution j =
      born_statistics(as_ensemble(set), as_povm(d4_orthonormal_witness()));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mutual_information(j));
  }
}
BENCHMARK(BM_MutualInformation);

BENCHMARK_MAIN();
