#include <benchmark/benchmark.h>

#include "itca/criteria.hpp"
#include "itca/partition.hpp"
#include "itca/search.hpp"

using namespace itca;

namespace {

Dataset shared_dataset() {
  SimulationConfig cfg;
  cfg.k0 = 6;
  cfg.true_partition = Partition::parse("{(1,2),(3,4),(5,6)}");
  cfg.step_length = 3.0;
  cfg.sigma = 1.5;
  cfg.n = 2000;
  cfg.d = 5;
  cfg.seed = 1;
  return simulate(cfg).dataset;
}

void BM_EnumerateOrdinal(benchmark::State& state) {
  const int k0 = static_cast<int>(state.range(0));
  for (auto _ : state) {
    std::size_t count = 0;
    for_each_ordinal(k0, true, [&](const Partition&) { ++count; });
    benchmark::DoNotOptimize(count);
  }
}
BENCHMARK(BM_EnumerateOrdinal)->Arg(8)->Arg(12)->Arg(16);

void BM_EnumerateNominal(benchmark::State& state) {
  const int k0 = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(count_nominal(k0, false));
  }
}
BENCHMARK(BM_EnumerateNominal)->Arg(8)->Arg(10)->Arg(12);

void BM_LdaFitPredict(benchmark::State& state) {
  const Dataset ds = shared_dataset();
  ClassifierSpec spec;
  spec.kind = ClassifierKind::lda;
  for (auto _ : state) {
    const auto clf = fit(spec, ds.features, ds.labels, ds.k0);
    benchmark::DoNotOptimize(clf.predict(ds.features));
  }
}
BENCHMARK(BM_LdaFitPredict);

void BM_RandomForestFit(benchmark::State& state) {
  const Dataset ds = shared_dataset();
  ClassifierSpec spec;
  spec.kind = ClassifierKind::random_forest;
  spec.params.trees = static_cast<int>(state.range(0));
  spec.seed = 2;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit(spec, ds.features, ds.labels, ds.k0));
  }
}
BENCHMARK(BM_RandomForestFit)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_EvaluatePartition(benchmark::State& state) {
  const Dataset ds = shared_dataset();
  const FoldPlan folds = stratified_folds(ds, 5, 1);
  ClassifierSpec spec;
  spec.kind = ClassifierKind::lda;
  const Partition p = Partition::parse("{(1,2),(3,4),(5,6)}");
  const std::array<Criterion, 2> wanted = {Criterion::itca, Criterion::acc};
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_partition(ds, p, spec, folds, wanted));
  }
}
BENCHMARK(BM_EvaluatePartition)->Unit(benchmark::kMillisecond);

void BM_Search(benchmark::State& state) {
  const Dataset ds = shared_dataset();
  SearchConfig cfg;
  cfg.strategy = static_cast<Strategy>(state.range(0));
  cfg.criterion = Criterion::itca;
  cfg.classifier.kind = ClassifierKind::lda;
  cfg.folds = 5;
  cfg.seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_search(ds, cfg));
  }
}
BENCHMARK(BM_Search)
    ->Arg(static_cast<int>(Strategy::exhaustive))
    ->Arg(static_cast<int>(Strategy::greedy))
    ->Arg(static_cast<int>(Strategy::bfs))
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
