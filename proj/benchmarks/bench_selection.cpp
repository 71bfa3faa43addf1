#include <benchmark/benchmark.h>

#include "csfs/evaluation.hpp"
#include "csfs/relevance_matrix.hpp"
#include "csfs/selection.hpp"
#include "csfs/synth.hpp"

namespace {

csfs::Dataset blobs(std::size_t n, std::size_t classes, std::size_t features) {
  csfs::BlobSpec spec;
  spec.n = n;
  spec.classes = classes;
  spec.features = features;
  spec.seed = 1;
  return csfs::synth_blobs(spec);
}

void BM_MeasureOneView(benchmark::State& state) {
  const auto d = blobs(static_cast<std::size_t>(state.range(0)), 4, 1);
  const auto view = csfs::binarize(d, "A");
  const csfs::MeasureSpec spec;
  for (auto _ : state) benchmark::DoNotOptimize(csfs::measure(view, 0, spec));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MeasureOneView)->Arg(100)->Arg(1000)->Arg(10000);

void BM_OvA(benchmark::State& state) {
  const auto d = blobs(2000, static_cast<std::size_t>(state.range(0)), 20);
  const csfs::SelectionContext ctx{{1}, nullptr};
  for (auto _ : state) benchmark::DoNotOptimize(csfs::ova(d, {}, ctx));
}
BENCHMARK(BM_OvA)->Arg(2)->Arg(4)->Arg(8);

void BM_DOvE(benchmark::State& state) {
  const auto d = blobs(2000, static_cast<std::size_t>(state.range(0)), 20);
  const csfs::SelectionContext ctx{{1}, nullptr};
  for (auto _ : state) benchmark::DoNotOptimize(csfs::dove(d, {}, ctx));
}
BENCHMARK(BM_DOvE)->Arg(2)->Arg(4)->Arg(8);

void BM_DOvEThreads(benchmark::State& state) {
  const auto d = blobs(4000, 8, 40);
  const csfs::SelectionContext ctx{{static_cast<unsigned>(state.range(0))}, nullptr};
  for (auto _ : state) benchmark::DoNotOptimize(csfs::dove(d, {}, ctx));
}
BENCHMARK(BM_DOvEThreads)->Arg(1)->Arg(2)->Arg(4)->UseRealTime();

void BM_FitThreeLayer(benchmark::State& state) {
  const auto d = blobs(2000, static_cast<std::size_t>(state.range(0)), 10);
  const auto matrix = csfs::build_matrix(csfs::dove(d, {}));
  const csfs::SchemeSpec spec;
  for (auto _ : state) benchmark::DoNotOptimize(csfs::build_scheme(d, spec, matrix, {1}));
}
BENCHMARK(BM_FitThreeLayer)->Arg(4)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
