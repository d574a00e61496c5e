#include <benchmark/benchmark.h>

#include "adm/carpenter.hpp"
#include "adm/stream.hpp"

namespace {

void run(benchmark::State& state, const adm::WeightSeq& xi) {
  const auto e = adm::ProjectionStream::block_overlap(3, 0);
  adm::CarpenterOptions opts;
  opts.stages = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto r = adm::carpenter_decompose(xi, e, opts);
    benchmark::DoNotOptimize(r.max_residual);
  }
}

void BM_MuDiverges(benchmark::State& state) {
  run(state, adm::WeightSeq::interleave({adm::WeightSeq::periodic({}, {0.4}), adm::WeightSeq::periodic({}, {0.9})}));
}
BENCHMARK(BM_MuDiverges)->Arg(5)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_KeyCase(benchmark::State& state) {
  run(state, adm::WeightSeq::one_minus_geometric({}, 0.4, 0.6));
}
BENCHMARK(BM_KeyCase)->Arg(5)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace
