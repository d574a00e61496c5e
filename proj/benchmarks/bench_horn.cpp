#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "adm/horn.hpp"

namespace {

// eta = (2, 0, 2, 0, ...) on an orthonormal basis, xi all ones.
void BM_HornChain(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> eta(n), xi(n, 1.0);
  std::vector<adm::UnitVec> e;
  for (std::size_t i = 0; i < n; ++i) {
    eta[i] = i % 2 == 0 ? 2.0 : 0.0;
    e.push_back(adm::UnitVec::basis(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(i)));
  }
  for (auto _ : state) {
    auto d = adm::horn_decompose(eta, e, xi);
    benchmark::DoNotOptimize(d.size());
  }
  state.SetComplexityN(static_cast<benchmark::IterationCount>(n));
}
BENCHMARK(BM_HornChain)->RangeMultiplier(2)->Range(4, 64)->Complexity();

}  // namespace
