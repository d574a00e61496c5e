#include <benchmark/benchmark.h>

#include <random>

#include "adm/horn.hpp"

namespace {

adm::UnitVec random_unit(std::mt19937_64& rng, Eigen::Index dim) {
  std::normal_distribution<double> g;
  adm::Vector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = adm::Complex(g(rng), g(rng));
  return adm::UnitVec::normalized(v);
}

void BM_MixTwo(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto dim = static_cast<Eigen::Index>(state.range(0));
  const auto u = random_unit(rng, dim);
  const auto v = random_unit(rng, dim);
  for (auto _ : state) {
    auto m = adm::mix_two(1.2, 0.4, u, v, 0.9, 0.7);
    benchmark::DoNotOptimize(m.sigma);
  }
}
BENCHMARK(BM_MixTwo)->Arg(2)->Arg(16)->Arg(128);

}  // namespace
