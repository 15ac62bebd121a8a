#include <benchmark/benchmark.h>

#include "ldpnet/graph.hpp"
#include "ldpnet/ldp.hpp"
#include "ldpnet/measures.hpp"
#include "ldpnet/rng.hpp"

using namespace ldpnet;

namespace {

AtomMeasure random_cloud(int k, uint64_t salt) {
  SubstreamRng rng(1, stream::kTest, salt);
  std::vector<Vec> pts;
  pts.reserve(k);
  for (int i = 0; i < k; ++i)
    pts.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1)});
  return AtomMeasure::uniform(std::move(pts));
}

void BM_ExactTransport(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  auto p = random_cloud(k, 0);
  auto q = random_cloud(k, 1);
  for (auto _ : state) benchmark::DoNotOptimize(wasserstein(p, q));
}

void BM_GraphSample(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto kernel = ConnectionKernel::cosine(1.0, 0.4);
  uint64_t seed = 0;
  for (auto _ : state) {
    auto g = sample_graph(kernel, n, 0.01, ++seed);
    benchmark::DoNotOptimize(g.adjacency.size());
  }
}

void BM_DegreeLaw(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto kernel = ConnectionKernel::cosine(1.0, 0.4);
  std::vector<Arc> arcs{{-kPi, 0.0}, {0.0, kPi}};
  for (auto _ : state) {
    auto law = arc_count_law(kernel, n, 0.05, 0, arcs);
    benchmark::DoNotOptimize(law[0].back());
  }
}

}  // namespace

BENCHMARK(BM_ExactTransport)->Arg(32)->Arg(128)->Arg(250);
BENCHMARK(BM_GraphSample)->Arg(1000)->Arg(10000);
BENCHMARK(BM_DegreeLaw)->Arg(500)->Arg(2000);

BENCHMARK_MAIN();
