#include <benchmark/benchmark.h>

#include "smixup/ged.hpp"
#include "smixup/graph.hpp"
#include "smixup/mixup.hpp"
#include "smixup/numerics.hpp"
#include "smixup/rng.hpp"

namespace smixup {
namespace {

Matrix normal_matrix(Rng& rng, Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
  return m;
}

Graph random_graph(Rng& rng, int n, int d) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.uniform() < 0.4) edges.emplace_back(i, j);
    }
  }
  return make_graph(n, edges, normal_matrix(rng, n, d), one_hot(0, 2));
}

void BM_ColumnSoftmax(benchmark::State& state) {
  Rng rng(1);
  const auto n = static_cast<Index>(state.range(0));
  const Matrix s = normal_matrix(rng, n, n);
  for (auto _ : state) benchmark::DoNotOptimize(column_softmax(s));
}
BENCHMARK(BM_ColumnSoftmax)->Arg(8)->Arg(32)->Arg(128);

void BM_Sinkhorn(benchmark::State& state) {
  Rng rng(2);
  const auto n = static_cast<Index>(state.range(0));
  const Matrix s = normal_matrix(rng, n, n);
  for (auto _ : state) benchmark::DoNotOptimize(sinkhorn_normalize(s));
}
BENCHMARK(BM_Sinkhorn)->Arg(8)->Arg(32)->Arg(128);

void BM_SMixupPair(benchmark::State& state) {
  Rng rng(3);
  const int n = static_cast<int>(state.range(0));
  const Graph g1 = random_graph(rng, n, 4);
  const Graph g2 = random_graph(rng, n + 3, 4);
  const Matrix m = column_softmax(normal_matrix(rng, n, n + 3));
  for (auto _ : state) benchmark::DoNotOptimize(s_mixup_pair(g1, g2, m, 0.7));
}
BENCHMARK(BM_SMixupPair)->Arg(16)->Arg(64);

void BM_ExactGed(benchmark::State& state) {
  Rng rng(4);
  const int n = static_cast<int>(state.range(0));
  const Graph a = random_graph(rng, n, 2);
  const Graph b = random_graph(rng, n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(exact_ged(a, b).cost);
}
BENCHMARK(BM_ExactGed)->DenseRange(3, 6);

}  // namespace
}  // namespace smixup
