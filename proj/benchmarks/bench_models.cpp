#include <benchmark/benchmark.h>

#include "smixup/gnn.hpp"
#include "smixup/matcher.hpp"
#include "smixup/motif.hpp"

namespace smixup {
namespace {

const GraphDataset& motif_graphs() {
  static const GraphDataset ds = [] {
    MotifConfig mc;
    mc.count_per_class = 4;
    mc.seed = 5;
    return gen_motif_dataset(mc);
  }();
  return ds;
}

void BM_ClassifierForward(benchmark::State& state) {
  const GraphDataset& ds = motif_graphs();
  GnnConfig cfg;
  cfg.backbone = state.range(0) == 0 ? Backbone::gcn : Backbone::gin;
  cfg.hidden = static_cast<int>(state.range(1));
  cfg.feature_dim = ds.feature_dim;
  cfg.num_classes = ds.num_classes;
  const GnnParams params = init_gnn(cfg, 1);
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(classifier_forward(ds.graphs[k], params));
    k = (k + 1) % ds.graphs.size();
  }
  state.SetLabel(cfg.backbone == Backbone::gcn ? "gcn" : "gin");
}
BENCHMARK(BM_ClassifierForward)->ArgsProduct({{0, 1}, {32, 128}});

void BM_ComputeAssignment(benchmark::State& state) {
  const GraphDataset& ds = motif_graphs();
  MatcherConfig cfg;
  cfg.num_layers = 3;
  cfg.hidden = static_cast<int>(state.range(0));
  cfg.feature_dim = ds.feature_dim;
  const MatcherParams params = init_matcher(cfg, 2);
  std::size_t k = 0;
  for (auto _ : state) {
    const std::size_t j = (k + 5) % ds.graphs.size();
    benchmark::DoNotOptimize(compute_assignment(ds.graphs[k], ds.graphs[j], params));
    k = (k + 1) % ds.graphs.size();
  }
}
BENCHMARK(BM_ComputeAssignment)->Arg(32)->Arg(128);

}  // namespace
}  // namespace smixup

BENCHMARK_MAIN();
