#include <gtest/gtest.h>

#include "smixup/matcher.hpp"
#include "smixup/mixup.hpp"
#include "smixup/training.hpp"
#include "test_support.hpp"

namespace smixup {
namespace {

using testing::graph_invariant_violation;

// Pairwise definition of the rank statistic, ties counting half.
double pairwise_auc(const std::vector<double>& scores, const std::vector<int>& positive) {
  double wins = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!positive[i]) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (positive[j]) continue;
      pairs += 1.0;
      if (scores[i] > scores[j]) wins += 1.0;
      if (scores[i] == scores[j]) wins += 0.5;
    }
  }
  return wins / pairs;
}

TEST(RocAuc, MatchesPairwiseOracle) {
  Rng rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 30;
    std::vector<double> scores;
    std::vector<int> positive;
    for (int i = 0; i < n; ++i) {
      // Coarse scores force plenty of ties.
      scores.push_back(std::floor(rng.uniform() * 5.0) / 5.0);
      positive.push_back(rng.uniform() < 0.5);
    }
    positive[0] = 1;
    positive[1] = 0;
    const auto auc = roc_auc(scores, positive);
    ASSERT_TRUE(auc.has_value());
    EXPECT_NEAR(*auc, pairwise_auc(scores, positive), 1e-12);
  }
}

TEST(RocAuc, ExtremesAndMissingClass) {
  EXPECT_EQ(roc_auc({0.1, 0.2, 0.8, 0.9}, {0, 0, 1, 1}), 1.0);
  EXPECT_EQ(roc_auc({0.9, 0.8, 0.2, 0.1}, {0, 0, 1, 1}), 0.0);
  EXPECT_EQ(roc_auc({0.5, 0.5}, {0, 1}), 0.5);
  EXPECT_FALSE(roc_auc({0.1, 0.2}, {1, 1}).has_value());
}

TEST(Accuracy, PerfectAndRandomPredictors) {
  std::vector<Vector> scores;
  std::vector<int> labels;
  Rng rng(2);
  for (int i = 0; i < 10000; ++i) {
    labels.push_back(i % 2);
    scores.push_back(one_hot(i % 2, 2));
  }
  EXPECT_EQ(accuracy(scores, labels), 1.0);
  for (Vector& s : scores) s = (Vector(2) << rng.uniform(), rng.uniform()).finished();
  EXPECT_NEAR(accuracy(scores, labels), 0.5, 0.02);
}

// Two classes whose graphs differ only in a constant node feature.
GraphDataset separable(int per_class, std::uint64_t seed) {
  Rng rng(seed);
  GraphDataset ds;
  ds.name = "separable";
  ds.num_classes = 2;
  ds.feature_dim = 1;
  for (int k = 0; k < 2 * per_class; ++k) {
    const int cls = k % 2;
    const int n = 3 + static_cast<int>(rng.uniform_index(4));
    Graph g = testing::random_graph(rng, n, 1, 2);
    g.features = Matrix::Constant(n, 1, cls == 0 ? -1.0 : 1.0);
    g.label = one_hot(cls, 2);
    ds.graphs.push_back(g);
  }
  return ds;
}

GnnConfig small_gnn(Backbone b) {
  GnnConfig cfg;
  cfg.backbone = b;
  cfg.num_layers = 2;
  cfg.hidden = 8;
  cfg.num_classes = 2;
  cfg.feature_dim = 1;
  return cfg;
}

ClassifierTrainConfig quick(int epochs) {
  ClassifierTrainConfig cfg;
  cfg.learning_rate = 0.01;
  cfg.epochs = epochs;
  cfg.batch_size = 8;
  cfg.seed = 4;
  return cfg;
}

TEST(TrainClassifier, SeparableDataReachesPerfectTrainingAccuracy) {
  const GraphDataset train = separable(30, 3);
  for (Backbone b : {Backbone::gcn, Backbone::gin}) {
    const ClassifierTrainResult r = train_classifier(train, train, nullptr, small_gnn(b), quick(50));
    EXPECT_EQ(evaluate(r.params, train).accuracy, 1.0) << to_string(b);
    EXPECT_EQ(r.records.size(), 50u);
    const MetricsRecord& last = r.records.back();
    EXPECT_TRUE(std::isfinite(last.train_loss));
    EXPECT_TRUE(last.test_auc.has_value());
  }
}

TEST(TrainClassifier, DeterministicMetricsSequence) {
  const GraphDataset train = separable(10, 5);
  const GraphDataset val = separable(4, 6);
  const auto a = train_classifier(train, val, &val, small_gnn(Backbone::gin), quick(5));
  const auto b = train_classifier(train, val, &val, small_gnn(Backbone::gin), quick(5));
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t k = 0; k < a.records.size(); ++k) {
    EXPECT_EQ(a.records[k].train_loss, b.records[k].train_loss);
    EXPECT_EQ(a.records[k].val_acc, b.records[k].val_acc);
    EXPECT_EQ(a.records[k].test_loss, b.records[k].test_loss);
  }
  EXPECT_EQ(a.best_epoch, b.best_epoch);
}

TEST(TrainClassifier, BestEpochHasHighestValidationAccuracy) {
  const GraphDataset train = separable(10, 7);
  const GraphDataset val = separable(5, 8);
  const auto r = train_classifier(train, val, nullptr, small_gnn(Backbone::gcn), quick(8));
  double best = -1.0;
  int best_epoch = -1;
  for (const MetricsRecord& m : r.records) {
    if (m.val_acc > best) {
      best = m.val_acc;
      best_epoch = m.epoch;
    }
  }
  EXPECT_EQ(r.best_epoch, best_epoch);
  EXPECT_EQ(evaluate(r.params, val).accuracy, best);
}

TEST(TrainClassifier, AugmentedBatchesCarrySimplexLabelsAndSplitsStayIntact) {
  const GraphDataset train = separable(10, 9);
  const GraphDataset val = separable(4, 10);
  const GraphDataset val_copy = val;
  MatcherConfig mc;
  mc.num_layers = 1;
  mc.hidden = 4;
  mc.feature_dim = 1;
  const MatcherParams matcher = init_matcher(mc, 1);
  MixupConfig cfg;
  int batches = 0;
  const Augmenter augment = [&](std::span<const Graph> batch, Rng& rng) {
    std::vector<Graph> out = batch_mixup(batch, &matcher, cfg, rng).graphs;
    for (const Graph& g : out) EXPECT_EQ(graph_invariant_violation(g), "");
    ++batches;
    return out;
  };
  train_classifier(train, val, &val, small_gnn(Backbone::gin), quick(3), augment);
  EXPECT_EQ(batches, 3 * 3);
  for (std::size_t k = 0; k < val.size(); ++k) {
    EXPECT_EQ(val.graphs[k].adjacency, val_copy.graphs[k].adjacency);
    EXPECT_EQ(val.graphs[k].label, val_copy.graphs[k].label);
  }
}

TEST(TrainClassifier, EmptyInputsThrow) {
  GraphDataset empty;
  empty.num_classes = 2;
  empty.feature_dim = 1;
  const GraphDataset train = separable(3, 11);
  EXPECT_THROW(train_classifier(empty, train, nullptr, small_gnn(Backbone::gcn), quick(1)), std::invalid_argument);
  EXPECT_THROW(evaluate(init_gnn(small_gnn(Backbone::gcn), 0), empty), std::invalid_argument);
}

}  // namespace
}  // namespace smixup
