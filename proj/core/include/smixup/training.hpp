#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "smixup/gnn.hpp"
#include "smixup/graph.hpp"
#include "smixup/rng.hpp"

namespace smixup {

struct ClassifierTrainConfig {
  double learning_rate = 0.01;
  int epochs = 100;
  int batch_size = 32;
  std::uint64_t seed = 0;
};

struct EvalMetrics {
  double accuracy = 0.0;
  /// Mean soft cross-entropy against the stored labels.
  double loss = 0.0;
  /// Present for two-class data containing both classes.
  std::optional<double> roc_auc;
};

struct MetricsRecord {
  int run = 0;
  int epoch = 0;
  double train_loss = 0.0;
  double val_acc = 0.0;
  double test_loss = 0.0;
  double test_acc = 0.0;
  std::optional<double> test_auc;
};

/// Replaces a training batch with the graphs the loss is computed on.
using Augmenter = std::function<std::vector<Graph>(std::span<const Graph> batch, Rng& rng)>;

struct ClassifierTrainResult {
  /// Parameters at the epoch with the best validation accuracy (earliest on ties).
  GnnParams params;
  int best_epoch = 0;
  std::vector<MetricsRecord> records;
};

/// Adam on the mean soft cross-entropy of shuffled mini-batches. With an
/// augmenter every batch is replaced by its output before the loss. After each
/// epoch the model is scored on `val` and on `test` (or `val` again when
/// `test` is null) and one MetricsRecord is appended.
ClassifierTrainResult train_classifier(const GraphDataset& train, const GraphDataset& val, const GraphDataset* test,
                                       const GnnConfig& model, const ClassifierTrainConfig& config,
                                       const Augmenter& augmenter = {}, int run = 0);

EvalMetrics evaluate(const GnnParams& params, const GraphDataset& test);

/// Accuracy of argmax(scores row) against labels.
double accuracy(const std::vector<Vector>& scores, const std::vector<int>& labels);

/// Mann-Whitney estimate of P(score_pos > score_neg), ties counting half.
/// nullopt when either class is absent.
std::optional<double> roc_auc(const std::vector<double>& scores, const std::vector<int>& positive);

}  // namespace smixup
