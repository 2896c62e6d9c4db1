#include "smixup/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "smixup/autodiff.hpp"
#include "smixup/optimizer.hpp"

namespace smixup {

namespace {

void check_shapes(const GraphDataset& ds, const GnnConfig& model, const char* what) {
  for (const Graph& g : ds.graphs) {
    if (g.feature_dim() != model.feature_dim || g.num_classes() != model.num_classes) {
      throw std::invalid_argument(std::string(what) + ": graph shape does not match the model");
    }
  }
}

int argmax(const Vector& v) {
  Index best = 0;
  for (Index i = 1; i < v.size(); ++i) {
    if (v(i) > v(best)) best = i;
  }
  return static_cast<int>(best);
}

}  // namespace

double accuracy(const std::vector<Vector>& scores, const std::vector<int>& labels) {
  if (scores.empty() || scores.size() != labels.size()) throw std::invalid_argument("accuracy: bad input sizes");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) hits += argmax(scores[i]) == labels[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(scores.size());
}

std::optional<double> roc_auc(const std::vector<double>& scores, const std::vector<int>& positive) {
  if (scores.size() != positive.size()) throw std::invalid_argument("roc_auc: size mismatch");
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  std::vector<double> rank(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg;
    i = j + 1;
  }
  double pos = 0.0;
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (positive[i] != 0) {
      pos += 1.0;
      rank_sum += rank[i];
    }
  }
  const double neg = static_cast<double>(n) - pos;
  if (pos == 0.0 || neg == 0.0) return std::nullopt;
  return (rank_sum - pos * (pos + 1.0) / 2.0) / (pos * neg);
}

EvalMetrics evaluate(const GnnParams& params, const GraphDataset& test) {
  if (test.empty()) throw std::invalid_argument("evaluate: empty test set");
  check_shapes(test, params.config, "evaluate");
  std::vector<Vector> probs;
  std::vector<int> labels;
  probs.reserve(test.size());
  labels.reserve(test.size());
  EvalMetrics m;
  for (const Graph& g : test.graphs) {
    probs.push_back(classifier_forward(g, params));
    labels.push_back(g.class_index());
    m.loss += soft_cross_entropy(probs.back(), g.label);
  }
  m.loss /= static_cast<double>(test.size());
  m.accuracy = accuracy(probs, labels);
  if (params.config.num_classes == 2) {
    std::vector<double> scores;
    scores.reserve(probs.size());
    for (const Vector& p : probs) scores.push_back(p(1));
    m.roc_auc = roc_auc(scores, labels);
  }
  return m;
}

ClassifierTrainResult train_classifier(const GraphDataset& train, const GraphDataset& val, const GraphDataset* test,
                                       const GnnConfig& model, const ClassifierTrainConfig& config,
                                       const Augmenter& augmenter, int run) {
  if (train.empty()) throw std::invalid_argument("train_classifier: empty training set");
  if (val.empty()) throw std::invalid_argument("train_classifier: empty validation set");
  if (config.epochs < 1) throw std::invalid_argument("train_classifier: epochs must be >= 1");
  if (config.batch_size < 1) throw std::invalid_argument("train_classifier: batch_size must be >= 1");
  check_shapes(train, model, "train_classifier");
  check_shapes(val, model, "train_classifier");
  const GraphDataset& scored = test != nullptr ? *test : val;
  check_shapes(scored, model, "train_classifier");

  Rng rng(config.seed);
  GnnParams params = init_gnn(model, rng.split());
  Adam adam(config.learning_rate);

  ClassifierTrainResult result;
  result.params = params;
  double best_val = -1.0;

  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  const auto batch = static_cast<std::size_t>(config.batch_size);

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    rng.shuffle(order);
    double loss_sum = 0.0;
    std::size_t loss_count = 0;
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t stop = std::min(order.size(), start + batch);
      std::vector<Graph> graphs;
      graphs.reserve(stop - start);
      for (std::size_t k = start; k < stop; ++k) graphs.push_back(train.graphs[order[k]]);
      if (augmenter) graphs = augmenter(graphs, rng);

      ad::Tape tape;
      std::vector<ad::Var> losses;
      losses.reserve(graphs.size());
      for (const Graph& g : graphs) {
        ad::Var probs = ad::row_softmax(classifier_logits(tape, g, params));
        losses.push_back(soft_cross_entropy(probs, g.label));
      }
      ad::Var total = losses.front();
      for (std::size_t k = 1; k < losses.size(); ++k) total = ad::add(total, losses[k]);
      ad::Var mean = ad::scale(total, 1.0 / static_cast<double>(losses.size()));
      adam.step(params.weights, tape.gradients(mean));
      loss_sum += mean.value()(0, 0);
      ++loss_count;
    }

    MetricsRecord rec;
    rec.run = run;
    rec.epoch = epoch;
    rec.train_loss = loss_sum / static_cast<double>(loss_count);
    rec.val_acc = evaluate(params, val).accuracy;
    const EvalMetrics t = test != nullptr ? evaluate(params, *test) : evaluate(params, val);
    rec.test_loss = t.loss;
    rec.test_acc = t.accuracy;
    rec.test_auc = t.roc_auc;
    result.records.push_back(rec);
    if (rec.val_acc > best_val) {
      best_val = rec.val_acc;
      result.params = params;
      result.best_epoch = epoch;
    }
  }
  return result;
}

}  // namespace smixup
