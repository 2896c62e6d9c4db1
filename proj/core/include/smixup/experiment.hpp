#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "smixup/experiment_config.hpp"
#include "smixup/graph.hpp"
#include "smixup/training.hpp"

namespace smixup {

/// One classifier training run at one alpha (absent for vanilla).
struct RunResult {
  int run = 0;
  std::optional<double> alpha;
  int best_epoch = 0;
  EvalMetrics test;
  std::vector<MetricsRecord> records;
};

struct SummaryRow {
  std::string experiment;
  std::string dataset;
  std::string backbone;
  std::string augmentation;
  std::optional<double> alpha;
  std::vector<double> accuracies;
  double mean_acc = 0.0;
  double std_acc = 0.0;
};

struct ExperimentReport {
  std::vector<RunResult> runs;
  std::vector<SummaryRow> summary;
};

/// "vanilla", "s-mixup", "random-mixup" or "identity-mixup".
std::string augmentation_label(const std::optional<Alignment>& alignment);

/// Loads (or generates) and featurises the configured dataset.
GraphDataset load_experiment_dataset(const ExperimentConfig& cfg);

double sample_mean(const std::vector<double>& xs);
/// n - 1 denominator; 0 for fewer than two values.
double sample_std(const std::vector<double>& xs);

/// For every run: split, optionally corrupt training labels, optionally train
/// (or load) a matcher, then train and test one classifier per alpha. The
/// config must have been finalised. Progress lines go to `log` when given.
ExperimentReport run_experiment(const ExperimentConfig& cfg, std::ostream* log = nullptr);

/// Writes metrics.jsonl, runs.csv, summary.csv and config.txt into
/// cfg.output_dir (created if missing).
void write_report(const ExperimentConfig& cfg, const ExperimentReport& report);

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);
void write_runs_csv(std::ostream& out, const std::string& experiment, const std::vector<RunResult>& runs);
void write_metrics_jsonl(std::ostream& out, const std::vector<RunResult>& runs);

}  // namespace smixup
