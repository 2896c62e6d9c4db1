#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "smixup/dataset_ops.hpp"
#include "smixup/gnn.hpp"
#include "smixup/matcher.hpp"
#include "smixup/mixup.hpp"
#include "smixup/motif.hpp"
#include "smixup/training.hpp"

namespace smixup {

enum class DatasetSource { tudataset, motif };

struct DatasetConfig {
  DatasetSource source = DatasetSource::motif;
  /// Directory holding <name>_A.txt etc. for TUDataset sources.
  std::string path;
  std::string name;
  /// Applied only to unattributed datasets.
  Featurization featurization;
  MotifConfig motif;
};

struct ExperimentConfig {
  std::string name = "experiment";
  DatasetConfig dataset;
  /// num_classes and feature_dim are taken from the loaded data.
  GnnConfig model;
  ClassifierTrainConfig train;
  SplitRatios split;
  int repeats = 10;
  std::uint64_t seed = 0;
  double corrupt_ratio = 0.0;

  /// Empty for vanilla training.
  std::optional<Alignment> alignment;
  MixupConfig mixup;
  /// One summary row per entry; empty means the single mixup.alpha.
  std::vector<double> alpha_grid;

  /// Pre-trained matcher; when empty a matcher is trained on each run's
  /// training split.
  std::string matcher_checkpoint;
  MatcherConfig matcher;
  MatcherTrainConfig matcher_train;

  std::string output_dir = "out";

  /// Keys assigned explicitly (by file or flag), used to decide which
  /// per-dataset defaults still apply.
  std::set<std::string> assigned;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Documented keys with one-line descriptions, in display order.
const std::vector<std::pair<std::string, std::string>>& config_schema();

bool is_config_key(std::string_view key);

/// Sets one key. Throws ConfigError naming the key when it is unknown or the
/// value does not parse.
void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Parses `key = value` lines ('#' starts a comment) into cfg.
void apply_config_text(ExperimentConfig& cfg, std::string_view text, const std::string& source = "<config>");
void apply_config_file(ExperimentConfig& cfg, const std::string& path);

/// Fills unassigned training and matcher settings from the per-dataset table
/// (keyed by dataset name) and checks cross-field consistency.
void finalize_config(ExperimentConfig& cfg);

struct DatasetDefaults {
  double learning_rate;
  int epochs;
  int batch_size;
  int matcher_layers;
  int matcher_batch_size;
};

/// Per-dataset classifier and matcher settings for the standard benchmarks.
std::optional<DatasetDefaults> dataset_defaults(std::string_view dataset_name);

/// The config rendered back as `key = value` lines.
std::string dump_config(const ExperimentConfig& cfg);

}  // namespace smixup
