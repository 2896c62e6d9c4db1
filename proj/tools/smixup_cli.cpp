#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "smixup/checkpoint.hpp"
#include "smixup/dataset_ops.hpp"
#include "smixup/experiment.hpp"
#include "smixup/experiment_config.hpp"
#include "smixup/ged.hpp"
#include "smixup/graph_dump.hpp"
#include "smixup/matcher.hpp"
#include "smixup/mixup.hpp"
#include "smixup/motif.hpp"
#include "smixup/training.hpp"
#include "smixup/tudataset.hpp"

using namespace smixup;

namespace {

// Every subcommand that reads a dataset or trains something accepts
// --config PATH plus one --<key> flag per config key.
struct ConfigFlags {
  std::string config_path;
  std::map<std::string, std::string> values;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "config file of `key = value` lines")->check(CLI::ExistingFile);
    for (const auto& [key, help] : config_schema()) app->add_option("--" + key, values[key], help);
  }

  ExperimentConfig resolve(CLI::App* app) const {
    ExperimentConfig cfg;
    if (!config_path.empty()) apply_config_file(cfg, config_path);
    for (const auto& [key, value] : values) {
      if (app->count("--" + key) > 0) set_config_value(cfg, key, value);
    }
    finalize_config(cfg);
    return cfg;
  }
};

void print_metrics(const EvalMetrics& m) {
  std::printf("accuracy %.6f\nloss %.6f\n", m.accuracy, m.loss);
  if (m.roc_auc) std::printf("roc_auc %.6f\n", *m.roc_auc);
}

GnnConfig model_for(const ExperimentConfig& cfg, const GraphDataset& ds) {
  GnnConfig model = cfg.model;
  model.num_classes = ds.num_classes;
  model.feature_dim = ds.feature_dim;
  return model;
}

MatcherConfig matcher_for(const ExperimentConfig& cfg, const GraphDataset& ds) {
  MatcherConfig m = cfg.matcher;
  m.feature_dim = ds.feature_dim;
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph mixup by soft node alignments"};
  app.require_subcommand(1);

  // motif-gen
  auto* motif_cmd = app.add_subcommand("motif-gen", "generate the synthetic MOTIF dataset in TUDataset format");
  ConfigFlags motif_flags;
  motif_flags.attach(motif_cmd);
  std::string motif_out;
  std::string motif_name = "MOTIF";
  motif_cmd->add_option("--out", motif_out, "output directory")->required();
  motif_cmd->add_option("--name", motif_name, "dataset file prefix");

  // train-matcher
  auto* tm_cmd = app.add_subcommand("train-matcher", "train the graph matching network on the whole dataset");
  ConfigFlags tm_flags;
  tm_flags.attach(tm_cmd);
  std::string tm_out;
  std::string tm_losses;
  tm_cmd->add_option("--out", tm_out, "checkpoint file")->required();
  tm_cmd->add_option("--losses", tm_losses, "optional file receiving one step loss per line");

  // augment
  auto* aug_cmd = app.add_subcommand("augment", "mix one shuffled pass over the dataset and dump the graphs");
  ConfigFlags aug_flags;
  aug_flags.attach(aug_cmd);
  std::string aug_out;
  aug_cmd->add_option("--out", aug_out, "graph dump file (stdout when omitted)");

  // train-classifier
  auto* tc_cmd = app.add_subcommand("train-classifier", "train one classifier on a single split");
  ConfigFlags tc_flags;
  tc_flags.attach(tc_cmd);
  std::string tc_out;
  std::string tc_metrics;
  tc_cmd->add_option("--out", tc_out, "checkpoint file")->required();
  tc_cmd->add_option("--metrics", tc_metrics, "optional metrics.jsonl file");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "score a classifier checkpoint");
  ConfigFlags eval_flags;
  eval_flags.attach(eval_cmd);
  std::string eval_model;
  std::string eval_split = "test";
  eval_cmd->add_option("--model", eval_model, "classifier checkpoint")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--split", eval_split, "train | val | test | all")
      ->check(CLI::IsMember({"train", "val", "test", "all"}));

  // run
  auto* run_cmd = app.add_subcommand("run", "full experiment over all runs and alphas");
  ConfigFlags run_flags;
  run_flags.attach(run_cmd);
  bool run_quiet = false;
  run_cmd->add_flag("--quiet", run_quiet, "suppress per-run progress lines");

  // ged-verify
  auto* ged_cmd = app.add_subcommand("ged-verify", "normalised GED versus mixup ratio on random tiny pairs");
  int ged_pairs = 20;
  int ged_max_nodes = 6;
  std::uint64_t ged_seed = 0;
  std::string ged_mode = "aligned-chain";
  std::vector<double> ged_lambdas{0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  std::string ged_out;
  ged_cmd->add_option("--pairs", ged_pairs, "number of random pairs")->check(CLI::PositiveNumber);
  ged_cmd->add_option("--max-nodes", ged_max_nodes, "largest graph size")->check(CLI::Range(2, kDefaultGedNodeLimit));
  ged_cmd->add_option("--seed", ged_seed, "random seed");
  ged_cmd->add_option("--mode", ged_mode, "aligned-chain | exact | both")
      ->check(CLI::IsMember({"aligned-chain", "exact", "both"}));
  ged_cmd->add_option("--lambdas", ged_lambdas, "mixup ratios")->delimiter(',');
  ged_cmd->add_option("--out", ged_out, "CSV file (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*motif_cmd) {
      const ExperimentConfig cfg = motif_flags.resolve(motif_cmd);
      const GraphDataset ds = gen_motif_dataset(cfg.dataset.motif);
      save_tudataset(ds, motif_out, motif_name);
      std::printf("wrote %zu graphs, %d classes to %s\n", ds.size(), ds.num_classes, motif_out.c_str());
    } else if (*tm_cmd) {
      const ExperimentConfig cfg = tm_flags.resolve(tm_cmd);
      const GraphDataset ds = load_experiment_dataset(cfg);
      MatcherTrainConfig mt = cfg.matcher_train;
      mt.seed = mix_seed(cfg.seed, 4);
      const MatcherTrainResult res = train_matcher(ds, matcher_for(cfg, ds), mix_seed(cfg.seed, 3), mt);
      save_checkpoint(to_checkpoint(res.params), tm_out);
      if (!tm_losses.empty()) {
        std::ofstream f(tm_losses);
        for (double l : res.step_losses) f << l << '\n';
      }
      std::printf("steps %zu first_loss %.6f last_loss %.6f\n", res.step_losses.size(),
                  res.step_losses.empty() ? 0.0 : res.step_losses.front(),
                  res.step_losses.empty() ? 0.0 : res.step_losses.back());
    } else if (*aug_cmd) {
      const ExperimentConfig cfg = aug_flags.resolve(aug_cmd);
      if (!cfg.alignment) throw ConfigError("augment needs mixup.alignment other than none");
      const GraphDataset ds = load_experiment_dataset(cfg);
      std::optional<MatcherParams> matcher;
      if (*cfg.alignment == Alignment::learned) {
        if (cfg.matcher_checkpoint.empty()) throw ConfigError("augment with learned alignment needs matcher.checkpoint");
        matcher = matcher_from_checkpoint(load_checkpoint(cfg.matcher_checkpoint));
      }
      Rng rng(cfg.seed);
      const MixupBatch mixed = batch_mixup(ds.graphs, matcher ? &*matcher : nullptr, cfg.mixup, rng);
      if (aug_out.empty()) {
        write_graph_dump(std::cout, mixed.graphs);
      } else {
        std::ofstream f(aug_out);
        write_graph_dump(f, mixed.graphs);
      }
    } else if (*tc_cmd) {
      const ExperimentConfig cfg = tc_flags.resolve(tc_cmd);
      const GraphDataset ds = load_experiment_dataset(cfg);
      const std::uint64_t run_seed = mix_seed(cfg.seed, 0);
      DatasetSplit split = split_dataset(ds, cfg.split, mix_seed(run_seed, 1));
      if (cfg.corrupt_ratio > 0.0) split.train = corrupt_labels(split.train, cfg.corrupt_ratio, mix_seed(run_seed, 2));
      std::optional<MatcherParams> matcher;
      if (cfg.alignment == Alignment::learned) {
        if (!cfg.matcher_checkpoint.empty()) {
          matcher = matcher_from_checkpoint(load_checkpoint(cfg.matcher_checkpoint));
        } else {
          MatcherTrainConfig mt = cfg.matcher_train;
          mt.seed = mix_seed(run_seed, 4);
          matcher = train_matcher(split.train, matcher_for(cfg, ds), mix_seed(run_seed, 3), mt).params;
        }
      }
      Augmenter augmenter;
      if (cfg.alignment) {
        const MatcherParams* mp = matcher ? &*matcher : nullptr;
        augmenter = [mix = cfg.mixup, mp](std::span<const Graph> batch, Rng& rng) {
          return batch_mixup(batch, mp, mix, rng).graphs;
        };
      }
      ClassifierTrainConfig tc = cfg.train;
      tc.seed = mix_seed(run_seed, 5);
      ClassifierTrainResult res =
          train_classifier(split.train, split.val, &split.test, model_for(cfg, ds), tc, augmenter, 0);
      save_checkpoint(to_checkpoint(res.params), tc_out);
      if (!tc_metrics.empty()) {
        RunResult rr;
        rr.records = res.records;
        if (cfg.alignment) rr.alpha = cfg.mixup.ratio.alpha;
        std::ofstream f(tc_metrics);
        write_metrics_jsonl(f, {rr});
      }
      std::printf("best_epoch %d\n", res.best_epoch);
      print_metrics(evaluate(res.params, split.test));
    } else if (*eval_cmd) {
      const ExperimentConfig cfg = eval_flags.resolve(eval_cmd);
      const GraphDataset ds = load_experiment_dataset(cfg);
      const GnnParams params = gnn_from_checkpoint(load_checkpoint(eval_model));
      if (eval_split == "all") {
        print_metrics(evaluate(params, ds));
      } else {
        const DatasetSplit split = split_dataset(ds, cfg.split, mix_seed(mix_seed(cfg.seed, 0), 1));
        const GraphDataset& part = eval_split == "train" ? split.train : eval_split == "val" ? split.val : split.test;
        print_metrics(evaluate(params, part));
      }
    } else if (*run_cmd) {
      const ExperimentConfig cfg = run_flags.resolve(run_cmd);
      const ExperimentReport report = run_experiment(cfg, run_quiet ? nullptr : &std::cerr);
      write_report(cfg, report);
      write_summary_csv(std::cout, report.summary);
    } else if (*ged_cmd) {
      std::vector<GedMode> modes;
      if (ged_mode == "both") {
        modes = {GedMode::aligned_chain, GedMode::exact};
      } else {
        modes = {parse_ged_mode(ged_mode)};
      }
      std::ofstream file;
      if (!ged_out.empty()) file.open(ged_out);
      std::ostream& out = ged_out.empty() ? std::cout : file;
      out << "pair,lambda,epsilon,bound,abs_gap,mode\n";
      char buf[160];
      for (GedMode mode : modes) {
        for (const GedSweepRow& r : ged_sweep(ged_pairs, ged_max_nodes, ged_lambdas, mode, ged_seed)) {
          std::snprintf(buf, sizeof buf, "%d,%.4g,%.12g,%.12g,%.12g,", r.pair, r.lambda, r.epsilon, r.bound, r.gap);
          out << buf << to_string(r.mode) << '\n';
        }
      }
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
