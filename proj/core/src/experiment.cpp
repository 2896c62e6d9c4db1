#include "smixup/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>

#include <json.hpp>

#include "smixup/checkpoint.hpp"
#include "smixup/dataset_ops.hpp"
#include "smixup/matcher.hpp"
#include "smixup/mixup.hpp"
#include "smixup/motif.hpp"
#include "smixup/rng.hpp"
#include "smixup/tudataset.hpp"

namespace smixup {

namespace {

std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string alpha_text(const std::optional<double>& alpha) {
  if (!alpha) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", *alpha);
  return buf;
}

}  // namespace

std::string augmentation_label(const std::optional<Alignment>& alignment) {
  if (!alignment) return "vanilla";
  switch (*alignment) {
    case Alignment::learned: return "s-mixup";
    case Alignment::random: return "random-mixup";
    case Alignment::identity: return "identity-mixup";
  }
  return "?";
}

GraphDataset load_experiment_dataset(const ExperimentConfig& cfg) {
  GraphDataset ds;
  if (cfg.dataset.source == DatasetSource::motif) {
    ds = gen_motif_dataset(cfg.dataset.motif);
  } else {
    ds = load_tudataset(cfg.dataset.path, cfg.dataset.name);
  }
  if (ds.feature_dim == 0) ds = featurize_unattributed(ds, cfg.dataset.featurization);
  validate_dataset(ds);
  return ds;
}

double sample_mean(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_std(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = sample_mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

ExperimentReport run_experiment(const ExperimentConfig& cfg, std::ostream* log) {
  const GraphDataset ds = load_experiment_dataset(cfg);
  GnnConfig model = cfg.model;
  model.num_classes = ds.num_classes;
  model.feature_dim = ds.feature_dim;
  MatcherConfig matcher_cfg = cfg.matcher;
  matcher_cfg.feature_dim = ds.feature_dim;

  std::optional<MatcherParams> loaded_matcher;
  if (cfg.alignment == Alignment::learned && !cfg.matcher_checkpoint.empty()) {
    loaded_matcher = matcher_from_checkpoint(load_checkpoint(cfg.matcher_checkpoint));
    if (loaded_matcher->config.feature_dim != ds.feature_dim) {
      throw std::invalid_argument("matcher checkpoint feature width does not match the dataset");
    }
  }

  std::vector<std::optional<double>> alphas;
  if (!cfg.alignment) {
    alphas.emplace_back();
  } else if (cfg.alpha_grid.empty()) {
    alphas.emplace_back(cfg.mixup.ratio.alpha);
  } else {
    for (double a : cfg.alpha_grid) alphas.emplace_back(a);
  }

  ExperimentReport report;
  for (int run = 0; run < cfg.repeats; ++run) {
    const std::uint64_t run_seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(run));
    DatasetSplit split = split_dataset(ds, cfg.split, mix_seed(run_seed, 1));
    if (cfg.corrupt_ratio > 0.0) split.train = corrupt_labels(split.train, cfg.corrupt_ratio, mix_seed(run_seed, 2));

    std::optional<MatcherParams> matcher = loaded_matcher;
    if (cfg.alignment == Alignment::learned && !matcher) {
      MatcherTrainConfig mt = cfg.matcher_train;
      mt.seed = mix_seed(run_seed, 4);
      MatcherTrainResult trained_matcher = train_matcher(split.train, matcher_cfg, mix_seed(run_seed, 3), mt);
      if (log != nullptr) {
        *log << cfg.name << " run " << run << " matcher steps " << trained_matcher.step_losses.size()
             << " final_loss " << fixed(trained_matcher.step_losses.empty() ? 0.0 : trained_matcher.step_losses.back())
             << '\n';
      }
      matcher = std::move(trained_matcher.params);
    }

    for (const auto& alpha : alphas) {
      Augmenter augmenter;
      if (alpha) {
        MixupConfig mix = cfg.mixup;
        mix.alignment = *cfg.alignment;
        mix.ratio.alpha = *alpha;
        const MatcherParams* mp = matcher ? &*matcher : nullptr;
        augmenter = [mix, mp](std::span<const Graph> batch, Rng& rng) {
          return batch_mixup(batch, mp, mix, rng).graphs;
        };
      }
      ClassifierTrainConfig tc = cfg.train;
      tc.seed = mix_seed(run_seed, 5);
      ClassifierTrainResult trained = train_classifier(split.train, split.val, &split.test, model, tc, augmenter, run);

      RunResult rr;
      rr.run = run;
      rr.alpha = alpha;
      rr.best_epoch = trained.best_epoch;
      rr.test = evaluate(trained.params, split.test);
      rr.records = std::move(trained.records);
      if (log != nullptr) {
        *log << cfg.name << " run " << run;
        if (alpha) *log << " alpha " << alpha_text(alpha);
        *log << " best_epoch " << rr.best_epoch << " test_acc " << fixed(rr.test.accuracy) << '\n';
        log->flush();
      }
      report.runs.push_back(std::move(rr));
    }
  }

  const std::string dataset_name = cfg.dataset.source == DatasetSource::motif ? "MOTIF" : cfg.dataset.name;
  for (const auto& alpha : alphas) {
    SummaryRow row;
    row.experiment = cfg.name;
    row.dataset = dataset_name;
    row.backbone = std::string(to_string(cfg.model.backbone));
    row.augmentation = augmentation_label(cfg.alignment);
    row.alpha = alpha;
    for (const RunResult& rr : report.runs) {
      if (rr.alpha == alpha) row.accuracies.push_back(rr.test.accuracy);
    }
    row.mean_acc = sample_mean(row.accuracies);
    row.std_acc = sample_std(row.accuracies);
    report.summary.push_back(std::move(row));
  }
  return report;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "experiment,dataset,backbone,augmentation,alpha,mean_acc,std_acc,runs\n";
  for (const SummaryRow& r : rows) {
    out << r.experiment << ',' << r.dataset << ',' << r.backbone << ',' << r.augmentation << ',' << alpha_text(r.alpha)
        << ',' << fixed(r.mean_acc) << ',' << fixed(r.std_acc) << ',' << r.accuracies.size() << '\n';
  }
}

void write_runs_csv(std::ostream& out, const std::string& experiment, const std::vector<RunResult>& runs) {
  out << "experiment,alpha,run,best_epoch,test_acc,test_loss\n";
  char buf[64];
  for (const RunResult& r : runs) {
    out << experiment << ',' << alpha_text(r.alpha) << ',' << r.run << ',' << r.best_epoch << ',';
    std::snprintf(buf, sizeof buf, "%.17g", r.test.accuracy);
    out << buf << ',';
    std::snprintf(buf, sizeof buf, "%.17g", r.test.loss);
    out << buf << '\n';
  }
}

void write_metrics_jsonl(std::ostream& out, const std::vector<RunResult>& runs) {
  for (const RunResult& r : runs) {
    for (const MetricsRecord& m : r.records) {
      nlohmann::ordered_json j;
      j["run"] = m.run;
      j["alpha"] = r.alpha ? nlohmann::ordered_json(*r.alpha) : nlohmann::ordered_json(nullptr);
      j["epoch"] = m.epoch;
      j["train_loss"] = m.train_loss;
      j["val_acc"] = m.val_acc;
      j["test_loss"] = m.test_loss;
      j["test_acc"] = m.test_acc;
      if (m.test_auc) j["test_auc"] = *m.test_auc;
      out << j.dump() << '\n';
    }
  }
}

void write_report(const ExperimentConfig& cfg, const ExperimentReport& report) {
  namespace fs = std::filesystem;
  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
    return f;
  };
  {
    auto f = open("metrics.jsonl");
    write_metrics_jsonl(f, report.runs);
  }
  {
    auto f = open("runs.csv");
    write_runs_csv(f, cfg.name, report.runs);
  }
  {
    auto f = open("summary.csv");
    write_summary_csv(f, report.summary);
  }
  {
    auto f = open("config.txt");
    f << dump_config(cfg);
  }
}

}  // namespace smixup
