#include "smixup/experiment_config.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace smixup {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE) throw std::invalid_argument("not a number");
  return d;
}

long long to_int(const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const long long i = std::strtoll(v.c_str(), &end, 10);
  if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE) throw std::invalid_argument("not an integer");
  return i;
}

int to_small_int(const std::string& v) {
  const long long i = to_int(v);
  if (i < -1000000000LL || i > 1000000000LL) throw std::invalid_argument("integer out of range");
  return static_cast<int>(i);
}

std::uint64_t to_u64(const std::string& v) {
  if (v.empty() || v[0] == '-') throw std::invalid_argument("not a non-negative integer");
  errno = 0;
  char* end = nullptr;
  const unsigned long long u = std::strtoull(v.c_str(), &end, 10);
  if (end != v.c_str() + v.size() || errno == ERANGE) throw std::invalid_argument("not a non-negative integer");
  return u;
}

bool to_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("not a boolean");
}

std::string fmt(double d) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  return buf;
}

template <typename T, typename F>
std::string join(const std::vector<T>& items, F f) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ",";
    out += f(items[i]);
  }
  return out;
}

std::string_view to_string(DatasetSource s) { return s == DatasetSource::tudataset ? "tudataset" : "motif"; }

std::string_view to_string(FeatureScheme s) { return s == FeatureScheme::constant ? "constant" : "degree_onehot"; }

struct Entry {
  std::string key;
  std::string help;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

const std::vector<Entry>& entries() {
  using C = ExperimentConfig;
  using S = const std::string&;
  static const std::vector<Entry> table = {
      {"experiment.name", "label written to every summary row", [](C& c, S v) { c.name = v; },
       [](const C& c) { return c.name; }},
      {"dataset.source", "tudataset | motif",
       [](C& c, S v) {
         if (v == "tudataset") {
           c.dataset.source = DatasetSource::tudataset;
         } else if (v == "motif") {
           c.dataset.source = DatasetSource::motif;
         } else {
           throw std::invalid_argument("expected tudataset or motif");
         }
       },
       [](const C& c) { return std::string(to_string(c.dataset.source)); }},
      {"dataset.path", "directory containing the TUDataset files", [](C& c, S v) { c.dataset.path = v; },
       [](const C& c) { return c.dataset.path; }},
      {"dataset.name", "TUDataset name (file prefix); also selects per-dataset defaults",
       [](C& c, S v) { c.dataset.name = v; }, [](const C& c) { return c.dataset.name; }},
      {"dataset.featurize", "features for unattributed data: constant | degree_onehot",
       [](C& c, S v) { c.dataset.featurization.scheme = parse_feature_scheme(v); },
       [](const C& c) { return std::string(to_string(c.dataset.featurization.scheme)); }},
      {"dataset.degree_cap", "largest degree with its own one-hot slot",
       [](C& c, S v) { c.dataset.featurization.degree_cap = to_small_int(v); },
       [](const C& c) { return std::to_string(c.dataset.featurization.degree_cap); }},
      {"motif.motifs", "comma list of cycle | house | crane (one class each)",
       [](C& c, S v) {
         c.dataset.motif.motifs.clear();
         for (const auto& s : split_list(v)) c.dataset.motif.motifs.push_back(parse_motif_shape(s));
       },
       [](const C& c) {
         return join(c.dataset.motif.motifs, [](MotifShape s) { return std::string(to_string(s)); });
       }},
      {"motif.bases", "comma list of tree | ladder | wheel",
       [](C& c, S v) {
         c.dataset.motif.bases.clear();
         for (const auto& s : split_list(v)) c.dataset.motif.bases.push_back(parse_base_shape(s));
       },
       [](const C& c) {
         return join(c.dataset.motif.bases, [](BaseShape s) { return std::string(to_string(s)); });
       }},
      {"motif.base_min", "smallest base size", [](C& c, S v) { c.dataset.motif.base_min = to_small_int(v); },
       [](const C& c) { return std::to_string(c.dataset.motif.base_min); }},
      {"motif.base_max", "largest base size", [](C& c, S v) { c.dataset.motif.base_max = to_small_int(v); },
       [](const C& c) { return std::to_string(c.dataset.motif.base_max); }},
      {"motif.count_per_class", "graphs generated per class",
       [](C& c, S v) { c.dataset.motif.count_per_class = to_small_int(v); },
       [](const C& c) { return std::to_string(c.dataset.motif.count_per_class); }},
      {"motif.seed", "generator seed", [](C& c, S v) { c.dataset.motif.seed = to_u64(v); },
       [](const C& c) { return std::to_string(c.dataset.motif.seed); }},
      {"model.backbone", "gcn | gin", [](C& c, S v) { c.model.backbone = parse_backbone(v); },
       [](const C& c) { return std::string(to_string(c.model.backbone)); }},
      {"model.layers", "message passing layers", [](C& c, S v) { c.model.num_layers = to_small_int(v); },
       [](const C& c) { return std::to_string(c.model.num_layers); }},
      {"model.hidden", "hidden width", [](C& c, S v) { c.model.hidden = to_small_int(v); },
       [](const C& c) { return std::to_string(c.model.hidden); }},
      {"model.readout", "mean | sum", [](C& c, S v) { c.model.readout = parse_readout(v); },
       [](const C& c) { return std::string(to_string(c.model.readout)); }},
      {"train.lr", "classifier learning rate", [](C& c, S v) { c.train.learning_rate = to_double(v); },
       [](const C& c) { return fmt(c.train.learning_rate); }},
      {"train.epochs", "classifier epochs", [](C& c, S v) { c.train.epochs = to_small_int(v); },
       [](const C& c) { return std::to_string(c.train.epochs); }},
      {"train.batch_size", "classifier batch size", [](C& c, S v) { c.train.batch_size = to_small_int(v); },
       [](const C& c) { return std::to_string(c.train.batch_size); }},
      {"split.train", "training fraction", [](C& c, S v) { c.split.train = to_double(v); },
       [](const C& c) { return fmt(c.split.train); }},
      {"split.val", "validation fraction", [](C& c, S v) { c.split.val = to_double(v); },
       [](const C& c) { return fmt(c.split.val); }},
      {"split.test", "test fraction", [](C& c, S v) { c.split.test = to_double(v); },
       [](const C& c) { return fmt(c.split.test); }},
      {"run.repeats", "independent runs (seeds)", [](C& c, S v) { c.repeats = to_small_int(v); },
       [](const C& c) { return std::to_string(c.repeats); }},
      {"run.seed", "master seed", [](C& c, S v) { c.seed = to_u64(v); },
       [](const C& c) { return std::to_string(c.seed); }},
      {"corrupt.ratio", "fraction of training labels flipped", [](C& c, S v) { c.corrupt_ratio = to_double(v); },
       [](const C& c) { return fmt(c.corrupt_ratio); }},
      {"mixup.alignment", "none | learned | random | identity",
       [](C& c, S v) {
         if (v == "none") {
           c.alignment.reset();
         } else {
           c.alignment = parse_alignment(v);
         }
       },
       [](const C& c) { return c.alignment ? std::string(to_string(*c.alignment)) : std::string("none"); }},
      {"mixup.alpha", "Beta(alpha, alpha) parameter", [](C& c, S v) { c.mixup.ratio.alpha = to_double(v); },
       [](const C& c) { return fmt(c.mixup.ratio.alpha); }},
      {"mixup.alpha_grid", "comma list of alphas, one summary row each",
       [](C& c, S v) {
         c.alpha_grid.clear();
         for (const auto& s : split_list(v)) c.alpha_grid.push_back(to_double(s));
       },
       [](const C& c) { return join(c.alpha_grid, [](double a) { return fmt(a); }); }},
      {"mixup.range", "half | full", [](C& c, S v) { c.mixup.ratio.range = parse_range_mode(v); },
       [](const C& c) { return std::string(to_string(c.mixup.ratio.range)); }},
      {"mixup.same_class_only", "pair graphs within their class only",
       [](C& c, S v) { c.mixup.same_class_only = to_bool(v); },
       [](const C& c) { return std::string(c.mixup.same_class_only ? "true" : "false"); }},
      {"mixup.normalizer", "softmax | sinkhorn", [](C& c, S v) { c.mixup.normalizer = parse_normalizer(v); },
       [](const C& c) { return std::string(to_string(c.mixup.normalizer)); }},
      {"matcher.checkpoint", "pre-trained matcher; empty trains one per run",
       [](C& c, S v) { c.matcher_checkpoint = v; }, [](const C& c) { return c.matcher_checkpoint; }},
      {"matcher.layers", "matcher layers", [](C& c, S v) { c.matcher.num_layers = to_small_int(v); },
       [](const C& c) { return std::to_string(c.matcher.num_layers); }},
      {"matcher.hidden", "matcher hidden width", [](C& c, S v) { c.matcher.hidden = to_small_int(v); },
       [](const C& c) { return std::to_string(c.matcher.hidden); }},
      {"matcher.metric", "cosine | neg-sq-euclidean", [](C& c, S v) { c.matcher.metric = parse_similarity(v); },
       [](const C& c) { return std::string(to_string(c.matcher.metric)); }},
      {"matcher.epochs", "matcher epochs", [](C& c, S v) { c.matcher_train.epochs = to_small_int(v); },
       [](const C& c) { return std::to_string(c.matcher_train.epochs); }},
      {"matcher.lr", "matcher learning rate", [](C& c, S v) { c.matcher_train.learning_rate = to_double(v); },
       [](const C& c) { return fmt(c.matcher_train.learning_rate); }},
      {"matcher.batch_size", "triplets per matcher step",
       [](C& c, S v) { c.matcher_train.batch_size = to_small_int(v); },
       [](const C& c) { return std::to_string(c.matcher_train.batch_size); }},
      {"matcher.margin", "triplet margin", [](C& c, S v) { c.matcher_train.margin = to_double(v); },
       [](const C& c) { return fmt(c.matcher_train.margin); }},
      {"output.dir", "directory for metrics.jsonl, runs.csv and summary.csv",
       [](C& c, S v) { c.output_dir = v; }, [](const C& c) { return c.output_dir; }},
  };
  return table;
}

const Entry* find_entry(std::string_view key) {
  for (const Entry& e : entries()) {
    if (e.key == key) return &e;
  }
  return nullptr;
}

}  // namespace

const std::vector<std::pair<std::string, std::string>>& config_schema() {
  static const std::vector<std::pair<std::string, std::string>> schema = [] {
    std::vector<std::pair<std::string, std::string>> out;
    for (const Entry& e : entries()) out.emplace_back(e.key, e.help);
    return out;
  }();
  return schema;
}

bool is_config_key(std::string_view key) { return find_entry(key) != nullptr; }

void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  const Entry* e = find_entry(key);
  if (e == nullptr) throw ConfigError("unknown config key '" + key + "'");
  try {
    e->set(cfg, trim(value));
  } catch (const std::exception& ex) {
    throw ConfigError("bad value '" + value + "' for config key '" + key + "': " + ex.what());
  }
  cfg.assigned.insert(key);
}

void apply_config_text(ExperimentConfig& cfg, std::string_view text, const std::string& source) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    try {
      set_config_value(cfg, key, value);
    } catch (const ConfigError& ex) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": " + ex.what());
    }
  }
}

void apply_config_file(ExperimentConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  apply_config_text(cfg, ss.str(), path);
}

std::optional<DatasetDefaults> dataset_defaults(std::string_view name) {
  static const std::map<std::string, DatasetDefaults, std::less<>> table = {
      {"IMDB-BINARY", {0.001, 300, 256, 6, 256}},    {"PROTEINS", {0.001, 300, 256, 5, 256}},
      {"NCI1", {0.01, 500, 256, 5, 256}},            {"REDDIT-BINARY", {0.01, 500, 16, 4, 8}},
      {"IMDB-MULTI", {0.001, 300, 256, 5, 256}},     {"REDDIT-MULTI-5K", {0.01, 500, 16, 4, 8}},
  };
  const auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

void finalize_config(ExperimentConfig& cfg) {
  if (const auto d = dataset_defaults(cfg.dataset.name)) {
    auto fill = [&](const char* key, auto& field, auto value) {
      if (cfg.assigned.count(key) == 0) field = value;
    };
    fill("train.lr", cfg.train.learning_rate, d->learning_rate);
    fill("train.epochs", cfg.train.epochs, d->epochs);
    fill("train.batch_size", cfg.train.batch_size, d->batch_size);
    fill("matcher.layers", cfg.matcher.num_layers, d->matcher_layers);
    fill("matcher.batch_size", cfg.matcher_train.batch_size, d->matcher_batch_size);
  }
  if (cfg.dataset.source == DatasetSource::tudataset && (cfg.dataset.path.empty() || cfg.dataset.name.empty())) {
    throw ConfigError("dataset.source = tudataset needs dataset.path and dataset.name");
  }
  if (cfg.repeats < 1) throw ConfigError("run.repeats must be >= 1");
  if (cfg.train.epochs < 1) throw ConfigError("train.epochs must be >= 1");
  if (cfg.train.batch_size < 1) throw ConfigError("train.batch_size must be >= 1");
  if (!(cfg.train.learning_rate > 0.0)) throw ConfigError("train.lr must be positive");
  if (!(cfg.corrupt_ratio >= 0.0 && cfg.corrupt_ratio <= 1.0)) throw ConfigError("corrupt.ratio must lie in [0,1]");
  if (!(cfg.mixup.ratio.alpha > 0.0)) throw ConfigError("mixup.alpha must be positive");
  for (double a : cfg.alpha_grid) {
    if (!(a > 0.0)) throw ConfigError("mixup.alpha_grid entries must be positive");
  }
  if (!cfg.alignment && !cfg.alpha_grid.empty()) {
    throw ConfigError("mixup.alpha_grid requires mixup.alignment other than none");
  }
  if (!cfg.matcher_checkpoint.empty() && cfg.alignment != Alignment::learned) {
    throw ConfigError("matcher.checkpoint is only used with mixup.alignment = learned");
  }
  if (cfg.alignment == Alignment::learned && cfg.matcher_checkpoint.empty()) {
    if (cfg.matcher_train.epochs < 1) throw ConfigError("matcher.epochs must be >= 1 when training a matcher");
    if (cfg.matcher_train.batch_size < 1) throw ConfigError("matcher.batch_size must be >= 1");
  }
  validate(cfg.matcher);
  cfg.mixup.alignment = cfg.alignment.value_or(Alignment::learned);
}

std::string dump_config(const ExperimentConfig& cfg) {
  std::string out;
  for (const Entry& e : entries()) out += e.key + " = " + e.get(cfg) + "\n";
  return out;
}

}  // namespace smixup
