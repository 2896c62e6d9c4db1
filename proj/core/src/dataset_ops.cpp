#include "smixup/dataset_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "smixup/rng.hpp"

namespace smixup {

std::array<std::size_t, 3> split_sizes(std::size_t n, const SplitRatios& ratios) {
  const std::array<double, 3> r{ratios.train, ratios.val, ratios.test};
  for (double x : r) {
    if (!(x > 0.0)) throw std::invalid_argument("split ratios must be positive");
  }
  if (std::abs(r[0] + r[1] + r[2] - 1.0) > 1e-9) throw std::invalid_argument("split ratios must sum to 1");

  std::array<std::size_t, 3> sizes{};
  std::array<double, 3> remainder{};
  std::size_t assigned = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    const double exact = r[k] * static_cast<double>(n);
    // Snap values within rounding noise of an integer (0.7 * 1000 = 699.999...).
    const double snapped = std::abs(exact - std::round(exact)) < 1e-9 ? std::round(exact) : exact;
    sizes[k] = static_cast<std::size_t>(std::floor(snapped));
    remainder[k] = snapped - std::floor(snapped);
    assigned += sizes[k];
  }
  std::array<std::size_t, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t k = 0; assigned < n; ++k, ++assigned) ++sizes[order[k % 3]];
  return sizes;
}

DatasetSplit split_dataset(const GraphDataset& ds, const SplitRatios& ratios, std::uint64_t seed) {
  const auto sizes = split_sizes(ds.size(), ratios);
  for (std::size_t s : sizes) {
    if (s == 0) throw std::invalid_argument("split of dataset '" + ds.name + "' leaves a part empty");
  }
  Rng rng(seed);
  const std::vector<int> perm = rng.permutation(static_cast<int>(ds.size()));

  DatasetSplit out;
  GraphDataset* parts[3] = {&out.train, &out.val, &out.test};
  const char* suffix[3] = {"/train", "/val", "/test"};
  std::size_t pos = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    GraphDataset& part = *parts[k];
    part.name = ds.name + suffix[k];
    part.num_classes = ds.num_classes;
    part.feature_dim = ds.feature_dim;
    part.graphs.reserve(sizes[k]);
    for (std::size_t i = 0; i < sizes[k]; ++i, ++pos) {
      part.graphs.push_back(ds.graphs[static_cast<std::size_t>(perm[pos])]);
    }
  }
  return out;
}

GraphDataset corrupt_labels(const GraphDataset& ds, double ratio, std::uint64_t seed) {
  if (!(ratio >= 0.0 && ratio <= 1.0)) throw std::invalid_argument("corruption ratio must lie in [0,1]");
  const auto count = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(ds.size())));
  if (count == 0) return ds;
  if (ds.num_classes < 2) throw std::invalid_argument("label corruption needs at least two classes");

  Rng rng(seed);
  std::vector<int> idx(ds.size());
  std::iota(idx.begin(), idx.end(), 0);
  // Partial Fisher-Yates: the first `count` entries are a uniform sample.
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.uniform_index(idx.size() - i));
    std::swap(idx[i], idx[j]);
  }
  GraphDataset out = ds;
  for (std::size_t i = 0; i < count; ++i) {
    Graph& g = out.graphs[static_cast<std::size_t>(idx[i])];
    const int original = g.class_index();
    int flipped = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(ds.num_classes - 1)));
    if (flipped >= original) ++flipped;
    g.label = one_hot(flipped, ds.num_classes);
  }
  return out;
}

GraphDataset featurize_unattributed(const GraphDataset& ds, const Featurization& f) {
  if (ds.feature_dim != 0) throw std::invalid_argument("dataset '" + ds.name + "' already has node features");
  if (f.scheme == FeatureScheme::degree_onehot && f.degree_cap < 0) {
    throw std::invalid_argument("degree cap must be non-negative");
  }
  GraphDataset out = ds;
  out.feature_dim = f.scheme == FeatureScheme::constant ? 1 : f.degree_cap + 1;
  for (Graph& g : out.graphs) {
    const Index n = g.num_nodes();
    if (f.scheme == FeatureScheme::constant) {
      g.features = Matrix::Ones(n, 1);
      continue;
    }
    g.features = Matrix::Zero(n, out.feature_dim);
    const auto deg = degrees(g);
    for (Index i = 0; i < n; ++i) g.features(i, std::min(deg[static_cast<std::size_t>(i)], f.degree_cap)) = 1.0;
  }
  return out;
}

GraphDataset strip_features(const GraphDataset& ds) {
  GraphDataset out = ds;
  out.feature_dim = 0;
  for (Graph& g : out.graphs) g.features = Matrix(g.num_nodes(), 0);
  return out;
}

FeatureScheme parse_feature_scheme(std::string_view s) {
  if (s == "constant") return FeatureScheme::constant;
  if (s == "degree" || s == "degree-onehot") return FeatureScheme::degree_onehot;
  throw std::invalid_argument("unknown feature scheme '" + std::string(s) + "'");
}

}  // namespace smixup
