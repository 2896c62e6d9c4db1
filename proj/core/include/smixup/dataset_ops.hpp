#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "smixup/graph.hpp"

namespace smixup {

struct SplitRatios {
  double train = 0.8;
  double val = 0.1;
  double test = 0.1;
};

struct DatasetSplit {
  GraphDataset train;
  GraphDataset val;
  GraphDataset test;
};

/// Uniformly permutes the graphs, then cuts the permutation into parts of
/// floor(ratio * N) each, handing leftover graphs to the parts with the largest
/// fractional remainders (earlier part wins ties).
DatasetSplit split_dataset(const GraphDataset& ds, const SplitRatios& ratios, std::uint64_t seed);

/// Part sizes used by split_dataset.
std::array<std::size_t, 3> split_sizes(std::size_t n, const SplitRatios& ratios);

/// Flips exactly round(ratio * N) uniformly chosen labels to a uniformly chosen
/// different class.
GraphDataset corrupt_labels(const GraphDataset& ds, double ratio, std::uint64_t seed);

enum class FeatureScheme { constant, degree_onehot };

struct Featurization {
  FeatureScheme scheme = FeatureScheme::constant;
  int degree_cap = 10;
};

/// Gives an unattributed dataset node features: constant -> [1];
/// degree_onehot -> one-hot at min(degree, cap) over cap + 1 slots.
GraphDataset featurize_unattributed(const GraphDataset& ds, const Featurization& f);

/// Drops all node features (feature_dim becomes 0).
GraphDataset strip_features(const GraphDataset& ds);

FeatureScheme parse_feature_scheme(std::string_view s);

}  // namespace smixup
