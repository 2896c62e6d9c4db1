#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "smixup/graph.hpp"
#include "smixup/matcher.hpp"
#include "smixup/numerics.hpp"

namespace smixup {

enum class Alignment { learned, random, identity };

struct MixupConfig {
  MixRatioSpec ratio{0.2, RangeMode::half};
  Alignment alignment = Alignment::learned;
  /// Pair each graph only with a graph of its own class.
  bool same_class_only = false;
  /// Normaliser for learned assignments (overrides the matcher's own).
  Normalizer normalizer = Normalizer::softmax;
  std::uint64_t seed = 0;
};

/// Aligns g2 to the node set of M's rows: adjacency M A2 M^T (symmetrised,
/// clamped to [0,1], diagonal zeroed), features M X2. Label unchanged.
Graph transform_graph(const Graph& g2, const Matrix& assignment);

/// Convex combination of g1 with g2 aligned by M:
///   X' = lam X1 + (1 - lam) M X2, A' = lam A1 + (1 - lam) M A2 M^T,
///   y' = lam y1 + (1 - lam) y2.
/// The result has g1's node count.
Graph s_mixup_pair(const Graph& g1, const Graph& g2, const Matrix& assignment, double lambda);

/// Appends isolated zero-feature nodes up to n nodes.
Graph pad_graph(const Graph& g, Index n);

/// Random-alignment baseline: pads both graphs to max(n1, n2), aligns g2 with
/// a uniformly random hard permutation and interpolates as s_mixup_pair.
Graph random_mixup_pair(const Graph& g1, const Graph& g2, double lambda, std::uint64_t seed);

struct MixupBatch {
  std::vector<Graph> graphs;
  /// graphs[i] mixes batch[i] (anchor) with batch[partners[i]].
  std::vector<std::size_t> partners;
  std::vector<double> lambdas;
};

/// Shuffles the batch (within classes when same_class_only), pairs element i
/// with the shuffled element i and mixes each pair with a fresh ratio.
/// `matcher` is required for learned alignment.
MixupBatch batch_mixup(std::span<const Graph> batch, const MatcherParams* matcher, const MixupConfig& config,
                       Rng& rng);

std::string_view to_string(Alignment a);
Alignment parse_alignment(std::string_view s);

}  // namespace smixup
