#pragma once

#include <stdexcept>
#include <string_view>
#include <vector>

#include "smixup/graph.hpp"
#include "smixup/rng.hpp"

namespace smixup {

/// Edit costs: node substitution ||x - x'||^2, node insertion or deletion
/// ||x||^2, edge substitution |e - e'|, edge insertion or deletion e. Edge
/// costs run over ordered node pairs, so an undirected edge counts twice.
struct GedResult {
  double cost = 0.0;
  /// mapping[i] is the node of the second graph matched to node i of the
  /// first, or -1 when node i is deleted.
  std::vector<int> mapping;
};

struct NormalizedGed {
  double epsilon = 0.0;
  /// Distance from the mixed graph to the first parent.
  double d1 = 0.0;
  /// Distance from the mixed graph to the second parent.
  double d2 = 0.0;
};

enum class GedMode { aligned_chain, exact };

/// Both distances of a normalised GED are zero.
class UndefinedNormalizedGed : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The bound's denominator GED(G1, G2') + GED(G2, G2') is zero.
class DegenerateBound : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline constexpr int kDefaultGedNodeLimit = 8;

/// Identity-mapping edit cost of two graphs on the same node set:
/// sum |A_a - A_b| over the full matrix plus ||X_a - X_b||_F^2.
double aligned_ged(const Graph& ga, const Graph& gb);

/// Exact minimum edit cost by depth-first search over partial injective node
/// mappings with running-cost pruning. Among optimal mappings the witness is
/// the lexicographically smallest, with deletion ordered after every node.
GedResult exact_ged(const Graph& ga, const Graph& gb, int node_limit = kDefaultGedNodeLimit);

/// epsilon = d2 / (d1 + d2) with d1 = GED(gmix, g1), d2 = GED(gmix, g2).
///
/// exact: both legs by exact_ged.
/// aligned_chain: d1 = aligned_ged(gmix, g1) and d2 is routed through the
/// aligned copy of g2, d2 = aligned_ged(gmix, g2_aligned) + exact_ged(g2_aligned, g2).
NormalizedGed normalized_ged(const Graph& gmix, const Graph& g1, const Graph& g2, GedMode mode,
                             const Graph* g2_aligned = nullptr, int node_limit = kDefaultGedNodeLimit);

/// (1 - lambda) GED(G2, G2') / (GED(G1, G2') + GED(G2, G2')). The G1 leg is
/// aligned_ged in aligned_chain mode; the G2 leg is always exact_ged.
double theorem1_bound(const Graph& g1, const Graph& g2, const Graph& g2_aligned, double lambda, GedMode mode,
                      int node_limit = kDefaultGedNodeLimit);

/// A random small pair and a random soft assignment between them.
struct TinyPair {
  Graph g1;
  Graph g2;
  /// g1.n x g2.n, nonnegative, columns summing to 1.
  Matrix assignment;
};

/// Node counts uniform on [2, max_nodes], edges with probability 1/2,
/// integer features in {0, 1, 2}, one-hot labels over two classes. The
/// assignment is a column softmax of scaled Gaussian scores.
TinyPair random_tiny_pair(Rng& rng, int max_nodes, int feature_dim = 2);

struct GedSweepRow {
  int pair = 0;
  double lambda = 0.0;
  double epsilon = 0.0;
  double bound = 0.0;
  /// |epsilon - lambda|
  double gap = 0.0;
  GedMode mode = GedMode::aligned_chain;
};

/// For each pair and lambda: mixes G1 with the aligned G2, then records the
/// normalised GED and the bound in `mode`. Pairs whose ratios are undefined
/// are redrawn.
std::vector<GedSweepRow> ged_sweep(int pairs, int max_nodes, const std::vector<double>& lambdas, GedMode mode,
                                   std::uint64_t seed);

std::string_view to_string(GedMode m);
GedMode parse_ged_mode(std::string_view s);

}  // namespace smixup
