#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "smixup/matrix.hpp"

namespace smixup {

/// Undirected graph with dense, symmetric, zero-diagonal edge weights in
/// [0, 1], an n x d feature matrix (d may be 0 for unattributed data) and a
/// length-C label distribution (one-hot for originals, soft after mixing).
struct Graph {
  Matrix adjacency;
  Matrix features;
  Vector label;

  Index num_nodes() const { return adjacency.rows(); }
  Index feature_dim() const { return features.cols(); }
  Index num_classes() const { return label.size(); }

  /// Index of the largest label entry (first on ties).
  int class_index() const;
};

/// One-hot label vector of length num_classes.
Vector one_hot(int cls, int num_classes);

struct GraphDataset {
  std::string name;
  int num_classes = 0;
  int feature_dim = 0;
  std::vector<Graph> graphs;

  std::size_t size() const { return graphs.size(); }
  bool empty() const { return graphs.empty(); }
};

class InvalidGraph : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Tolerance-free checks except the label sum (1e-9) and symmetry (exact).
/// With require_binary every adjacency entry must be exactly 0 or 1.
/// Throws InvalidGraph naming the first violated invariant.
void validate_graph(const Graph& g, bool require_binary = false);

/// Validates every graph and the dataset-level invariants (non-empty,
/// uniform label length and feature width).
void validate_dataset(const GraphDataset& ds, bool require_binary = false);

/// Builds a 0/1 graph from an undirected edge list over nodes 0..n-1.
Graph make_graph(int n, const std::vector<std::pair<int, int>>& edges, Matrix features, Vector label);

/// Node degrees as counts of nonzero adjacency entries per row.
std::vector<int> degrees(const Graph& g);

bool is_connected(const Graph& g);

/// Relabels nodes: node i of the result is node perm[i] of g.
Graph permute_nodes(const Graph& g, const std::vector<int>& perm);

/// Permutation matrix P with P(i, perm[i]) = 1, so P * A * P^T relabels A the
/// same way permute_nodes does.
Matrix permutation_matrix(const std::vector<int>& perm);

}  // namespace smixup
