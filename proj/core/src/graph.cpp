#include "smixup/graph.hpp"

#include <cmath>
#include <queue>

namespace smixup {

int Graph::class_index() const {
  Index best = 0;
  label.maxCoeff(&best);
  return static_cast<int>(best);
}

Vector one_hot(int cls, int num_classes) {
  if (cls < 0 || cls >= num_classes) throw std::out_of_range("one_hot: class out of range");
  Vector v = Vector::Zero(num_classes);
  v(cls) = 1.0;
  return v;
}

void validate_graph(const Graph& g, bool require_binary) {
  const Index n = g.num_nodes();
  if (n <= 0) throw InvalidGraph("graph has no nodes");
  if (g.adjacency.cols() != n) throw InvalidGraph("adjacency is not square");
  if (g.features.rows() != n) {
    throw InvalidGraph("feature rows (" + std::to_string(g.features.rows()) + ") != node count (" +
                       std::to_string(n) + ")");
  }
  for (Index i = 0; i < n; ++i) {
    if (g.adjacency(i, i) != 0.0) throw InvalidGraph("nonzero diagonal at node " + std::to_string(i));
    for (Index j = 0; j < n; ++j) {
      const double a = g.adjacency(i, j);
      if (!(a >= 0.0 && a <= 1.0)) {
        throw InvalidGraph("adjacency entry outside [0,1] at (" + std::to_string(i) + "," +
                           std::to_string(j) + ")");
      }
      if (a != g.adjacency(j, i)) {
        throw InvalidGraph("adjacency not symmetric at (" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
      if (require_binary && a != 0.0 && a != 1.0) throw InvalidGraph("adjacency entry is not 0/1");
    }
  }
  if (!g.features.allFinite()) throw InvalidGraph("non-finite feature entry");
  if (g.label.size() == 0) throw InvalidGraph("empty label");
  if ((g.label.array() < 0.0).any()) throw InvalidGraph("negative label entry");
  if (std::abs(g.label.sum() - 1.0) > 1e-9) throw InvalidGraph("label does not sum to 1");
}

void validate_dataset(const GraphDataset& ds, bool require_binary) {
  if (ds.empty()) throw InvalidGraph("dataset '" + ds.name + "' is empty");
  for (std::size_t k = 0; k < ds.graphs.size(); ++k) {
    const Graph& g = ds.graphs[k];
    try {
      validate_graph(g, require_binary);
    } catch (const InvalidGraph& e) {
      throw InvalidGraph("graph " + std::to_string(k) + ": " + e.what());
    }
    if (g.num_classes() != ds.num_classes) {
      throw InvalidGraph("graph " + std::to_string(k) + ": label length != num_classes");
    }
    if (g.feature_dim() != ds.feature_dim) {
      throw InvalidGraph("graph " + std::to_string(k) + ": feature width != feature_dim");
    }
  }
}

Graph make_graph(int n, const std::vector<std::pair<int, int>>& edges, Matrix features, Vector label) {
  Graph g;
  g.adjacency = Matrix::Zero(n, n);
  for (const auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) throw std::out_of_range("make_graph: edge endpoint out of range");
    if (u == v) continue;
    g.adjacency(u, v) = 1.0;
    g.adjacency(v, u) = 1.0;
  }
  g.features = std::move(features);
  g.label = std::move(label);
  return g;
}

std::vector<int> degrees(const Graph& g) {
  std::vector<int> deg(static_cast<std::size_t>(g.num_nodes()), 0);
  for (Index i = 0; i < g.num_nodes(); ++i) {
    for (Index j = 0; j < g.num_nodes(); ++j) {
      if (g.adjacency(i, j) != 0.0) ++deg[static_cast<std::size_t>(i)];
    }
  }
  return deg;
}

bool is_connected(const Graph& g) {
  const Index n = g.num_nodes();
  if (n == 0) return false;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::queue<Index> frontier;
  frontier.push(0);
  seen[0] = 1;
  Index reached = 1;
  while (!frontier.empty()) {
    const Index u = frontier.front();
    frontier.pop();
    for (Index v = 0; v < n; ++v) {
      if (g.adjacency(u, v) != 0.0 && !seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = 1;
        ++reached;
        frontier.push(v);
      }
    }
  }
  return reached == n;
}

Graph permute_nodes(const Graph& g, const std::vector<int>& perm) {
  const Index n = g.num_nodes();
  if (static_cast<Index>(perm.size()) != n) throw std::invalid_argument("permute_nodes: size mismatch");
  Graph out;
  out.adjacency.resize(n, n);
  out.features.resize(n, g.features.cols());
  for (Index i = 0; i < n; ++i) {
    const Index pi = perm[static_cast<std::size_t>(i)];
    out.features.row(i) = g.features.row(pi);
    for (Index j = 0; j < n; ++j) out.adjacency(i, j) = g.adjacency(pi, perm[static_cast<std::size_t>(j)]);
  }
  out.label = g.label;
  return out;
}

Matrix permutation_matrix(const std::vector<int>& perm) {
  const auto n = static_cast<Index>(perm.size());
  Matrix p = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) p(i, perm[static_cast<std::size_t>(i)]) = 1.0;
  return p;
}

}  // namespace smixup
