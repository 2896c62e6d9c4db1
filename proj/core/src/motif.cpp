#include "smixup/motif.hpp"

#include <stdexcept>
#include <string>

namespace smixup {

using EdgeList = std::vector<std::pair<int, int>>;

std::pair<int, EdgeList> motif_edges(MotifShape shape) {
  switch (shape) {
    case MotifShape::cycle:
      return {5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}}};
    case MotifShape::house:
      return {5, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {4, 0}, {4, 1}}};
    case MotifShape::crane:
      return {6, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {4, 0}, {5, 2}}};
  }
  throw std::invalid_argument("unknown motif shape");
}

std::pair<int, EdgeList> base_edges(BaseShape shape, int size, Rng& rng) {
  if (size < 4) throw std::invalid_argument("base size must be at least 4");
  EdgeList edges;
  switch (shape) {
    case BaseShape::tree:
      for (int v = 1; v < size; ++v) edges.emplace_back(static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(v))), v);
      return {size, edges};
    case BaseShape::ladder: {
      const int k = size / 2;
      for (int c = 0; c < k; ++c) {
        edges.emplace_back(c, k + c);  // rung
        if (c + 1 < k) {
          edges.emplace_back(c, c + 1);
          edges.emplace_back(k + c, k + c + 1);
        }
      }
      return {2 * k, edges};
    }
    case BaseShape::wheel: {
      const int rim = size - 1;
      for (int r = 1; r <= rim; ++r) {
        edges.emplace_back(0, r);
        edges.emplace_back(r, r % rim + 1);
      }
      return {size, edges};
    }
  }
  throw std::invalid_argument("unknown base shape");
}

GraphDataset gen_motif_dataset(const MotifConfig& config) {
  if (config.motifs.empty()) throw std::invalid_argument("motif set is empty");
  if (config.bases.empty()) throw std::invalid_argument("base set is empty");
  if (config.base_min < 4 || config.base_max < config.base_min) {
    throw std::invalid_argument("base size range must satisfy 4 <= min <= max");
  }
  if (config.count_per_class < 1) throw std::invalid_argument("count per class must be at least 1");

  Rng rng(config.seed);
  GraphDataset ds;
  ds.name = "MOTIF";
  ds.num_classes = static_cast<int>(config.motifs.size());
  ds.feature_dim = 1;
  const auto span = static_cast<std::uint64_t>(config.base_max - config.base_min + 1);

  for (int cls = 0; cls < ds.num_classes; ++cls) {
    const auto [motif_n, motif] = motif_edges(config.motifs[static_cast<std::size_t>(cls)]);
    for (int k = 0; k < config.count_per_class; ++k) {
      const BaseShape base_shape = config.bases[rng.uniform_index(config.bases.size())];
      const int size = config.base_min + static_cast<int>(rng.uniform_index(span));
      auto [base_n, edges] = base_edges(base_shape, size, rng);
      for (const auto& [u, v] : motif) edges.emplace_back(base_n + u, base_n + v);
      const int anchor_base = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(base_n)));
      const int anchor_motif = base_n + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(motif_n)));
      edges.emplace_back(anchor_base, anchor_motif);

      const int n = base_n + motif_n;
      Graph g = make_graph(n, edges, Matrix::Ones(n, 1), one_hot(cls, ds.num_classes));
      ds.graphs.push_back(permute_nodes(g, rng.permutation(n)));
    }
  }
  return ds;
}

std::string_view to_string(MotifShape s) {
  switch (s) {
    case MotifShape::cycle: return "cycle";
    case MotifShape::house: return "house";
    case MotifShape::crane: return "crane";
  }
  return "?";
}

std::string_view to_string(BaseShape s) {
  switch (s) {
    case BaseShape::tree: return "tree";
    case BaseShape::ladder: return "ladder";
    case BaseShape::wheel: return "wheel";
  }
  return "?";
}

MotifShape parse_motif_shape(std::string_view s) {
  if (s == "cycle") return MotifShape::cycle;
  if (s == "house") return MotifShape::house;
  if (s == "crane") return MotifShape::crane;
  throw std::invalid_argument("unknown motif '" + std::string(s) + "'");
}

BaseShape parse_base_shape(std::string_view s) {
  if (s == "tree") return BaseShape::tree;
  if (s == "ladder") return BaseShape::ladder;
  if (s == "wheel") return BaseShape::wheel;
  throw std::invalid_argument("unknown base '" + std::string(s) + "'");
}

}  // namespace smixup
