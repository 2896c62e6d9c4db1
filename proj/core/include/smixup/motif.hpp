#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "smixup/graph.hpp"
#include "smixup/rng.hpp"

namespace smixup {

enum class MotifShape { cycle, house, crane };
enum class BaseShape { tree, ladder, wheel };

/// Synthetic base-plus-motif graphs; the class label is the motif's position
/// in `motifs`.
struct MotifConfig {
  std::vector<MotifShape> motifs{MotifShape::cycle, MotifShape::house, MotifShape::crane};
  std::vector<BaseShape> bases{BaseShape::tree, BaseShape::ladder, BaseShape::wheel};
  int base_min = 8;
  int base_max = 15;
  int count_per_class = 100;
  std::uint64_t seed = 0;
};

/// Edge list of a motif over nodes 0..k-1.
///   cycle: 5-cycle
///   house: 4-cycle 0-1-2-3 plus roof 4 joined to 0 and 1
///   crane: 4-cycle 0-1-2-3 plus pendant 4 on 0 and pendant 5 on 2
std::pair<int, std::vector<std::pair<int, int>>> motif_edges(MotifShape shape);

/// Edge list of a random base. Ladders use 2 x (size / 2) nodes, wheels a hub
/// plus a (size - 1)-rim, trees random attachment.
std::pair<int, std::vector<std::pair<int, int>>> base_edges(BaseShape shape, int size, Rng& rng);

/// Each graph is one base joined to one motif by a single edge between a
/// uniformly chosen base node and motif node, with node order shuffled and
/// every node feature equal to 1.
GraphDataset gen_motif_dataset(const MotifConfig& config);

std::string_view to_string(MotifShape s);
std::string_view to_string(BaseShape s);
MotifShape parse_motif_shape(std::string_view s);
BaseShape parse_base_shape(std::string_view s);

}  // namespace smixup
