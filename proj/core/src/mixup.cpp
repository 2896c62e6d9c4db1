#include "smixup/mixup.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

namespace smixup {

Graph transform_graph(const Graph& g2, const Matrix& assignment) {
  if (assignment.cols() != g2.num_nodes()) {
    throw std::invalid_argument("transform_graph: assignment has " + std::to_string(assignment.cols()) +
                                " columns for a graph of " + std::to_string(g2.num_nodes()) + " nodes");
  }
  Graph out;
  Matrix a = assignment * g2.adjacency * assignment.transpose();
  out.adjacency = (0.5 * (a + a.transpose())).cwiseMax(0.0).cwiseMin(1.0);
  out.adjacency.diagonal().setZero();
  out.features = assignment * g2.features;
  out.label = g2.label;
  return out;
}

Graph s_mixup_pair(const Graph& g1, const Graph& g2, const Matrix& assignment, double lambda) {
  if (assignment.rows() != g1.num_nodes() || assignment.cols() != g2.num_nodes()) {
    throw std::invalid_argument("s_mixup_pair: assignment must be " + std::to_string(g1.num_nodes()) + "x" +
                                std::to_string(g2.num_nodes()));
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("s_mixup_pair: lambda outside [0,1]");
  if (g1.feature_dim() != g2.feature_dim()) throw std::invalid_argument("s_mixup_pair: feature width mismatch");
  if (g1.num_classes() != g2.num_classes()) throw std::invalid_argument("s_mixup_pair: class count mismatch");

  const Graph aligned = transform_graph(g2, assignment);
  Graph out;
  out.adjacency = lambda * g1.adjacency + (1.0 - lambda) * aligned.adjacency;
  out.features = lambda * g1.features + (1.0 - lambda) * aligned.features;
  out.label = lambda * g1.label + (1.0 - lambda) * g2.label;
  return out;
}

Graph pad_graph(const Graph& g, Index n) {
  if (n < g.num_nodes()) throw std::invalid_argument("pad_graph: target smaller than graph");
  if (n == g.num_nodes()) return g;
  Graph out;
  out.adjacency = Matrix::Zero(n, n);
  out.adjacency.topLeftCorner(g.num_nodes(), g.num_nodes()) = g.adjacency;
  out.features = Matrix::Zero(n, g.feature_dim());
  out.features.topRows(g.num_nodes()) = g.features;
  out.label = g.label;
  return out;
}

Graph random_mixup_pair(const Graph& g1, const Graph& g2, double lambda, std::uint64_t seed) {
  if (g1.feature_dim() != g2.feature_dim()) throw std::invalid_argument("random_mixup_pair: feature width mismatch");
  if (g1.num_classes() != g2.num_classes()) throw std::invalid_argument("random_mixup_pair: class count mismatch");
  const Index n = std::max(g1.num_nodes(), g2.num_nodes());
  Rng rng(seed);
  const Matrix perm = permutation_matrix(rng.permutation(static_cast<int>(n)));
  return s_mixup_pair(pad_graph(g1, n), pad_graph(g2, n), perm, lambda);
}

namespace {

std::vector<std::size_t> draw_partners(std::span<const Graph> batch, bool same_class_only, Rng& rng) {
  std::vector<std::size_t> partners(batch.size());
  if (!same_class_only) {
    const auto perm = rng.permutation(static_cast<int>(batch.size()));
    for (std::size_t i = 0; i < batch.size(); ++i) partners[i] = static_cast<std::size_t>(perm[i]);
    return partners;
  }
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < batch.size(); ++i) groups[batch[i].class_index()].push_back(i);
  for (auto& [cls, members] : groups) {
    std::vector<std::size_t> shuffled = members;
    rng.shuffle(shuffled);
    for (std::size_t k = 0; k < members.size(); ++k) partners[members[k]] = shuffled[k];
  }
  return partners;
}

}  // namespace

MixupBatch batch_mixup(std::span<const Graph> batch, const MatcherParams* matcher, const MixupConfig& config,
                       Rng& rng) {
  if (batch.empty()) throw std::invalid_argument("batch_mixup: empty batch");
  if (config.alignment == Alignment::learned && matcher == nullptr) {
    throw std::invalid_argument("batch_mixup: learned alignment requires a matcher");
  }
  MixupBatch out;
  out.partners = draw_partners(batch, config.same_class_only, rng);
  out.graphs.reserve(batch.size());
  out.lambdas.reserve(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const Graph& g1 = batch[i];
    const Graph& g2 = batch[out.partners[i]];
    const double lambda = sample_mix_ratio(config.ratio, rng);
    out.lambdas.push_back(lambda);
    switch (config.alignment) {
      case Alignment::learned: {
        auto [h1, h2] = embed_pair(g1, g2, *matcher);
        const Matrix m = assignment_matrix(h1, h2, matcher->config.metric, config.normalizer);
        out.graphs.push_back(s_mixup_pair(g1, g2, m, lambda));
        break;
      }
      case Alignment::random:
        out.graphs.push_back(random_mixup_pair(g1, g2, lambda, rng.split()));
        break;
      case Alignment::identity:
        if (g1.num_nodes() != g2.num_nodes()) {
          throw std::invalid_argument("batch_mixup: identity alignment needs equal node counts");
        }
        out.graphs.push_back(s_mixup_pair(g1, g2, Matrix::Identity(g1.num_nodes(), g1.num_nodes()), lambda));
        break;
    }
  }
  return out;
}

std::string_view to_string(Alignment a) {
  switch (a) {
    case Alignment::learned: return "learned";
    case Alignment::random: return "random";
    case Alignment::identity: return "identity";
  }
  return "?";
}

Alignment parse_alignment(std::string_view s) {
  if (s == "learned") return Alignment::learned;
  if (s == "random") return Alignment::random;
  if (s == "identity") return Alignment::identity;
  throw std::invalid_argument("unknown alignment '" + std::string(s) + "'");
}

}  // namespace smixup
