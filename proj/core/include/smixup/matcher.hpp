#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "smixup/autodiff.hpp"
#include "smixup/checkpoint.hpp"
#include "smixup/graph.hpp"
#include "smixup/numerics.hpp"

namespace smixup {

/// Architecture of the graph matching network. One similarity metric is shared
/// by the cross-graph attention, the assignment matrix and the triplet loss.
struct MatcherConfig {
  int num_layers = 5;
  int hidden = 256;
  Similarity metric = Similarity::neg_sq_euclidean;
  Normalizer normalizer = Normalizer::softmax;
  int feature_dim = 1;
};

/// Per layer l (input width in_l = feature_dim for l = 0, hidden otherwise):
///   layer<l>.msg.weight     in_l x hidden        within-graph message A H W
///   layer<l>.update.weight  (2 in_l + hidden) x hidden
///   layer<l>.update.bias    1 x hidden
/// The update is relu([H | A H W_msg | mu] W_upd + b).
struct MatcherParams {
  MatcherConfig config;
  ParamStore weights;
};

void validate(const MatcherConfig& config);
MatcherParams init_matcher(const MatcherConfig& config, std::uint64_t seed);

struct CrossAttention {
  /// weights(j, i) = softmax over j of sim(h1_i, h2_j); every column sums to 1.
  Matrix weights;
  /// messages.row(i) = sum_j weights(j, i) (h2_j - h1_i).
  Matrix messages;
};

CrossAttention cross_graph_attention(const Matrix& h1, const Matrix& h2, Similarity metric);

/// Final node embeddings (H1, H2) after num_layers rounds of within- and
/// cross-graph message passing. Symmetric in the pair.
std::pair<Matrix, Matrix> embed_pair(const Graph& g1, const Graph& g2, const MatcherParams& params);

/// n1 x n2 soft assignment: normalise(sim(H1, H2)) where softmax runs down
/// each column (one distribution over G1 nodes per G2 node).
Matrix assignment_matrix(const Matrix& h1, const Matrix& h2, Similarity metric, Normalizer normalizer);

/// embed_pair followed by assignment_matrix with the matcher's own settings.
Matrix compute_assignment(const Graph& g1, const Graph& g2, const MatcherParams& params);

/// max(0, sim(h1_alt, h3) - sim(h1, h2) + margin) for graph-level vectors.
double triplet_loss(const Vector& h1, const Vector& h2, const Vector& h1_alt, const Vector& h3, double margin,
                    Similarity metric);

namespace ad_layers {

ad::Var similarity(ad::Var a, ad::Var b, Similarity metric);

struct CrossAttentionVars {
  ad::Var weights;   // n2 x n1
  ad::Var messages;  // n1 x h
};
CrossAttentionVars cross_graph_attention(ad::Var h1, ad::Var h2, Similarity metric);

std::pair<ad::Var, ad::Var> embed_pair(ad::Tape& tape, const Graph& g1, const Graph& g2,
                                       const MatcherParams& params);

ad::Var triplet_loss(ad::Var h1, ad::Var h2, ad::Var h1_alt, ad::Var h3, double margin, Similarity metric);

/// Loss of one triplet (anchor, positive, negative) through the matcher:
/// both pairs are embedded, sum-read-out and fed to the triplet loss.
ad::Var triplet_objective(ad::Tape& tape, const Graph& anchor, const Graph& positive, const Graph& negative,
                          const MatcherParams& params, double margin);

}  // namespace ad_layers

struct MatcherTrainConfig {
  double margin = 1.0;
  double learning_rate = 1e-3;
  int epochs = 500;
  int batch_size = 256;
  std::uint64_t seed = 0;
};

struct MatcherTrainResult {
  MatcherParams params;
  /// Mean batch triplet loss per optimisation step.
  std::vector<double> step_losses;
};

/// Index triplet (anchor, positive, negative): anchor and positive are distinct
/// graphs of one class, negative is from a different class.
struct Triplet {
  std::size_t anchor;
  std::size_t positive;
  std::size_t negative;
};

/// Samples triplets from per-class index lists: uniform class among those with
/// at least two graphs, two distinct members, then a uniform other class with
/// at least one graph and a uniform member of it.
class TripletSampler {
 public:
  explicit TripletSampler(const GraphDataset& ds);
  Triplet sample(Rng& rng) const;

 private:
  std::vector<std::vector<std::size_t>> by_class_;
  std::vector<int> anchor_classes_;
  std::vector<int> nonempty_classes_;
};

/// Adam on the mean triplet loss of batch_size sampled triplets per step;
/// ceil(N / batch_size) steps per epoch. Deterministic given the seeds.
MatcherTrainResult train_matcher(const GraphDataset& train, const MatcherConfig& config, std::uint64_t init_seed,
                                 const MatcherTrainConfig& train_config);

Checkpoint to_checkpoint(const MatcherParams& params);
MatcherParams matcher_from_checkpoint(const Checkpoint& ckpt);

}  // namespace smixup
