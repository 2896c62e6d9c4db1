#include "smixup/matcher.hpp"

#include <stdexcept>
#include <string>

#include "smixup/gnn.hpp"
#include "smixup/optimizer.hpp"

namespace smixup {

namespace {

std::string key(int l, const char* suffix) { return "layer" + std::to_string(l) + "." + suffix; }

}  // namespace

void validate(const MatcherConfig& config) {
  if (config.num_layers < 1) throw std::invalid_argument("matcher: num_layers must be >= 1");
  if (config.hidden < 1) throw std::invalid_argument("matcher: hidden must be >= 1");
  if (config.feature_dim < 1) throw std::invalid_argument("matcher: feature_dim must be >= 1 (featurize first)");
}

MatcherParams init_matcher(const MatcherConfig& config, std::uint64_t seed) {
  validate(config);
  Rng rng(seed);
  MatcherParams p;
  p.config = config;
  for (int l = 0; l < config.num_layers; ++l) {
    const Index in = l == 0 ? config.feature_dim : config.hidden;
    p.weights[key(l, "msg.weight")] = glorot(in, config.hidden, rng);
    p.weights[key(l, "update.weight")] = glorot(2 * in + config.hidden, config.hidden, rng);
    p.weights[key(l, "update.bias")] = fan_in_uniform(2 * in + config.hidden, config.hidden, rng);
  }
  return p;
}

namespace ad_layers {

ad::Var similarity(ad::Var a, ad::Var b, Similarity metric) {
  return metric == Similarity::cosine ? ad::pairwise_cosine(a, b) : ad::pairwise_neg_sq_euclidean(a, b);
}

CrossAttentionVars cross_graph_attention(ad::Var h1, ad::Var h2, Similarity metric) {
  if (h1.cols() != h2.cols()) throw std::invalid_argument("cross_graph_attention: width mismatch");
  // Row i of the row-softmax holds w_{.i}; since each row sums to one,
  // sum_j w_ji (h2_j - h1_i) = (W H2)_i - h1_i.
  ad::Var w = ad::row_softmax(similarity(h1, h2, metric));
  ad::Var messages = ad::sub(ad::matmul(w, h2), h1);
  return {ad::transpose(w), messages};
}

std::pair<ad::Var, ad::Var> embed_pair(ad::Tape& tape, const Graph& g1, const Graph& g2,
                                       const MatcherParams& params) {
  const MatcherConfig& c = params.config;
  for (const Graph* g : {&g1, &g2}) {
    if (g->feature_dim() != c.feature_dim) {
      throw std::invalid_argument("embed_pair: graph feature width " + std::to_string(g->feature_dim()) +
                                  " != matcher feature_dim " + std::to_string(c.feature_dim));
    }
  }
  if (c.num_layers < 1) throw std::invalid_argument("embed_pair: matcher needs at least one layer");
  auto w = [&](const std::string& name) { return tape.param(name, params.weights.at(name)); };

  ad::Var a1 = tape.constant(g1.adjacency);
  ad::Var a2 = tape.constant(g2.adjacency);
  ad::Var h1 = tape.constant(g1.features);
  ad::Var h2 = tape.constant(g2.features);
  for (int l = 0; l < c.num_layers; ++l) {
    ad::Var w_msg = w(key(l, "msg.weight"));
    ad::Var w_upd = w(key(l, "update.weight"));
    ad::Var b_upd = w(key(l, "update.bias"));
    ad::Var m1 = ad::matmul(a1, ad::matmul(h1, w_msg));
    ad::Var m2 = ad::matmul(a2, ad::matmul(h2, w_msg));
    ad::Var mu1 = cross_graph_attention(h1, h2, c.metric).messages;
    ad::Var mu2 = cross_graph_attention(h2, h1, c.metric).messages;
    ad::Var next1 = ad::relu(ad::add_row(ad::matmul(ad::hstack({h1, m1, mu1}), w_upd), b_upd));
    ad::Var next2 = ad::relu(ad::add_row(ad::matmul(ad::hstack({h2, m2, mu2}), w_upd), b_upd));
    h1 = next1;
    h2 = next2;
  }
  return {h1, h2};
}

ad::Var triplet_loss(ad::Var h1, ad::Var h2, ad::Var h1_alt, ad::Var h3, double margin, Similarity metric) {
  if (!(margin > 0.0)) throw std::invalid_argument("triplet_loss: margin must be positive");
  ad::Var neg = similarity(h1_alt, h3, metric);
  ad::Var pos = similarity(h1, h2, metric);
  ad::Var gap = ad::add(ad::sub(neg, pos), h1.tape()->constant(Matrix::Constant(1, 1, margin)));
  return ad::hinge(gap);
}

ad::Var triplet_objective(ad::Tape& tape, const Graph& anchor, const Graph& positive, const Graph& negative,
                          const MatcherParams& params, double margin) {
  auto [h1, h2] = embed_pair(tape, anchor, positive, params);
  auto [h1_alt, h3] = embed_pair(tape, anchor, negative, params);
  return triplet_loss(ad::sum_rows(h1), ad::sum_rows(h2), ad::sum_rows(h1_alt), ad::sum_rows(h3), margin,
                      params.config.metric);
}

}  // namespace ad_layers

CrossAttention cross_graph_attention(const Matrix& h1, const Matrix& h2, Similarity metric) {
  ad::Tape tape;
  auto vars = ad_layers::cross_graph_attention(tape.constant(h1), tape.constant(h2), metric);
  return {vars.weights.value(), vars.messages.value()};
}

std::pair<Matrix, Matrix> embed_pair(const Graph& g1, const Graph& g2, const MatcherParams& params) {
  ad::Tape tape;
  auto [h1, h2] = ad_layers::embed_pair(tape, g1, g2, params);
  return {h1.value(), h2.value()};
}

Matrix assignment_matrix(const Matrix& h1, const Matrix& h2, Similarity metric, Normalizer normalizer) {
  const Matrix scores = pairwise_similarity(h1, h2, metric);
  return normalizer == Normalizer::softmax ? column_softmax(scores) : sinkhorn_normalize(scores);
}

Matrix compute_assignment(const Graph& g1, const Graph& g2, const MatcherParams& params) {
  auto [h1, h2] = embed_pair(g1, g2, params);
  return assignment_matrix(h1, h2, params.config.metric, params.config.normalizer);
}

double triplet_loss(const Vector& h1, const Vector& h2, const Vector& h1_alt, const Vector& h3, double margin,
                    Similarity metric) {
  if (!(margin > 0.0)) throw std::invalid_argument("triplet_loss: margin must be positive");
  auto sim = [&](const Vector& a, const Vector& b) {
    return pairwise_similarity(a.transpose(), b.transpose(), metric)(0, 0);
  };
  return std::max(0.0, sim(h1_alt, h3) - sim(h1, h2) + margin);
}

TripletSampler::TripletSampler(const GraphDataset& ds) {
  by_class_.resize(static_cast<std::size_t>(ds.num_classes));
  for (std::size_t i = 0; i < ds.graphs.size(); ++i) {
    by_class_[static_cast<std::size_t>(ds.graphs[i].class_index())].push_back(i);
  }
  for (std::size_t c = 0; c < by_class_.size(); ++c) {
    if (by_class_[c].size() >= 2) anchor_classes_.push_back(static_cast<int>(c));
    if (!by_class_[c].empty()) nonempty_classes_.push_back(static_cast<int>(c));
  }
  if (nonempty_classes_.size() < 2) {
    throw std::invalid_argument("triplet sampling needs graphs from at least two classes");
  }
  if (anchor_classes_.empty()) throw std::invalid_argument("triplet sampling needs a class with two graphs");
}

Triplet TripletSampler::sample(Rng& rng) const {
  const int cls = anchor_classes_[rng.uniform_index(anchor_classes_.size())];
  const auto& members = by_class_[static_cast<std::size_t>(cls)];
  const std::size_t a = rng.uniform_index(members.size());
  std::size_t b = rng.uniform_index(members.size() - 1);
  if (b >= a) ++b;

  std::size_t other = rng.uniform_index(nonempty_classes_.size() - 1);
  // Skip the anchor class in the ordered list of non-empty classes.
  std::size_t pos = 0;
  while (nonempty_classes_[pos] != cls) ++pos;
  if (other >= pos) ++other;
  const auto& negatives = by_class_[static_cast<std::size_t>(nonempty_classes_[other])];
  return {members[a], members[b], negatives[rng.uniform_index(negatives.size())]};
}

MatcherTrainResult train_matcher(const GraphDataset& train, const MatcherConfig& config, std::uint64_t init_seed,
                                 const MatcherTrainConfig& train_config) {
  if (!(train_config.margin > 0.0)) throw std::invalid_argument("train_matcher: margin must be positive");
  if (train_config.epochs < 0 || train_config.batch_size < 1) {
    throw std::invalid_argument("train_matcher: epochs >= 0 and batch_size >= 1 required");
  }
  const TripletSampler sampler(train);
  MatcherTrainResult result;
  result.params = init_matcher(config, init_seed);
  Adam adam(train_config.learning_rate);
  Rng rng(train_config.seed);

  const auto batch = static_cast<std::size_t>(train_config.batch_size);
  const std::size_t steps_per_epoch = (train.size() + batch - 1) / batch;
  const std::size_t total = steps_per_epoch * static_cast<std::size_t>(train_config.epochs);
  result.step_losses.reserve(total);
  for (std::size_t step = 0; step < total; ++step) {
    ad::Tape tape;
    std::vector<ad::Var> losses;
    losses.reserve(batch);
    for (std::size_t k = 0; k < batch; ++k) {
      const Triplet t = sampler.sample(rng);
      losses.push_back(ad_layers::triplet_objective(tape, train.graphs[t.anchor], train.graphs[t.positive],
                                                    train.graphs[t.negative], result.params,
                                                    train_config.margin));
    }
    ad::Var total_loss = losses.front();
    for (std::size_t k = 1; k < losses.size(); ++k) total_loss = ad::add(total_loss, losses[k]);
    ad::Var mean_loss = ad::scale(total_loss, 1.0 / static_cast<double>(losses.size()));
    result.step_losses.push_back(mean_loss.value()(0, 0));
    adam.step(result.params.weights, tape.gradients(mean_loss));
  }
  return result;
}

Checkpoint to_checkpoint(const MatcherParams& params) {
  const MatcherConfig& c = params.config;
  Checkpoint ckpt;
  ckpt.meta["kind"] = "matcher";
  ckpt.meta["num_layers"] = std::to_string(c.num_layers);
  ckpt.meta["hidden"] = std::to_string(c.hidden);
  ckpt.meta["metric"] = std::string(to_string(c.metric));
  ckpt.meta["normalizer"] = std::string(to_string(c.normalizer));
  ckpt.meta["feature_dim"] = std::to_string(c.feature_dim);
  ckpt.tensors = params.weights;
  return ckpt;
}

MatcherParams matcher_from_checkpoint(const Checkpoint& ckpt) {
  auto get = [&](const char* k) -> const std::string& {
    auto it = ckpt.meta.find(k);
    if (it == ckpt.meta.end()) throw std::runtime_error(std::string("matcher checkpoint lacks meta ") + k);
    return it->second;
  };
  if (get("kind") != "matcher") throw std::runtime_error("checkpoint is not a matcher checkpoint");
  MatcherParams p;
  p.config.num_layers = std::stoi(get("num_layers"));
  p.config.hidden = std::stoi(get("hidden"));
  p.config.metric = parse_similarity(get("metric"));
  p.config.normalizer = parse_normalizer(get("normalizer"));
  p.config.feature_dim = std::stoi(get("feature_dim"));
  p.weights = ckpt.tensors;
  const MatcherParams shape = init_matcher(p.config, 0);
  for (const auto& [name, m] : shape.weights) {
    auto it = p.weights.find(name);
    if (it == p.weights.end() || it->second.rows() != m.rows() || it->second.cols() != m.cols()) {
      throw std::runtime_error("matcher checkpoint: missing or mis-shaped tensor " + name);
    }
  }
  return p;
}

}  // namespace smixup
