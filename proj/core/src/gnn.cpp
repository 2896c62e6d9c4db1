#include "smixup/gnn.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "smixup/numerics.hpp"

namespace smixup {

namespace {

std::string layer_key(int l, const char* suffix) { return "layer" + std::to_string(l) + "." + suffix; }

Matrix make_bias(const Matrix& bias, Index width, const char* who) {
  if (bias.size() != width) throw std::invalid_argument(std::string(who) + ": bias width mismatch");
  return Eigen::Map<const Matrix>(bias.data(), 1, width);
}

}  // namespace

void require_symmetric(const Matrix& adjacency, const char* who) {
  if (adjacency.rows() != adjacency.cols()) throw std::invalid_argument(std::string(who) + ": adjacency not square");
  if (((adjacency - adjacency.transpose()).array().abs() > 1e-12).any()) {
    throw std::invalid_argument(std::string(who) + ": adjacency is not symmetric");
  }
}

void validate(const GnnConfig& config) {
  if (config.num_layers < 1) throw std::invalid_argument("gnn: num_layers must be >= 1");
  if (config.hidden < 1) throw std::invalid_argument("gnn: hidden must be >= 1");
  if (config.num_classes < 1) throw std::invalid_argument("gnn: num_classes must be >= 1");
  if (config.feature_dim < 1) throw std::invalid_argument("gnn: feature_dim must be >= 1 (featurize first)");
}

Matrix glorot(Index rows, Index cols, Rng& rng) {
  const double a = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = (2.0 * rng.uniform() - 1.0) * a;
  }
  return m;
}

Matrix fan_in_uniform(Index fan_in, Index cols, Rng& rng) {
  const double a = 1.0 / std::sqrt(static_cast<double>(fan_in));
  Matrix m(1, cols);
  for (Index j = 0; j < cols; ++j) m(0, j) = (2.0 * rng.uniform() - 1.0) * a;
  return m;
}

GnnParams init_gnn(const GnnConfig& config, std::uint64_t seed) {
  validate(config);
  Rng rng(seed);
  GnnParams p;
  p.config = config;
  for (int l = 0; l < config.num_layers; ++l) {
    const Index in = l == 0 ? config.feature_dim : config.hidden;
    if (config.backbone == Backbone::gcn) {
      p.weights[layer_key(l, "weight")] = glorot(in, config.hidden, rng);
      p.weights[layer_key(l, "bias")] = fan_in_uniform(in, config.hidden, rng);
    } else {
      p.weights[layer_key(l, "mlp0.weight")] = glorot(in, config.hidden, rng);
      p.weights[layer_key(l, "mlp0.bias")] = fan_in_uniform(in, config.hidden, rng);
      p.weights[layer_key(l, "mlp1.weight")] = glorot(config.hidden, config.hidden, rng);
      p.weights[layer_key(l, "mlp1.bias")] = fan_in_uniform(config.hidden, config.hidden, rng);
    }
  }
  p.weights["head.weight"] = glorot(config.hidden, config.num_classes, rng);
  p.weights["head.bias"] = Matrix::Zero(1, config.num_classes);
  return p;
}

Matrix gcn_normalized_adjacency(const Matrix& adjacency) {
  const Index n = adjacency.rows();
  Matrix a_hat = adjacency + Matrix::Identity(n, n);
  Vector inv_sqrt = a_hat.rowwise().sum().array().rsqrt();
  return inv_sqrt.asDiagonal() * a_hat * inv_sqrt.asDiagonal();
}

Matrix gcn_layer(const Matrix& h, const Matrix& adjacency, const Matrix& weight, const Matrix& bias) {
  require_symmetric(adjacency, "gcn_layer");
  ad::Tape tape;
  auto out = ad_layers::gcn_layer(tape.constant(h), tape.constant(gcn_normalized_adjacency(adjacency)),
                                  tape.constant(weight), tape.constant(make_bias(bias, weight.cols(), "gcn_layer")));
  return out.value();
}

Matrix gin_layer(const Matrix& h, const Matrix& adjacency, const GinMlp& mlp, double eps) {
  require_symmetric(adjacency, "gin_layer");
  ad::Tape tape;
  auto out = ad_layers::gin_layer(tape.constant(h), tape.constant(adjacency), tape.constant(mlp.weight0),
                                  tape.constant(make_bias(mlp.bias0, mlp.weight0.cols(), "gin_layer")),
                                  tape.constant(mlp.weight1),
                                  tape.constant(make_bias(mlp.bias1, mlp.weight1.cols(), "gin_layer")), eps);
  return out.value();
}

Vector readout(const Matrix& h, Readout mode) {
  if (h.rows() == 0) throw std::invalid_argument("readout: empty graph");
  return mode == Readout::mean ? Vector(h.colwise().mean().transpose()) : Vector(h.colwise().sum().transpose());
}

namespace ad_layers {

ad::Var gcn_layer(ad::Var h, ad::Var norm_adjacency, ad::Var weight, ad::Var bias) {
  return ad::relu(ad::add_row(ad::matmul(norm_adjacency, ad::matmul(h, weight)), bias));
}

ad::Var gin_layer(ad::Var h, ad::Var adjacency, ad::Var w0, ad::Var b0, ad::Var w1, ad::Var b1, double eps) {
  ad::Var agg = ad::add(eps == 0.0 ? h : ad::scale(h, 1.0 + eps), ad::matmul(adjacency, h));
  ad::Var hidden = ad::relu(ad::add_row(ad::matmul(agg, w0), b0));
  return ad::relu(ad::add_row(ad::matmul(hidden, w1), b1));
}

ad::Var readout(ad::Var h, Readout mode) {
  if (h.rows() == 0) throw std::invalid_argument("readout: empty graph");
  return mode == Readout::mean ? ad::mean_rows(h) : ad::sum_rows(h);
}

}  // namespace ad_layers

ad::Var classifier_logits(ad::Tape& tape, const Graph& g, const GnnParams& params) {
  const GnnConfig& c = params.config;
  if (g.feature_dim() != c.feature_dim) {
    throw std::invalid_argument("classifier: graph feature width " + std::to_string(g.feature_dim()) +
                                " != model feature_dim " + std::to_string(c.feature_dim));
  }
  require_symmetric(g.adjacency, "classifier");
  auto w = [&](const std::string& name) { return tape.param(name, params.weights.at(name)); };

  ad::Var h = tape.constant(g.features);
  if (c.backbone == Backbone::gcn) {
    ad::Var adj = tape.constant(gcn_normalized_adjacency(g.adjacency));
    for (int l = 0; l < c.num_layers; ++l) {
      h = ad_layers::gcn_layer(h, adj, w(layer_key(l, "weight")), w(layer_key(l, "bias")));
    }
  } else {
    ad::Var adj = tape.constant(g.adjacency);
    for (int l = 0; l < c.num_layers; ++l) {
      h = ad_layers::gin_layer(h, adj, w(layer_key(l, "mlp0.weight")), w(layer_key(l, "mlp0.bias")),
                               w(layer_key(l, "mlp1.weight")), w(layer_key(l, "mlp1.bias")), c.gin_eps);
    }
  }
  ad::Var pooled = ad_layers::readout(h, c.readout);
  return ad::add_row(ad::matmul(pooled, w("head.weight")), w("head.bias"));
}

Vector classifier_forward(const Graph& g, const GnnParams& params) {
  ad::Tape tape;
  ad::Var logits = classifier_logits(tape, g, params);
  return row_softmax(logits.value()).row(0).transpose();
}

double soft_cross_entropy(const Vector& probs, const Vector& target) {
  if (probs.size() != target.size()) throw std::invalid_argument("soft_cross_entropy: length mismatch");
  double loss = 0.0;
  for (Index c = 0; c < probs.size(); ++c) loss -= target(c) * std::log(std::max(probs(c), 1e-12));
  return loss;
}

ad::Var soft_cross_entropy(ad::Var probs, const Vector& target) {
  if (probs.rows() != 1 || probs.cols() != target.size()) {
    throw std::invalid_argument("soft_cross_entropy: expected 1 x C probabilities");
  }
  ad::Var y = probs.tape()->constant(target.transpose());
  return ad::scale(ad::sum_all(ad::hadamard(y, ad::log_clamped(probs, 1e-12))), -1.0);
}

Checkpoint to_checkpoint(const GnnParams& params) {
  const GnnConfig& c = params.config;
  Checkpoint ckpt;
  ckpt.meta["kind"] = "classifier";
  ckpt.meta["backbone"] = std::string(to_string(c.backbone));
  ckpt.meta["num_layers"] = std::to_string(c.num_layers);
  ckpt.meta["hidden"] = std::to_string(c.hidden);
  ckpt.meta["readout"] = std::string(to_string(c.readout));
  ckpt.meta["num_classes"] = std::to_string(c.num_classes);
  ckpt.meta["feature_dim"] = std::to_string(c.feature_dim);
  ckpt.tensors = params.weights;
  return ckpt;
}

GnnParams gnn_from_checkpoint(const Checkpoint& ckpt) {
  auto get = [&](const char* key) -> const std::string& {
    auto it = ckpt.meta.find(key);
    if (it == ckpt.meta.end()) throw std::runtime_error(std::string("classifier checkpoint lacks meta ") + key);
    return it->second;
  };
  if (get("kind") != "classifier") throw std::runtime_error("checkpoint is not a classifier checkpoint");
  GnnParams p;
  p.config.backbone = parse_backbone(get("backbone"));
  p.config.num_layers = std::stoi(get("num_layers"));
  p.config.hidden = std::stoi(get("hidden"));
  p.config.readout = parse_readout(get("readout"));
  p.config.num_classes = std::stoi(get("num_classes"));
  p.config.feature_dim = std::stoi(get("feature_dim"));
  p.weights = ckpt.tensors;
  const GnnParams shape = init_gnn(p.config, 0);
  for (const auto& [name, m] : shape.weights) {
    auto it = p.weights.find(name);
    if (it == p.weights.end() || it->second.rows() != m.rows() || it->second.cols() != m.cols()) {
      throw std::runtime_error("classifier checkpoint: missing or mis-shaped tensor " + name);
    }
  }
  return p;
}

std::string_view to_string(Backbone b) { return b == Backbone::gcn ? "gcn" : "gin"; }
std::string_view to_string(Readout r) { return r == Readout::mean ? "mean" : "sum"; }

Backbone parse_backbone(std::string_view s) {
  if (s == "gcn") return Backbone::gcn;
  if (s == "gin") return Backbone::gin;
  throw std::invalid_argument("unknown backbone '" + std::string(s) + "'");
}

Readout parse_readout(std::string_view s) {
  if (s == "mean") return Readout::mean;
  if (s == "sum") return Readout::sum;
  throw std::invalid_argument("unknown readout '" + std::string(s) + "'");
}

}  // namespace smixup
