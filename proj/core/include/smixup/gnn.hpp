#pragma once

#include <cstdint>
#include <string_view>

#include "smixup/autodiff.hpp"
#include "smixup/checkpoint.hpp"
#include "smixup/graph.hpp"
#include "smixup/rng.hpp"

namespace smixup {

enum class Backbone { gcn, gin };
enum class Readout { mean, sum };

struct GnnConfig {
  Backbone backbone = Backbone::gcn;
  int num_layers = 4;
  int hidden = 32;
  Readout readout = Readout::mean;
  int num_classes = 2;
  int feature_dim = 1;
  /// GIN self-weight; fixed (GIN-0).
  double gin_eps = 0.0;
};

/// Weights are named
///   GCN: layer<l>.weight (in x hidden), layer<l>.bias (1 x hidden)
///   GIN: layer<l>.mlp0.{weight,bias}, layer<l>.mlp1.{weight,bias}
///   head.weight (hidden x C), head.bias (1 x C)
struct GnnParams {
  GnnConfig config;
  ParamStore weights;
};

void validate(const GnnConfig& config);

/// Glorot-uniform weights, zero biases.
GnnParams init_gnn(const GnnConfig& config, std::uint64_t seed);

/// D^-1/2 (A + I) D^-1/2 with D the weighted row sums of A + I.
Matrix gcn_normalized_adjacency(const Matrix& adjacency);

/// relu(norm(A) H W + bias). Throws on a non-symmetric A.
Matrix gcn_layer(const Matrix& h, const Matrix& adjacency, const Matrix& weight, const Matrix& bias);

struct GinMlp {
  Matrix weight0;
  Matrix bias0;
  Matrix weight1;
  Matrix bias1;
};

/// relu(relu(((1 + eps) H + A H) W0 + b0) W1 + b1).
Matrix gin_layer(const Matrix& h, const Matrix& adjacency, const GinMlp& mlp, double eps);

Vector readout(const Matrix& h, Readout mode);

namespace ad_layers {

/// Recorded counterparts of the layers above. `norm_adjacency` is the
/// already-normalised constant for GCN; `adjacency` the raw one for GIN.
ad::Var gcn_layer(ad::Var h, ad::Var norm_adjacency, ad::Var weight, ad::Var bias);
ad::Var gin_layer(ad::Var h, ad::Var adjacency, ad::Var w0, ad::Var b0, ad::Var w1, ad::Var b1, double eps);
ad::Var readout(ad::Var h, Readout mode);

}  // namespace ad_layers

/// 1 x C logits for g, recorded on `tape` with params bound by name.
ad::Var classifier_logits(ad::Tape& tape, const Graph& g, const GnnParams& params);

/// Softmax class probabilities.
Vector classifier_forward(const Graph& g, const GnnParams& params);

/// -sum_c y_c log(max(p_c, 1e-12)).
double soft_cross_entropy(const Vector& probs, const Vector& target);
ad::Var soft_cross_entropy(ad::Var probs, const Vector& target);

Checkpoint to_checkpoint(const GnnParams& params);
GnnParams gnn_from_checkpoint(const Checkpoint& ckpt);

std::string_view to_string(Backbone b);
std::string_view to_string(Readout r);
Backbone parse_backbone(std::string_view s);
Readout parse_readout(std::string_view s);

/// Throws std::invalid_argument unless |A - A^T| <= 1e-12 entrywise.
void require_symmetric(const Matrix& adjacency, const char* who);

/// Glorot-uniform initialised matrix.
Matrix glorot(Index rows, Index cols, Rng& rng);

/// Row vector drawn from U(-1/sqrt(fan_in), 1/sqrt(fan_in)).
Matrix fan_in_uniform(Index fan_in, Index cols, Rng& rng);

}  // namespace smixup
