#include <gtest/gtest.h>

#include <cmath>

#include "smixup/gnn.hpp"
#include "smixup/numerics.hpp"
#include "test_support.hpp"

namespace smixup {
namespace {

using testing::max_abs_diff;
using testing::random_graph;
using testing::random_matrix;

Matrix m1(double v) { return Matrix::Constant(1, 1, v); }

TEST(Init, BiasesFollowFanInBound) {
  for (Backbone b : {Backbone::gcn, Backbone::gin}) {
    GnnConfig cfg;
    cfg.backbone = b;
    cfg.feature_dim = 3;
    cfg.num_classes = 2;
    cfg.hidden = 16;
    const GnnParams p = init_gnn(cfg, 9);
    for (const auto& [name, w] : p.weights) {
      if (name.find("layer") != 0 || name.find("bias") == std::string::npos) continue;
      const bool first = name.rfind("layer0.", 0) == 0 && name.find("mlp1") == std::string::npos;
      const double bound = 1.0 / std::sqrt(first ? 3.0 : 16.0);
      EXPECT_LE(w.cwiseAbs().maxCoeff(), bound) << name;
      EXPECT_GT(w.cwiseAbs().maxCoeff(), 0.0) << name;
    }
  }
}

TEST(GcnLayer, SingleNode) {
  EXPECT_EQ(gcn_layer(m1(2.0), m1(0.0), m1(1.5), m1(0.0)), m1(3.0));
}

TEST(GcnLayer, TwoNodesAverage) {
  Matrix a(2, 2);
  a << 0, 1, 1, 0;
  Matrix h(2, 1);
  h << 1, 0;
  EXPECT_TRUE(gcn_normalized_adjacency(a).isApprox(Matrix::Constant(2, 2, 0.5), 1e-15));
  EXPECT_LT(max_abs_diff(gcn_layer(h, a, m1(1.0), m1(0.0)), Matrix::Constant(2, 1, 0.5)), 1e-15);
}

TEST(GcnLayer, NegativePreActivationIsClamped) {
  Matrix a(2, 2);
  a << 0, 1, 1, 0;
  Matrix h(2, 1);
  h << 1, 1;
  EXPECT_EQ(gcn_layer(h, a, m1(-1.0), m1(0.0)), Matrix::Zero(2, 1));
}

TEST(GcnLayer, WeightedDegreesMatchHandFormula) {
  Matrix a(2, 2);
  a << 0, 0.5, 0.5, 0;
  // A + I has row sums 1.5, so every entry is divided by 1.5.
  Matrix expected(2, 2);
  expected << 1 / 1.5, 0.5 / 1.5, 0.5 / 1.5, 1 / 1.5;
  EXPECT_LT(max_abs_diff(gcn_normalized_adjacency(a), expected), 1e-15);
}

TEST(GcnLayer, NonSymmetricAdjacencyThrows) {
  Matrix a(2, 2);
  a << 0, 1, 0, 0;
  EXPECT_THROW(gcn_layer(Matrix::Ones(2, 1), a, m1(1.0), m1(0.0)), std::invalid_argument);
  EXPECT_THROW(gin_layer(Matrix::Ones(2, 1), a, GinMlp{m1(1), m1(0), m1(1), m1(0)}, 0.0), std::invalid_argument);
}

TEST(GinLayer, IsolatedNodeIsPerceptron) {
  const GinMlp mlp{m1(2.0), m1(-1.0), m1(3.0), m1(0.5)};
  // relu(relu(4 * 2 - 1) * 3 + 0.5) = 21.5
  EXPECT_EQ(gin_layer(m1(4.0), m1(0.0), mlp, 0.0), m1(21.5));
}

TEST(GinLayer, HalfWeightEdgeAggregation) {
  Matrix a(2, 2);
  a << 0, 0.5, 0.5, 0;
  const GinMlp identity{m1(1.0), m1(0.0), m1(1.0), m1(0.0)};
  EXPECT_EQ(gin_layer(Matrix::Ones(2, 1), a, identity, 0.0), Matrix::Constant(2, 1, 1.5));
}

TEST(GinLayer, ZeroAdjacencyReducesToRowwisePerceptron) {
  Rng rng(3);
  const Matrix h = random_matrix(rng, 4, 3);
  const GinMlp mlp{random_matrix(rng, 3, 5), random_matrix(rng, 1, 5), random_matrix(rng, 5, 2), random_matrix(rng, 1, 2)};
  const Matrix out = gin_layer(h, Matrix::Zero(4, 4), mlp, 0.0);
  for (Index i = 0; i < 4; ++i) {
    const Matrix row = gin_layer(h.row(i), Matrix::Zero(1, 1), mlp, 0.0);
    EXPECT_LT(max_abs_diff(out.row(i), row), 1e-14);
  }
}

TEST(Readout, MeanAndSum) {
  Matrix h(2, 2);
  h << 1, 3, 3, 1;
  EXPECT_EQ(readout(h, Readout::mean), (Vector(2) << 2, 2).finished());
  EXPECT_EQ(readout(h, Readout::sum), (Vector(2) << 4, 4).finished());
  const Matrix single = (Matrix(1, 3) << 1, 2, 3).finished();
  EXPECT_EQ(readout(single, Readout::mean), readout(single, Readout::sum));
  EXPECT_THROW(readout(Matrix(0, 2), Readout::mean), std::invalid_argument);
}

GnnConfig config_for(Backbone b, Readout r = Readout::mean) {
  GnnConfig cfg;
  cfg.backbone = b;
  cfg.num_layers = 3;
  cfg.hidden = 4;
  cfg.readout = r;
  cfg.num_classes = 3;
  cfg.feature_dim = 2;
  return cfg;
}

class BackboneTest : public ::testing::TestWithParam<Backbone> {};

TEST_P(BackboneTest, ZeroHeadGivesUniformProbabilities) {
  GnnParams params = init_gnn(config_for(GetParam()), 1);
  params.weights["head.weight"].setZero();
  params.weights["head.bias"].setZero();
  Rng rng(2);
  const Vector p = classifier_forward(random_graph(rng, 5, 2, 3), params);
  for (Index c = 0; c < 3; ++c) EXPECT_NEAR(p(c), 1.0 / 3.0, 1e-15);
}

TEST_P(BackboneTest, OutputIsDistributionAndDeterministic) {
  const GnnParams params = init_gnn(config_for(GetParam()), 4);
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = random_graph(rng, 1 + trial % 7, 2, 3);
    const Vector p = classifier_forward(g, params);
    EXPECT_NEAR(p.sum(), 1.0, 1e-12);
    EXPECT_TRUE((p.array() >= 0.0).all());
    const Vector again = classifier_forward(g, params);
    EXPECT_TRUE(p == again);
  }
}

TEST_P(BackboneTest, LayersArePermutationEquivariant) {
  Rng rng(6);
  const GnnParams params = init_gnn(config_for(GetParam()), 7);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix a = testing::random_weighted_adjacency(rng, 6);
    const Matrix h = random_matrix(rng, 6, 2);
    const Matrix p = permutation_matrix(testing::random_perm(rng, 6));
    Matrix out;
    Matrix out_perm;
    if (GetParam() == Backbone::gcn) {
      out = gcn_layer(h, a, params.weights.at("layer0.weight"), params.weights.at("layer0.bias"));
      out_perm = gcn_layer(p * h, p * a * p.transpose(), params.weights.at("layer0.weight"),
                           params.weights.at("layer0.bias"));
    } else {
      const GinMlp mlp{params.weights.at("layer0.mlp0.weight"), params.weights.at("layer0.mlp0.bias"),
                       params.weights.at("layer0.mlp1.weight"), params.weights.at("layer0.mlp1.bias")};
      out = gin_layer(h, a, mlp, 0.0);
      out_perm = gin_layer(p * h, p * a * p.transpose(), mlp, 0.0);
    }
    EXPECT_LT(max_abs_diff(out_perm, p * out), 1e-9);
  }
}

TEST_P(BackboneTest, ClassifierIsInvariantToRelabeling) {
  Rng rng(8);
  const GnnParams params = init_gnn(config_for(GetParam(), Readout::sum), 9);
  for (int trial = 0; trial < 10; ++trial) {
    const Graph g = random_graph(rng, 6, 2, 3);
    const Graph h = permute_nodes(g, testing::random_perm(rng, 6));
    EXPECT_LT(max_abs_diff(classifier_forward(g, params), classifier_forward(h, params)), 1e-9);
  }
}

TEST_P(BackboneTest, AcceptsWeightedFullyConnectedGraphs) {
  Rng rng(10);
  Graph g = random_graph(rng, 5, 2, 3);
  g.adjacency = testing::random_weighted_adjacency(rng, 5);
  const Vector p = classifier_forward(g, init_gnn(config_for(GetParam()), 11));
  EXPECT_NEAR(p.sum(), 1.0, 1e-12);
}

TEST_P(BackboneTest, FullLossPassesGradientCheck) {
  Rng rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    GnnParams params = init_gnn(config_for(GetParam(), trial % 2 ? Readout::sum : Readout::mean), 100 + trial);
    // Zero biases put dead rows exactly on the rectifier kink.
    for (auto& [name, w] : params.weights) w = random_matrix(rng, w.rows(), w.cols(), 0.5);
    Graph g = random_graph(rng, 2 + trial % 5, 2, 3);
    g.label = (Vector(3) << 0.2, 0.5, 0.3).finished();
    ad::Tape tape;
    ad::Var loss = soft_cross_entropy(ad::row_softmax(classifier_logits(tape, g, params)), g.label);
    EXPECT_LT(ad::finite_diff_check(tape, loss, 1e-5), 1e-4) << "trial " << trial;
  }
}

TEST_P(BackboneTest, RecordedLogitsMatchDenseForward) {
  Rng rng(13);
  const GnnParams params = init_gnn(config_for(GetParam()), 14);
  const Graph g = random_graph(rng, 5, 2, 3);
  ad::Tape tape;
  const Matrix logits = tape.value(classifier_logits(tape, g, params));
  const Matrix probs = row_softmax(logits);
  EXPECT_LT(max_abs_diff(probs.transpose(), classifier_forward(g, params)), 1e-14);
}

TEST_P(BackboneTest, CheckpointRoundTrip) {
  const GnnParams params = init_gnn(config_for(GetParam(), Readout::sum), 15);
  const GnnParams back = gnn_from_checkpoint(parse_checkpoint(serialize_checkpoint(to_checkpoint(params))));
  EXPECT_EQ(back.config.backbone, params.config.backbone);
  EXPECT_EQ(back.config.num_layers, params.config.num_layers);
  EXPECT_EQ(back.config.hidden, params.config.hidden);
  EXPECT_EQ(back.config.readout, params.config.readout);
  EXPECT_EQ(back.config.num_classes, params.config.num_classes);
  EXPECT_EQ(back.config.feature_dim, params.config.feature_dim);
  for (const auto& [name, w] : params.weights) EXPECT_TRUE(back.weights.at(name) == w) << name;
}

INSTANTIATE_TEST_SUITE_P(Backbones, BackboneTest, ::testing::Values(Backbone::gcn, Backbone::gin),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(Gnn, FeatureWidthMismatchThrows) {
  Rng rng(16);
  const GnnParams params = init_gnn(config_for(Backbone::gcn), 17);
  EXPECT_THROW(classifier_forward(random_graph(rng, 4, 3, 3), params), std::invalid_argument);
}

TEST(Gnn, InvalidConfigThrows) {
  GnnConfig cfg = config_for(Backbone::gin);
  cfg.num_layers = 0;
  EXPECT_THROW(validate(cfg), std::invalid_argument);
  cfg = config_for(Backbone::gin);
  cfg.hidden = 0;
  EXPECT_THROW(init_gnn(cfg, 0), std::invalid_argument);
}

TEST(SoftCrossEntropy, Examples) {
  const Vector y = one_hot(1, 3);
  EXPECT_EQ(soft_cross_entropy(y, y), 0.0);
  EXPECT_NEAR(soft_cross_entropy((Vector(2) << 0.5, 0.5).finished(), (Vector(2) << 0.3, 0.7).finished()),
              std::log(2.0), 1e-15);
  const Vector p = (Vector(3) << 0.2, 0.7, 0.1).finished();
  const Vector y1 = one_hot(0, 3);
  const Vector y2 = one_hot(2, 3);
  const double lam = 0.35;
  EXPECT_NEAR(soft_cross_entropy(p, lam * y1 + (1 - lam) * y2),
              lam * soft_cross_entropy(p, y1) + (1 - lam) * soft_cross_entropy(p, y2), 1e-14);
  EXPECT_NEAR(soft_cross_entropy((Vector(2) << 0.0, 1.0).finished(), one_hot(0, 2)), -std::log(1e-12), 1e-9);
}

}  // namespace
}  // namespace smixup
