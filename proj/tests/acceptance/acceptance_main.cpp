// Acceptance suite: one PASS/FAIL line per criterion.
//
//   smixup_acceptance            run criteria 1-8 (9 too when SMIXUP_IMDB_DIR is set)
//   smixup_acceptance --only N   run criterion N alone
//
// Exit status is 0 when every selected criterion passes, 1 otherwise, and 77
// when the only selected criterion was skipped.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdarg>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "smixup/autodiff.hpp"
#include "smixup/dataset_ops.hpp"
#include "smixup/experiment.hpp"
#include "smixup/experiment_config.hpp"
#include "smixup/ged.hpp"
#include "smixup/gnn.hpp"
#include "smixup/matcher.hpp"
#include "smixup/mixup.hpp"
#include "smixup/motif.hpp"
#include "smixup/numerics.hpp"
#include "test_support.hpp"

namespace smixup {
namespace {

using testing::graph_invariant_violation;
using testing::random_graph;
using testing::random_matrix;

enum class Verdict { pass, fail, skip };

struct Outcome {
  Verdict verdict = Verdict::fail;
  std::string detail;
};

std::string fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* format, ...) {
  char buf[1024];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

Outcome verdict_of(bool ok, std::string detail) { return {ok ? Verdict::pass : Verdict::fail, std::move(detail)}; }

// Randomises every tensor so no rectifier input sits exactly on its kink.
void randomize(ParamStore& weights, Rng& rng, double scale) {
  for (auto& [name, w] : weights) w = random_matrix(rng, w.rows(), w.cols(), scale);
}

ad::Var weighted_sum(ad::Tape& tape, ad::Var out, Rng& rng) {
  return ad::sum_all(ad::hadamard(out, tape.constant(random_matrix(rng, out.rows(), out.cols()))));
}

int uniform_int(Rng& rng, int lo, int hi) {
  return lo + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(hi - lo + 1)));
}

// ---------------------------------------------------------------------------

Outcome gradient_fidelity() {
  constexpr int kInstances = 100;
  constexpr double kEps = 1e-5;
  Rng rng(101);
  double worst[4] = {0, 0, 0, 0};

  for (int k = 0; k < kInstances; ++k) {
    const int n = uniform_int(rng, 1, 6);
    const int p = uniform_int(rng, 1, 4);
    const int q = uniform_int(rng, 1, 4);
    const Matrix adjacency = testing::random_weighted_adjacency(rng, n);
    {
      ad::Tape tape;
      ad::Var h = tape.param("h", random_matrix(rng, n, p));
      ad::Var out = ad_layers::gcn_layer(h, tape.constant(gcn_normalized_adjacency(adjacency)),
                                         tape.param("w", random_matrix(rng, p, q)),
                                         tape.param("b", random_matrix(rng, 1, q)));
      worst[0] = std::max(worst[0], ad::finite_diff_check(tape, weighted_sum(tape, out, rng), kEps));
    }
    {
      const int r = uniform_int(rng, 1, 4);
      ad::Tape tape;
      ad::Var h = tape.param("h", random_matrix(rng, n, p));
      ad::Var out = ad_layers::gin_layer(h, tape.constant(adjacency), tape.param("w0", random_matrix(rng, p, r)),
                                         tape.param("b0", random_matrix(rng, 1, r)),
                                         tape.param("w1", random_matrix(rng, r, q)),
                                         tape.param("b1", random_matrix(rng, 1, q)), 0.0);
      worst[1] = std::max(worst[1], ad::finite_diff_check(tape, weighted_sum(tape, out, rng), kEps));
    }
    {
      const int classes = uniform_int(rng, 2, 4);
      ad::Tape tape;
      ad::Var h = tape.param("h", random_matrix(rng, n, p));
      ad::Var pooled = ad_layers::readout(h, k % 2 ? Readout::sum : Readout::mean);
      ad::Var logits = ad::add_row(ad::matmul(pooled, tape.param("head.w", random_matrix(rng, p, classes))),
                                   tape.param("head.b", random_matrix(rng, 1, classes)));
      Vector target = random_matrix(rng, classes, 1).cwiseAbs();
      target /= target.sum();
      ad::Var loss = soft_cross_entropy(ad::row_softmax(logits), target);
      worst[2] = std::max(worst[2], ad::finite_diff_check(tape, loss, kEps));
    }
    {
      MatcherConfig cfg;
      cfg.num_layers = uniform_int(rng, 1, 3);
      cfg.hidden = uniform_int(rng, 1, 4);
      cfg.feature_dim = p;
      cfg.metric = k % 2 ? Similarity::cosine : Similarity::neg_sq_euclidean;
      MatcherParams params = init_matcher(cfg, static_cast<std::uint64_t>(k));
      randomize(params.weights, rng, 0.5);
      const Graph anchor = random_graph(rng, n, p, 2);
      const Graph positive = random_graph(rng, uniform_int(rng, 1, 6), p, 2);
      const Graph negative = random_graph(rng, uniform_int(rng, 1, 6), p, 2);
      ad::Tape tape;
      ad::Var loss = ad_layers::triplet_objective(tape, anchor, positive, negative, params, 5.0);
      worst[3] = std::max(worst[3], ad::finite_diff_check(tape, loss, kEps));
    }
  }
  const double overall = *std::max_element(std::begin(worst), std::end(worst));
  return verdict_of(overall < 1e-4,
                    fmt("max relative error: gcn %.2e, gin %.2e, readout+head+ce %.2e, matcher triplet %.2e "
                        "(%d instances each, tol 1e-4)",
                        worst[0], worst[1], worst[2], worst[3], kInstances));
}

// ---------------------------------------------------------------------------

Outcome normalizer_contracts() {
  Rng rng(202);
  double worst_column = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const int n1 = uniform_int(rng, 1, 8);
    const int n2 = uniform_int(rng, 1, 8);
    const int h = uniform_int(rng, 1, 6);
    const Matrix m = assignment_matrix(random_matrix(rng, n1, h, 2.0), random_matrix(rng, n2, h, 2.0),
                                       k % 2 ? Similarity::cosine : Similarity::neg_sq_euclidean,
                                       Normalizer::softmax);
    worst_column = std::max(worst_column, (m.colwise().sum().array() - 1.0).abs().maxCoeff());
  }

  // Standard normal scores; wider spreads converge more slowly and are
  // reported separately.
  auto sinkhorn_sweep = [&](double scale, double& worst, int& max_iterations, int& unconverged) {
    worst = 0.0;
    max_iterations = 0;
    unconverged = 0;
    for (int k = 0; k < 1000; ++k) {
      const int n = uniform_int(rng, 2, 6);
      const SinkhornResult r = sinkhorn(random_matrix(rng, n, n, scale), 50, 1e-6);
      const double dev = std::max((r.matrix.colwise().sum().array() - 1.0).abs().maxCoeff(),
                                  (r.matrix.rowwise().sum().array() - 1.0).abs().maxCoeff());
      worst = std::max(worst, dev);
      max_iterations = std::max(max_iterations, r.iterations);
      if (dev > 1e-6) ++unconverged;
    }
  };
  double worst_sinkhorn = 0.0, worst_wide = 0.0;
  int max_iterations = 0, max_iterations_wide = 0, unconverged = 0, unconverged_wide = 0;
  sinkhorn_sweep(1.0, worst_sinkhorn, max_iterations, unconverged);
  sinkhorn_sweep(2.0, worst_wide, max_iterations_wide, unconverged_wide);
  const bool ok = worst_column <= 1e-9 && worst_sinkhorn <= 1e-6 && max_iterations <= 50;
  return verdict_of(ok, fmt("softmax column-sum error %.2e (tol 1e-9, 1000 pairs); sinkhorn on N(0,1) scores: margin "
                            "error %.2e (tol 1e-6), at most %d iterations, %d/1000 unconverged; [diagnostic] "
                            "scores with standard deviation 2: %d/1000 unconverged after 50 iterations",
                            worst_column, worst_sinkhorn, max_iterations, unconverged, unconverged_wide));
}

// ---------------------------------------------------------------------------

Outcome mixup_algebra() {
  Rng rng(303);
  int lambda_one_mismatch = 0;
  double fixed_point_error = 0.0;
  int invariant_violations = 0;
  int mixed = 0;
  for (int k = 0; k < 1000; ++k) {
    const int d = uniform_int(rng, 1, 4);
    const int c = uniform_int(rng, 2, 4);
    const Graph g1 = random_graph(rng, uniform_int(rng, 1, 8), d, c);
    const Graph g2 = random_graph(rng, uniform_int(rng, 1, 8), d, c);
    const Matrix m = column_softmax(random_matrix(rng, g1.num_nodes(), g2.num_nodes(), 3.0));

    const Graph at_one = s_mixup_pair(g1, g2, m, 1.0);
    if (at_one.adjacency != g1.adjacency || at_one.features != g1.features || at_one.label != g1.label) {
      ++lambda_one_mismatch;
    }
    const Graph self = s_mixup_pair(g1, g1, Matrix::Identity(g1.num_nodes(), g1.num_nodes()), rng.uniform());
    fixed_point_error = std::max({fixed_point_error, testing::max_abs_diff(self.adjacency, g1.adjacency),
                                  testing::max_abs_diff(self.features, g1.features),
                                  testing::max_abs_diff(self.label, g1.label)});
    for (const Graph& g : {s_mixup_pair(g1, g2, m, rng.uniform()), random_mixup_pair(g1, g2, rng.uniform(), k)}) {
      ++mixed;
      if (!graph_invariant_violation(g).empty()) ++invariant_violations;
    }
  }
  MixRatioSpec spec;
  spec.range = RangeMode::half;
  long below_half = 0;
  const double alphas[] = {0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0};
  for (long k = 0; k < 1000000; ++k) {
    spec.alpha = alphas[k % 7];
    if (sample_mix_ratio(spec, rng) < 0.5) ++below_half;
  }
  const bool ok = lambda_one_mismatch == 0 && fixed_point_error <= 1e-12 && invariant_violations == 0 && below_half == 0;
  return verdict_of(ok, fmt("lambda=1 mismatches %d/1000; identity self-mix error %.2e (tol 1e-12); invariant "
                            "violations %d/%d mixed graphs; half-range draws below 0.5: %ld/1000000",
                            lambda_one_mismatch, fixed_point_error, invariant_violations, mixed, below_half));
}

// ---------------------------------------------------------------------------

const std::vector<double> kLambdaGrid{0.5, 0.6, 0.7, 0.8, 0.9, 1.0};

struct BoundTally {
  int samples = 0;
  int violations = 0;
  double worst_excess = 0.0;
  int aligned_samples = 0;
  int aligned_violations = 0;
  double worst_aligned_gap = 0.0;
  int skipped = 0;
};

BoundTally bound_sweep(int pairs, int feature_dim, std::uint64_t seed) {
  Rng rng(seed);
  BoundTally t;
  for (int p = 0; p < pairs; ++p) {
    const TinyPair pair = random_tiny_pair(rng, 6, feature_dim);
    const Graph g2a = transform_graph(pair.g2, pair.assignment);
    for (double lam : kLambdaGrid) {
      try {
        const Graph mix = s_mixup_pair(pair.g1, pair.g2, pair.assignment, lam);
        const double eps = normalized_ged(mix, pair.g1, pair.g2, GedMode::aligned_chain, &g2a).epsilon;
        const double bound = theorem1_bound(pair.g1, pair.g2, g2a, lam, GedMode::aligned_chain);
        ++t.samples;
        const double excess = std::abs(eps - lam) - bound;
        if (excess > 1e-9) ++t.violations;
        t.worst_excess = std::max(t.worst_excess, excess);
      } catch (const std::domain_error&) {
        ++t.skipped;
      }
      // Already aligned inputs: the second parent is its own aligned copy.
      try {
        const Matrix id = Matrix::Identity(pair.g1.num_nodes(), pair.g1.num_nodes());
        const Graph mix = s_mixup_pair(pair.g1, g2a, id, lam);
        const double eps = normalized_ged(mix, pair.g1, g2a, GedMode::aligned_chain, &g2a).epsilon;
        ++t.aligned_samples;
        const double gap = std::abs(eps - lam);
        if (gap > 1e-9) ++t.aligned_violations;
        t.worst_aligned_gap = std::max(t.worst_aligned_gap, gap);
      } catch (const std::domain_error&) {
        ++t.skipped;
      }
    }
  }
  return t;
}

Outcome edit_distance_bound() {
  constexpr int kPairs = 500;
  const BoundTally t = bound_sweep(kPairs, 2, 404);

  Rng rng(405);
  int equal_size = 0;
  int exact_above_aligned = 0;
  int exact_mode_violations = 0;
  int exact_mode_samples = 0;
  while (equal_size < kPairs) {
    const TinyPair pair = random_tiny_pair(rng, 6);
    const Graph g2a = transform_graph(pair.g2, pair.assignment);
    for (const auto& [a, b] : {std::pair{&pair.g1, &g2a}, std::pair{&pair.g1, &pair.g2}}) {
      if (a->num_nodes() != b->num_nodes()) continue;
      ++equal_size;
      if (exact_ged(*a, *b).cost > aligned_ged(*a, *b) + 1e-12) ++exact_above_aligned;
    }
    if (exact_mode_samples < 300) {
      try {
        const Graph mix = s_mixup_pair(pair.g1, pair.g2, pair.assignment, 0.7);
        const double eps = normalized_ged(mix, pair.g1, pair.g2, GedMode::exact).epsilon;
        const double bound = theorem1_bound(pair.g1, pair.g2, g2a, 0.7, GedMode::exact);
        ++exact_mode_samples;
        if (std::abs(eps - 0.7) > bound + 1e-9) ++exact_mode_violations;
      } catch (const std::domain_error&) {
      }
    }
  }
  const BoundTally plain = bound_sweep(kPairs, 0, 404);

  const bool ok = t.violations == 0 && t.aligned_violations == 0 && exact_above_aligned == 0;
  return verdict_of(
      ok, fmt("bound violations %d/%d (worst excess %.4f); aligned-input |eps-lambda| > 1e-9 in %d/%d (worst %.4f); "
              "exact > aligned in %d/%d equal-size samples; [diagnostic] same sweep without node features: "
              "%d/%d violations, aligned-input %d/%d; [reported] exact-mode bound violations %d/%d",
              t.violations, t.samples, t.worst_excess, t.aligned_violations, t.aligned_samples, t.worst_aligned_gap,
              exact_above_aligned, equal_size, plain.violations, plain.samples, plain.aligned_violations,
              plain.aligned_samples, exact_mode_violations, exact_mode_samples));
}

// ---------------------------------------------------------------------------

Outcome linearity() {
  Rng rng(505);
  int violations = 0;
  double worst = 0.0;
  double worst_adjacency_term = 0.0;
  double worst_quadratic_feature_term = 0.0;
  int featureless_violations = 0;
  for (int k = 0; k < 1000; ++k) {
    const TinyPair pair = random_tiny_pair(rng, 6);
    const Graph g2a = transform_graph(pair.g2, pair.assignment);
    const double lam = rng.uniform();
    const Graph mix = s_mixup_pair(pair.g1, pair.g2, pair.assignment, lam);
    const double lhs = aligned_ged(mix, pair.g1);
    const double rhs = (1.0 - lam) * aligned_ged(g2a, pair.g1);
    const double err = std::abs(lhs - rhs);
    if (err > 1e-9) ++violations;
    worst = std::max(worst, err);

    const double adj_mix = (mix.adjacency - pair.g1.adjacency).cwiseAbs().sum();
    const double adj_ref = (g2a.adjacency - pair.g1.adjacency).cwiseAbs().sum();
    worst_adjacency_term = std::max(worst_adjacency_term, std::abs(adj_mix - (1 - lam) * adj_ref));
    const double feat_mix = (mix.features - pair.g1.features).squaredNorm();
    const double feat_ref = (g2a.features - pair.g1.features).squaredNorm();
    worst_quadratic_feature_term =
        std::max(worst_quadratic_feature_term, std::abs(feat_mix - (1 - lam) * (1 - lam) * feat_ref));
    if (std::abs(adj_mix - (1 - lam) * adj_ref) > 1e-9) ++featureless_violations;
  }
  return verdict_of(violations == 0,
                    fmt("|GED(mix,G1) - (1-lambda) GED(G2',G1)| > 1e-9 in %d/1000 samples (worst %.4f); "
                        "[diagnostic] adjacency term alone linear within %.2e (%d violations); feature term "
                        "matches (1-lambda)^2 scaling within %.2e",
                        violations, worst, worst_adjacency_term, featureless_violations, worst_quadratic_feature_term));
}

// ---------------------------------------------------------------------------

std::vector<double> average_ranks(const std::vector<double>& xs) {
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(xs.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = 0.5 * static_cast<double>(i + j) + 1.0;
    i = j + 1;
  }
  return ranks;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  const std::vector<double> ra = average_ranks(a);
  const std::vector<double> rb = average_ranks(b);
  const double ma = sample_mean(ra);
  const double mb = sample_mean(rb);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

Outcome ged_trend() {
  constexpr int kPairs = 20;
  const std::vector<GedSweepRow> rows = ged_sweep(kPairs, 6, kLambdaGrid, GedMode::aligned_chain, 606);
  int endpoint_failures = 0;
  int weak_pairs = 0;
  double min_rho = 1.0;
  for (int p = 0; p < kPairs; ++p) {
    std::vector<double> lambdas;
    std::vector<double> eps;
    for (const GedSweepRow& r : rows) {
      if (r.pair != p) continue;
      lambdas.push_back(r.lambda);
      eps.push_back(r.epsilon);
      if (r.lambda == 1.0 && r.epsilon != 1.0) ++endpoint_failures;
    }
    const double rho = spearman(lambdas, eps);
    min_rho = std::min(min_rho, rho);
    if (!(rho > 0.9)) ++weak_pairs;
  }
  return verdict_of(endpoint_failures == 0 && weak_pairs == 0,
                    fmt("eps(1.0) != 1 for %d/%d pairs; rank correlation <= 0.9 for %d/%d pairs (min %.3f)",
                        endpoint_failures, kPairs, weak_pairs, kPairs, min_rho));
}

// ---------------------------------------------------------------------------

// Shared settings for the MOTIF classification runs.
ExperimentConfig motif_experiment(const std::string& name) {
  ExperimentConfig cfg;
  apply_config_text(cfg,
                    "experiment.name = " + name +
                        "\n"
                        "dataset.source = motif\n"
                        "motif.count_per_class = 500\n"
                        "motif.seed = 7\n"
                        "model.backbone = gin\n"
                        "model.layers = 4\n"
                        "model.hidden = 32\n"
                        "train.lr = 0.001\n"
                        "train.batch_size = 16\n"
                        "train.epochs = 250\n"
                        "run.repeats = 10\n"
                        "run.seed = 2024\n"
                        "mixup.alpha = 5\n"
                        "matcher.layers = 3\n"
                        "matcher.hidden = 32\n"
                        "matcher.metric = neg-sq-euclidean\n"
                        "matcher.epochs = 40\n"
                        "matcher.lr = 0.001\n"
                        "matcher.batch_size = 64\n"
                        "matcher.margin = 10000\n",
                    "acceptance");
  return cfg;
}

Outcome motif_noise() {
  auto run = [](const std::string& name, const std::string& alignment) {
    ExperimentConfig cfg = motif_experiment(name);
    if (!alignment.empty()) set_config_value(cfg, "mixup.alignment", alignment);
    finalize_config(cfg);
    const ExperimentReport report = run_experiment(cfg, &std::cerr);
    return report.summary.front();
  };
  const SummaryRow vanilla = run("vanilla", "");
  const SummaryRow random = run("random", "random");
  const SummaryRow smix = run("s-mixup", "learned");
  const bool a = vanilla.mean_acc >= 0.85;
  const bool b = random.mean_acc <= vanilla.mean_acc - 0.15;
  const bool c = smix.mean_acc >= vanilla.mean_acc - 0.03;
  return verdict_of(a && b && c,
                    fmt("vanilla %.4f +- %.4f (>= 0.85: %s); random-mixup %.4f +- %.4f (>= 15 pts below: %s); "
                        "s-mixup %.4f +- %.4f (within 3 pts: %s); %zu seeds each",
                        vanilla.mean_acc, vanilla.std_acc, a ? "yes" : "no", random.mean_acc, random.std_acc,
                        b ? "yes" : "no", smix.mean_acc, smix.std_acc, c ? "yes" : "no", vanilla.accuracies.size()));
}

// ---------------------------------------------------------------------------

Outcome matcher_progress() {
  MotifConfig mc;
  mc.count_per_class = 100;
  mc.seed = 8;
  const GraphDataset degree_ds =
      featurize_unattributed(strip_features(gen_motif_dataset(mc)), Featurization{FeatureScheme::degree_onehot, 4});

  MatcherConfig cfg;
  cfg.num_layers = 3;
  cfg.hidden = 32;
  cfg.metric = Similarity::neg_sq_euclidean;
  cfg.feature_dim = degree_ds.feature_dim;
  MatcherTrainConfig tc;
  tc.epochs = 20;
  tc.batch_size = 32;
  tc.learning_rate = 1e-3;
  tc.seed = 81;
  const MatcherTrainResult trained = train_matcher(degree_ds, cfg, 80, tc);

  const std::size_t steps = trained.step_losses.size();
  const std::size_t tenth = std::max<std::size_t>(1, steps / 10);
  double first = 0.0, last = 0.0;
  for (std::size_t k = 0; k < tenth; ++k) {
    first += trained.step_losses[k];
    last += trained.step_losses[steps - 1 - k];
  }
  first /= static_cast<double>(tenth);
  last /= static_cast<double>(tenth);

  Rng rng(82);
  long recovered = 0;
  long total = 0;
  for (std::size_t k = 0; k < 60; ++k) {
    const Graph& g = degree_ds.graphs[k * 5];
    const std::vector<int> perm = rng.permutation(static_cast<int>(g.num_nodes()));
    const Matrix m = compute_assignment(g, permute_nodes(g, perm), trained.params);
    for (Index j = 0; j < m.cols(); ++j) {
      Index best = 0;
      m.col(j).maxCoeff(&best);
      if (best == perm[static_cast<std::size_t>(j)]) ++recovered;
      ++total;
    }
  }
  const double rate = static_cast<double>(recovered) / static_cast<double>(total);
  return verdict_of(last < first && rate >= 0.7,
                    fmt("mean triplet loss first 10%% %.4f -> last 10%% %.4f over %zu steps; argmax recovers "
                        "%ld/%ld correspondences (%.1f%%, need >= 70%%)",
                        first, last, steps, recovered, total, 100.0 * rate));
}

// ---------------------------------------------------------------------------

Outcome imdb_binary() {
  const char* dir = std::getenv("SMIXUP_IMDB_DIR");
  if (dir == nullptr || *dir == '\0') return {Verdict::skip, "set SMIXUP_IMDB_DIR to the IMDB-BINARY directory"};
  auto run = [&](const std::string& alignment) {
    ExperimentConfig cfg;
    apply_config_text(cfg, std::string("dataset.source = tudataset\ndataset.name = IMDB-BINARY\n") +
                               "dataset.path = " + dir + "\ndataset.featurize = degree-onehot\n" +
                               "model.backbone = gcn\nrun.repeats = 10\nrun.seed = 9\n");
    if (!alignment.empty()) set_config_value(cfg, "mixup.alignment", alignment);
    finalize_config(cfg);
    return run_experiment(cfg, &std::cerr).summary.front();
  };
  const SummaryRow vanilla = run("");
  const SummaryRow smix = run("learned");
  const bool in_range = vanilla.mean_acc >= 0.68 && vanilla.mean_acc <= 0.77;
  return verdict_of(in_range && smix.mean_acc >= vanilla.mean_acc,
                    fmt("vanilla %.4f +- %.4f (need [0.68, 0.77]); s-mixup %.4f +- %.4f (need >= vanilla)",
                        vanilla.mean_acc, vanilla.std_acc, smix.mean_acc, smix.std_acc));
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace smixup

int main(int argc, char** argv) {
  using namespace smixup;
  CLI::App app{"smixup acceptance suite"};
  int only = 0;
  app.add_option("--only", only, "run a single criterion (1-9)")->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria = {
      {1, "gradient fidelity", gradient_fidelity},
      {2, "normalizer contracts", normalizer_contracts},
      {3, "mixup algebra", mixup_algebra},
      {4, "edit-distance bound", edit_distance_bound},
      {5, "aligned-cost linearity", linearity},
      {6, "normalized GED trend", ged_trend},
      {7, "MOTIF noise demonstration", motif_noise},
      {8, "matcher training progress", matcher_progress},
      {9, "IMDB-BINARY benchmark (slow)", imdb_binary},
  };

  int failures = 0;
  int skips = 0;
  int ran = 0;
  for (const Criterion& c : criteria) {
    if (only != 0 && c.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {Verdict::fail, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const char* tag = outcome.verdict == Verdict::pass ? "PASS" : outcome.verdict == Verdict::fail ? "FAIL" : "SKIP";
    std::printf("%s criterion %d (%s): %s [%.1fs]\n", tag, c.id, c.title, outcome.detail.c_str(), seconds);
    std::fflush(stdout);
    ++ran;
    if (outcome.verdict == Verdict::fail) ++failures;
    if (outcome.verdict == Verdict::skip) ++skips;
  }
  if (failures > 0) return 1;
  if (ran > 0 && skips == ran) return 77;
  return 0;
}
