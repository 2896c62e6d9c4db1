#include "smixup/ged.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "smixup/mixup.hpp"
#include "smixup/numerics.hpp"

namespace smixup {

double aligned_ged(const Graph& ga, const Graph& gb) {
  if (ga.num_nodes() != gb.num_nodes()) {
    throw std::invalid_argument("aligned_ged: node counts differ (" + std::to_string(ga.num_nodes()) + " vs " +
                                std::to_string(gb.num_nodes()) + ")");
  }
  if (ga.feature_dim() != gb.feature_dim()) throw std::invalid_argument("aligned_ged: feature widths differ");
  return (ga.adjacency - gb.adjacency).cwiseAbs().sum() + (ga.features - gb.features).squaredNorm();
}

namespace {

class ExactSearch {
 public:
  ExactSearch(const Graph& ga, const Graph& gb) : a_(ga), b_(gb) {
    na_ = static_cast<int>(ga.num_nodes());
    nb_ = static_cast<int>(gb.num_nodes());
    sub_ = Matrix(na_, nb_);
    for (int i = 0; i < na_; ++i) {
      for (int j = 0; j < nb_; ++j) sub_(i, j) = (ga.features.row(i) - gb.features.row(j)).squaredNorm();
    }
    del_.resize(na_);
    for (int i = 0; i < na_; ++i) del_[i] = ga.features.row(i).squaredNorm();
    ins_.resize(nb_);
    for (int j = 0; j < nb_; ++j) ins_[j] = gb.features.row(j).squaredNorm();
    mapping_.assign(na_, -1);
    used_.assign(nb_, false);
  }

  GedResult run() {
    best_ = std::numeric_limits<double>::infinity();
    dfs(0, 0.0);
    return {best_, best_mapping_};
  }

 private:
  // Cost added by fixing node i to target t (-1 = delete), counting the
  // ordered pairs between i and every earlier node plus the self pair.
  double step_cost(int i, int t) const {
    double c = t >= 0 ? sub_(i, t) : del_[i];
    const Matrix& A = a_.adjacency;
    const Matrix& B = b_.adjacency;
    if (t >= 0) {
      c += std::abs(A(i, i) - B(t, t));
    } else {
      c += A(i, i);
    }
    for (int k = 0; k < i; ++k) {
      const int s = mapping_[k];
      if (t >= 0 && s >= 0) {
        c += std::abs(A(i, k) - B(t, s)) + std::abs(A(k, i) - B(s, t));
      } else {
        c += A(i, k) + A(k, i);
      }
    }
    return c;
  }

  // Insertion cost of everything in gb not covered by both endpoints.
  double completion_cost() const {
    double c = 0.0;
    const Matrix& B = b_.adjacency;
    for (int j = 0; j < nb_; ++j) {
      if (!used_[j]) c += ins_[j];
      for (int l = 0; l < nb_; ++l) {
        if (!used_[j] || !used_[l]) c += B(j, l);
      }
    }
    return c;
  }

  void dfs(int i, double cost) {
    if (cost >= best_) return;
    if (i == na_) {
      const double total = cost + completion_cost();
      if (total < best_) {
        best_ = total;
        best_mapping_ = mapping_;
      }
      return;
    }
    for (int t = 0; t < nb_; ++t) {
      if (used_[t]) continue;
      const double c = step_cost(i, t);
      mapping_[i] = t;
      used_[t] = true;
      dfs(i + 1, cost + c);
      used_[t] = false;
    }
    mapping_[i] = -1;
    dfs(i + 1, cost + step_cost(i, -1));
  }

  const Graph& a_;
  const Graph& b_;
  int na_ = 0;
  int nb_ = 0;
  Matrix sub_;
  std::vector<double> del_;
  std::vector<double> ins_;
  std::vector<int> mapping_;
  std::vector<bool> used_;
  double best_ = 0.0;
  std::vector<int> best_mapping_;
};

}  // namespace

GedResult exact_ged(const Graph& ga, const Graph& gb, int node_limit) {
  const Index n = std::max(ga.num_nodes(), gb.num_nodes());
  if (n > node_limit) {
    throw std::invalid_argument("exact_ged: " + std::to_string(n) + " nodes exceeds node_limit " +
                                std::to_string(node_limit));
  }
  if (ga.feature_dim() != gb.feature_dim()) throw std::invalid_argument("exact_ged: feature widths differ");
  return ExactSearch(ga, gb).run();
}

NormalizedGed normalized_ged(const Graph& gmix, const Graph& g1, const Graph& g2, GedMode mode,
                             const Graph* g2_aligned, int node_limit) {
  NormalizedGed out;
  if (mode == GedMode::exact) {
    out.d1 = exact_ged(gmix, g1, node_limit).cost;
    out.d2 = exact_ged(gmix, g2, node_limit).cost;
  } else {
    if (g2_aligned == nullptr) throw std::invalid_argument("normalized_ged: aligned_chain mode needs the aligned G2");
    if (gmix.num_nodes() != g1.num_nodes() || g2_aligned->num_nodes() != g1.num_nodes()) {
      throw std::invalid_argument("normalized_ged: mixed graph, G1 and aligned G2 must share a node count");
    }
    out.d1 = aligned_ged(gmix, g1);
    out.d2 = aligned_ged(gmix, *g2_aligned) + exact_ged(*g2_aligned, g2, node_limit).cost;
  }
  const double total = out.d1 + out.d2;
  if (!(total > 0.0)) throw UndefinedNormalizedGed("normalized_ged: both distances are zero");
  out.epsilon = out.d2 / total;
  return out;
}

double theorem1_bound(const Graph& g1, const Graph& g2, const Graph& g2_aligned, double lambda, GedMode mode,
                      int node_limit) {
  if (g2_aligned.num_nodes() != g1.num_nodes()) {
    throw std::invalid_argument("theorem1_bound: aligned G2 must have G1's node count");
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("theorem1_bound: lambda outside [0,1]");
  const double leg1 =
      mode == GedMode::exact ? exact_ged(g1, g2_aligned, node_limit).cost : aligned_ged(g1, g2_aligned);
  const double leg2 = exact_ged(g2, g2_aligned, node_limit).cost;
  const double denom = leg1 + leg2;
  if (!(denom > 0.0)) throw DegenerateBound("theorem1_bound: G1, G2 and aligned G2 coincide");
  return (1.0 - lambda) * leg2 / denom;
}

TinyPair random_tiny_pair(Rng& rng, int max_nodes, int feature_dim) {
  if (max_nodes < 2) throw std::invalid_argument("random_tiny_pair: max_nodes must be >= 2");
  auto draw = [&]() {
    const int n = 2 + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(max_nodes - 1)));
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (rng.uniform() < 0.5) edges.emplace_back(i, j);
      }
    }
    Matrix x(n, feature_dim);
    for (Index k = 0; k < x.size(); ++k) x.data()[k] = static_cast<double>(rng.uniform_index(3));
    return make_graph(n, edges, std::move(x), one_hot(static_cast<int>(rng.uniform_index(2)), 2));
  };
  TinyPair p;
  p.g1 = draw();
  p.g2 = draw();
  Matrix scores(p.g1.num_nodes(), p.g2.num_nodes());
  for (Index k = 0; k < scores.size(); ++k) scores.data()[k] = 3.0 * rng.normal();
  p.assignment = column_softmax(scores);
  return p;
}

std::vector<GedSweepRow> ged_sweep(int pairs, int max_nodes, const std::vector<double>& lambdas, GedMode mode,
                                   std::uint64_t seed) {
  Rng rng(seed);
  std::vector<GedSweepRow> rows;
  rows.reserve(static_cast<std::size_t>(pairs) * lambdas.size());
  for (int p = 0; p < pairs;) {
    const TinyPair tp = random_tiny_pair(rng, max_nodes);
    const Graph g2a = transform_graph(tp.g2, tp.assignment);
    std::vector<GedSweepRow> block;
    try {
      for (double lambda : lambdas) {
        const Graph mix = s_mixup_pair(tp.g1, tp.g2, tp.assignment, lambda);
        const NormalizedGed ng = normalized_ged(mix, tp.g1, tp.g2, mode, &g2a);
        GedSweepRow row;
        row.pair = p;
        row.lambda = lambda;
        row.epsilon = ng.epsilon;
        row.bound = theorem1_bound(tp.g1, tp.g2, g2a, lambda, mode);
        row.gap = std::abs(ng.epsilon - lambda);
        row.mode = mode;
        block.push_back(row);
      }
    } catch (const std::domain_error&) {
      continue;
    }
    rows.insert(rows.end(), block.begin(), block.end());
    ++p;
  }
  return rows;
}

std::string_view to_string(GedMode m) { return m == GedMode::exact ? "exact" : "aligned-chain"; }

GedMode parse_ged_mode(std::string_view s) {
  if (s == "exact") return GedMode::exact;
  if (s == "aligned-chain" || s == "aligned_chain") return GedMode::aligned_chain;
  throw std::invalid_argument("unknown GED mode '" + std::string(s) + "'");
}

}  // namespace smixup
