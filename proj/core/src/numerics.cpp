#include "smixup/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace smixup {

Matrix column_softmax(const Matrix& scores) {
  Matrix out(scores.rows(), scores.cols());
  for (Index j = 0; j < scores.cols(); ++j) {
    const double m = scores.col(j).maxCoeff();
    double total = 0.0;
    for (Index i = 0; i < scores.rows(); ++i) {
      out(i, j) = std::exp(scores(i, j) - m);
      total += out(i, j);
    }
    out.col(j) /= total;
  }
  return out;
}

Matrix row_softmax(const Matrix& scores) {
  Matrix out(scores.rows(), scores.cols());
  for (Index i = 0; i < scores.rows(); ++i) {
    const double m = scores.row(i).maxCoeff();
    double total = 0.0;
    for (Index j = 0; j < scores.cols(); ++j) {
      out(i, j) = std::exp(scores(i, j) - m);
      total += out(i, j);
    }
    out.row(i) /= total;
  }
  return out;
}

namespace {

double log_sum_exp(const double* v, Index n, Index stride) {
  double m = -std::numeric_limits<double>::infinity();
  for (Index k = 0; k < n; ++k) m = std::max(m, v[k * stride]);
  double s = 0.0;
  for (Index k = 0; k < n; ++k) s += std::exp(v[k * stride] - m);
  return m + std::log(s);
}

}  // namespace

SinkhornResult sinkhorn(const Matrix& scores, int max_iters, double tol) {
  if (!scores.allFinite()) throw std::invalid_argument("sinkhorn: non-finite scores");
  if (scores.size() == 0) throw std::invalid_argument("sinkhorn: empty matrix");
  const Index rows = scores.rows();
  const Index cols = scores.cols();
  const double row_target = static_cast<double>(cols) / static_cast<double>(rows);
  const double log_row_target = std::log(row_target);

  // Scaling runs on log K so that widely spread scores cannot underflow.
  Matrix log_k = scores;
  SinkhornResult result;
  for (int it = 1; it <= std::max(1, max_iters); ++it) {
    for (Index i = 0; i < rows; ++i) {
      log_k.row(i).array() += log_row_target - log_sum_exp(log_k.data() + i * cols, cols, 1);
    }
    for (Index j = 0; j < cols; ++j) log_k.col(j).array() -= log_sum_exp(log_k.data() + j, rows, cols);

    result.matrix = log_k.array().exp().matrix();
    double dev = 0.0;
    for (Index j = 0; j < cols; ++j) dev = std::max(dev, std::abs(result.matrix.col(j).sum() - 1.0));
    for (Index i = 0; i < rows; ++i) dev = std::max(dev, std::abs(result.matrix.row(i).sum() - row_target));
    result.iterations = it;
    result.deviation = dev;
    if (dev < tol) break;
  }
  return result;
}

Matrix sinkhorn_normalize(const Matrix& scores, int max_iters, double tol) {
  return sinkhorn(scores, max_iters, tol).matrix;
}

Matrix pairwise_similarity(const Matrix& h1, const Matrix& h2, Similarity metric) {
  if (h1.cols() != h2.cols()) {
    throw std::invalid_argument("pairwise_similarity: width mismatch (" + std::to_string(h1.cols()) +
                                " vs " + std::to_string(h2.cols()) + ")");
  }
  switch (metric) {
    case Similarity::cosine: {
      Vector n1 = h1.rowwise().norm();
      Vector n2 = h2.rowwise().norm();
      Matrix s = h1 * h2.transpose();
      for (Index i = 0; i < s.rows(); ++i) {
        for (Index j = 0; j < s.cols(); ++j) {
          const double denom = n1(i) * n2(j);
          s(i, j) = denom > 0.0 ? s(i, j) / denom : 0.0;
        }
      }
      return s;
    }
    case Similarity::neg_sq_euclidean: {
      Matrix s(h1.rows(), h2.rows());
      for (Index i = 0; i < h1.rows(); ++i) {
        for (Index j = 0; j < h2.rows(); ++j) s(i, j) = -(h1.row(i) - h2.row(j)).squaredNorm();
      }
      return s;
    }
  }
  throw std::invalid_argument("pairwise_similarity: unknown metric");
}

double fold_mix_ratio(double lambda_prime, RangeMode range) {
  return range == RangeMode::half ? std::max(lambda_prime, 1.0 - lambda_prime) : lambda_prime;
}

double sample_mix_ratio(const MixRatioSpec& spec, Rng& rng) {
  if (!(spec.alpha > 0.0)) throw std::invalid_argument("sample_mix_ratio: alpha must be positive");
  return fold_mix_ratio(rng.beta(spec.alpha, spec.alpha), spec.range);
}

std::string_view to_string(Similarity s) {
  return s == Similarity::cosine ? "cosine" : "neg-sq-euclidean";
}
std::string_view to_string(Normalizer n) { return n == Normalizer::softmax ? "softmax" : "sinkhorn"; }
std::string_view to_string(RangeMode r) { return r == RangeMode::half ? "half" : "full"; }

Similarity parse_similarity(std::string_view s) {
  if (s == "cosine") return Similarity::cosine;
  if (s == "neg-sq-euclidean" || s == "neg_sq_euclidean" || s == "euclidean") return Similarity::neg_sq_euclidean;
  throw std::invalid_argument("unknown similarity metric '" + std::string(s) + "'");
}

Normalizer parse_normalizer(std::string_view s) {
  if (s == "softmax") return Normalizer::softmax;
  if (s == "sinkhorn") return Normalizer::sinkhorn;
  throw std::invalid_argument("unknown normalizer '" + std::string(s) + "'");
}

RangeMode parse_range_mode(std::string_view s) {
  if (s == "half") return RangeMode::half;
  if (s == "full") return RangeMode::full;
  throw std::invalid_argument("unknown lambda range mode '" + std::string(s) + "'");
}

}  // namespace smixup
