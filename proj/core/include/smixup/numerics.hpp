#pragma once

#include <string>
#include <string_view>

#include "smixup/matrix.hpp"
#include "smixup/rng.hpp"

namespace smixup {

enum class Similarity { cosine, neg_sq_euclidean };
enum class Normalizer { softmax, sinkhorn };
/// half folds lambda' into [0.5, 1] via max(lambda', 1 - lambda'); full keeps it.
enum class RangeMode { half, full };

struct MixRatioSpec {
  double alpha = 1.0;
  RangeMode range = RangeMode::half;
};

/// Each column becomes exp(column - column max) normalised to sum 1.
Matrix column_softmax(const Matrix& scores);
Matrix row_softmax(const Matrix& scores);

struct SinkhornResult {
  Matrix matrix;
  int iterations = 0;
  /// Largest |column sum - 1| or |row sum - cols/rows| at exit.
  double deviation = 0.0;
};

/// Exponentiates the scores, then alternates row and column scaling until
/// columns sum to 1 and rows sum to cols/rows (within tol) or max_iters
/// passes have run. The column pass always runs last.
SinkhornResult sinkhorn(const Matrix& scores, int max_iters = 50, double tol = 1e-6);
Matrix sinkhorn_normalize(const Matrix& scores, int max_iters = 50, double tol = 1e-6);

/// n1 x n2 similarities between rows of h1 and h2. Cosine similarity of a
/// zero row is 0.
Matrix pairwise_similarity(const Matrix& h1, const Matrix& h2, Similarity metric);

double fold_mix_ratio(double lambda_prime, RangeMode range);
double sample_mix_ratio(const MixRatioSpec& spec, Rng& rng);

std::string_view to_string(Similarity s);
std::string_view to_string(Normalizer n);
std::string_view to_string(RangeMode r);
Similarity parse_similarity(std::string_view s);
Normalizer parse_normalizer(std::string_view s);
RangeMode parse_range_mode(std::string_view s);

}  // namespace smixup
