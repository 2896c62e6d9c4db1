#pragma once

#include <Eigen/Dense>

namespace smixup {

/// Dense row-major double matrix. Every paper-level matrix (adjacency,
/// features, embeddings, assignments) is carried by this type.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

inline bool all_finite(const Matrix& m) { return m.allFinite(); }

}  // namespace smixup
