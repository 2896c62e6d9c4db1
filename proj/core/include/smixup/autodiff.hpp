#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "smixup/matrix.hpp"

namespace smixup::ad {

class Tape;

/// Handle to a node on a Tape. Cheap to copy; only valid while the tape lives.
class Var {
 public:
  Var() = default;

  const Matrix& value() const;
  Index rows() const { return value().rows(); }
  Index cols() const { return value().cols(); }
  Tape* tape() const { return tape_; }
  int id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }

 private:
  friend class Tape;
  Var(Tape* tape, int id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  int id_ = -1;
};

using Inputs = std::span<const Matrix* const>;
using ForwardFn = std::function<Matrix(Inputs in)>;
/// Accumulates into `grads` (one per input, pre-sized and zeroed) the
/// contribution of `dout`, the gradient of the root w.r.t. this node.
using BackwardFn =
    std::function<void(const Matrix& out, const Matrix& dout, Inputs in, std::span<Matrix* const> grads)>;

/// Recorded directed acyclic graph of primitive operations, from named
/// parameters and constants to (usually) a scalar loss. Nodes are appended in
/// topological order, so replaying the record front to back recomputes every
/// value and walking it back to front is reverse accumulation.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  /// Named learnable leaf. Registering the same name twice returns the
  /// existing leaf so shared weights accumulate into one gradient.
  Var param(const std::string& name, const Matrix& value);
  Var constant(Matrix value);

  Var record(std::vector<Var> inputs, ForwardFn forward, BackwardFn backward);

  const Matrix& value(Var v) const { return nodes_.at(static_cast<std::size_t>(v.id())).value; }

  /// Reverse accumulation from a 1x1 root. Every registered parameter gets an
  /// entry of its own shape; unreachable parameters get zeros.
  std::map<std::string, Matrix> gradients(Var root);

  /// Recompute all non-leaf values from the current leaf values.
  void replay();

  void set_param_value(const std::string& name, const Matrix& value);
  Matrix& param_value(const std::string& name);
  std::vector<std::string> param_names() const;

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Matrix value;
    std::vector<int> inputs;
    ForwardFn forward;
    BackwardFn backward;
  };

  std::vector<Node> nodes_;
  std::map<std::string, int> params_;
};

/// Central-difference validation of Tape::gradients. Returns the maximum over
/// all parameter coordinates of |numeric - analytic| / max(1, |analytic|).
double finite_diff_check(Tape& tape, Var root, double eps);

// Primitive operations. Shapes are checked eagerly and reported with
// std::invalid_argument.
Var matmul(Var a, Var b);
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var hadamard(Var a, Var b);
/// a (n x q) plus a 1 x q row broadcast to every row.
Var add_row(Var a, Var row);
Var scale(Var a, double s);
Var relu(Var a);
/// Entrywise max(0, x); identical to relu, named for loss terms.
Var hinge(Var a);
/// Entrywise log(max(x, floor)); gradient is zero where the clamp is active.
Var log_clamped(Var a, double floor = 1e-12);
Var transpose(Var a);
/// Concatenates along columns; all inputs must share the row count.
Var hstack(const std::vector<Var>& parts);
/// Column-wise sums / means, producing a 1 x cols row.
Var sum_rows(Var a);
Var mean_rows(Var a);
/// Sum of all entries as a 1x1 matrix.
Var sum_all(Var a);
Var column_softmax(Var a);
Var row_softmax(Var a);
/// Pairwise similarity between the rows of a (n1 x h) and b (n2 x h).
Var pairwise_cosine(Var a, Var b);
Var pairwise_neg_sq_euclidean(Var a, Var b);

}  // namespace smixup::ad
