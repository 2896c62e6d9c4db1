#include "smixup/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "smixup/numerics.hpp"

namespace smixup::ad {

namespace {

std::string shape(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_same_tape(Var a, Var b, const char* op) {
  if (!a.valid() || !b.valid() || a.tape() != b.tape()) {
    throw std::invalid_argument(std::string(op) + ": operands must live on the same tape");
  }
}

void require_same_shape(Var a, Var b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument(std::string(op) + ": shape mismatch " + shape(a.value()) + " vs " +
                                shape(b.value()));
  }
}

}  // namespace

const Matrix& Var::value() const {
  if (tape_ == nullptr) throw std::logic_error("Var::value on an unbound variable");
  return tape_->value(*this);
}

Var Tape::param(const std::string& name, const Matrix& value) {
  if (auto it = params_.find(name); it != params_.end()) return Var(this, it->second);
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back(Node{value, {}, nullptr, nullptr});
  params_.emplace(name, id);
  return Var(this, id);
}

Var Tape::constant(Matrix value) {
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back(Node{std::move(value), {}, nullptr, nullptr});
  return Var(this, id);
}

Var Tape::record(std::vector<Var> inputs, ForwardFn forward, BackwardFn backward) {
  std::vector<int> ids;
  std::vector<const Matrix*> in;
  ids.reserve(inputs.size());
  in.reserve(inputs.size());
  for (const Var& v : inputs) {
    if (v.tape() != this) throw std::invalid_argument("Tape::record: input from another tape");
    ids.push_back(v.id());
    in.push_back(&nodes_[static_cast<std::size_t>(v.id())].value);
  }
  Matrix out = forward(in);
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back(Node{std::move(out), std::move(ids), std::move(forward), std::move(backward)});
  return Var(this, id);
}

std::map<std::string, Matrix> Tape::gradients(Var root) {
  if (root.tape() != this) throw std::invalid_argument("gradients: root from another tape");
  const Matrix& root_value = value(root);
  if (root_value.rows() != 1 || root_value.cols() != 1) {
    throw std::invalid_argument("gradients: root must be a scalar, got " + shape(root_value));
  }

  const auto n = static_cast<std::size_t>(root.id()) + 1;
  std::vector<Matrix> grads(n);
  std::vector<char> touched(n, 0);
  grads[n - 1] = Matrix::Ones(1, 1);
  touched[n - 1] = 1;

  std::vector<const Matrix*> in;
  std::vector<Matrix*> din;
  for (std::size_t k = n; k-- > 0;) {
    Node& node = nodes_[k];
    if (!touched[k] || !node.backward) continue;
    in.clear();
    din.clear();
    for (int i : node.inputs) {
      const auto u = static_cast<std::size_t>(i);
      if (!touched[u]) {
        grads[u] = Matrix::Zero(nodes_[u].value.rows(), nodes_[u].value.cols());
        touched[u] = 1;
      }
      in.push_back(&nodes_[u].value);
      din.push_back(&grads[u]);
    }
    node.backward(node.value, grads[k], in, din);
  }

  std::map<std::string, Matrix> out;
  for (const auto& [name, id] : params_) {
    const auto u = static_cast<std::size_t>(id);
    if (u < n && touched[u]) {
      out.emplace(name, std::move(grads[u]));
    } else {
      out.emplace(name, Matrix::Zero(nodes_[u].value.rows(), nodes_[u].value.cols()));
    }
  }
  return out;
}

void Tape::replay() {
  std::vector<const Matrix*> in;
  for (Node& node : nodes_) {
    if (!node.forward) continue;
    in.clear();
    for (int i : node.inputs) in.push_back(&nodes_[static_cast<std::size_t>(i)].value);
    node.value = node.forward(in);
  }
}

void Tape::set_param_value(const std::string& name, const Matrix& value) {
  Matrix& slot = param_value(name);
  if (slot.rows() != value.rows() || slot.cols() != value.cols()) {
    throw std::invalid_argument("set_param_value: shape mismatch for " + name);
  }
  slot = value;
}

Matrix& Tape::param_value(const std::string& name) {
  auto it = params_.find(name);
  if (it == params_.end()) throw std::invalid_argument("unknown parameter " + name);
  return nodes_[static_cast<std::size_t>(it->second)].value;
}

std::vector<std::string> Tape::param_names() const {
  std::vector<std::string> names;
  names.reserve(params_.size());
  for (const auto& [name, id] : params_) names.push_back(name);
  return names;
}

double finite_diff_check(Tape& tape, Var root, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("finite_diff_check: eps must be positive");
  const auto analytic = tape.gradients(root);
  double worst = 0.0;
  for (const auto& [name, grad] : analytic) {
    Matrix& theta = tape.param_value(name);
    for (Index i = 0; i < theta.rows(); ++i) {
      for (Index j = 0; j < theta.cols(); ++j) {
        const double saved = theta(i, j);
        theta(i, j) = saved + eps;
        tape.replay();
        const double f_plus = tape.value(root)(0, 0);
        theta(i, j) = saved - eps;
        tape.replay();
        const double f_minus = tape.value(root)(0, 0);
        theta(i, j) = saved;
        const double numeric = (f_plus - f_minus) / (2.0 * eps);
        const double rel = std::abs(numeric - grad(i, j)) / std::max(1.0, std::abs(grad(i, j)));
        worst = std::max(worst, rel);
      }
    }
  }
  tape.replay();
  return worst;
}

Var matmul(Var a, Var b) {
  require_same_tape(a, b, "matmul");
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("matmul: inner dimension mismatch " + shape(a.value()) + " * " +
                                shape(b.value()));
  }
  return a.tape()->record(
      {a, b}, [](Inputs in) -> Matrix { return (*in[0]) * (*in[1]); },
      [](const Matrix&, const Matrix& dout, Inputs in, std::span<Matrix* const> g) {
        g[0]->noalias() += dout * in[1]->transpose();
        g[1]->noalias() += in[0]->transpose() * dout;
      });
}

Var add(Var a, Var b) {
  require_same_tape(a, b, "add");
  require_same_shape(a, b, "add");
  return a.tape()->record(
      {a, b}, [](Inputs in) -> Matrix { return *in[0] + *in[1]; },
      [](const Matrix&, const Matrix& dout, Inputs, std::span<Matrix* const> g) {
        *g[0] += dout;
        *g[1] += dout;
      });
}

Var sub(Var a, Var b) {
  require_same_tape(a, b, "sub");
  require_same_shape(a, b, "sub");
  return a.tape()->record(
      {a, b}, [](Inputs in) -> Matrix { return *in[0] - *in[1]; },
      [](const Matrix&, const Matrix& dout, Inputs, std::span<Matrix* const> g) {
        *g[0] += dout;
        *g[1] -= dout;
      });
}

Var hadamard(Var a, Var b) {
  require_same_tape(a, b, "hadamard");
  require_same_shape(a, b, "hadamard");
  return a.tape()->record(
      {a, b}, [](Inputs in) -> Matrix { return in[0]->cwiseProduct(*in[1]); },
      [](const Matrix&, const Matrix& dout, Inputs in, std::span<Matrix* const> g) {
        *g[0] += dout.cwiseProduct(*in[1]);
        *g[1] += dout.cwiseProduct(*in[0]);
      });
}

Var add_row(Var a, Var row) {
  require_same_tape(a, row, "add_row");
  if (row.rows() != 1 || row.cols() != a.cols()) {
    throw std::invalid_argument("add_row: expected 1x" + std::to_string(a.cols()) + " row, got " +
                                shape(row.value()));
  }
  return a.tape()->record(
      {a, row},
      [](Inputs in) -> Matrix {
        Matrix out = *in[0];
        out.rowwise() += in[1]->row(0);
        return out;
      },
      [](const Matrix&, const Matrix& dout, Inputs, std::span<Matrix* const> g) {
        *g[0] += dout;
        *g[1] += dout.colwise().sum();
      });
}

Var scale(Var a, double s) {
  return a.tape()->record(
      {a}, [s](Inputs in) -> Matrix { return s * (*in[0]); },
      [s](const Matrix&, const Matrix& dout, Inputs, std::span<Matrix* const> g) { *g[0] += s * dout; });
}

Var relu(Var a) {
  return a.tape()->record(
      {a}, [](Inputs in) -> Matrix { return in[0]->cwiseMax(0.0); },
      [](const Matrix&, const Matrix& dout, Inputs in, std::span<Matrix* const> g) {
        // Derivative at exactly zero is taken as zero.
        *g[0] += (in[0]->array() > 0.0).select(dout, 0.0).matrix();
      });
}

Var hinge(Var a) { return relu(a); }

Var log_clamped(Var a, double floor) {
  return a.tape()->record(
      {a}, [floor](Inputs in) -> Matrix { return in[0]->cwiseMax(floor).array().log().matrix(); },
      [floor](const Matrix&, const Matrix& dout, Inputs in, std::span<Matrix* const> g) {
        const auto& x = in[0]->array();
        *g[0] += (x > floor).select(dout.array() / x, 0.0).matrix();
      });
}

Var transpose(Var a) {
  return a.tape()->record(
      {a}, [](Inputs in) -> Matrix { return in[0]->transpose(); },
      [](const Matrix&, const Matrix& dout, Inputs, std::span<Matrix* const> g) {
        *g[0] += dout.transpose();
      });
}

Var hstack(const std::vector<Var>& parts) {
  if (parts.empty()) throw std::invalid_argument("hstack: no inputs");
  for (const Var& p : parts) {
    require_same_tape(parts.front(), p, "hstack");
    if (p.rows() != parts.front().rows()) throw std::invalid_argument("hstack: row count mismatch");
  }
  return parts.front().tape()->record(
      parts,
      [](Inputs in) -> Matrix {
        Index cols = 0;
        for (const Matrix* m : in) cols += m->cols();
        Matrix out(in[0]->rows(), cols);
        Index c = 0;
        for (const Matrix* m : in) {
          out.middleCols(c, m->cols()) = *m;
          c += m->cols();
        }
        return out;
      },
      [](const Matrix&, const Matrix& dout, Inputs in, std::span<Matrix* const> g) {
        Index c = 0;
        for (std::size_t k = 0; k < in.size(); ++k) {
          *g[k] += dout.middleCols(c, in[k]->cols());
          c += in[k]->cols();
        }
      });
}

Var sum_rows(Var a) {
  return a.tape()->record(
      {a}, [](Inputs in) -> Matrix { return in[0]->colwise().sum(); },
      [](const Matrix&, const Matrix& dout, Inputs, std::span<Matrix* const> g) {
        g[0]->rowwise() += dout.row(0);
      });
}

Var mean_rows(Var a) {
  if (a.rows() == 0) throw std::invalid_argument("mean_rows: empty matrix");
  return a.tape()->record(
      {a}, [](Inputs in) -> Matrix { return in[0]->colwise().mean(); },
      [](const Matrix&, const Matrix& dout, Inputs in, std::span<Matrix* const> g) {
        const double inv = 1.0 / static_cast<double>(in[0]->rows());
        g[0]->rowwise() += inv * dout.row(0);
      });
}

Var sum_all(Var a) {
  return a.tape()->record(
      {a}, [](Inputs in) -> Matrix { return Matrix::Constant(1, 1, in[0]->sum()); },
      [](const Matrix&, const Matrix& dout, Inputs, std::span<Matrix* const> g) {
        g[0]->array() += dout(0, 0);
      });
}

Var column_softmax(Var a) {
  return a.tape()->record(
      {a}, [](Inputs in) -> Matrix { return smixup::column_softmax(*in[0]); },
      [](const Matrix& out, const Matrix& dout, Inputs, std::span<Matrix* const> g) {
        for (Index j = 0; j < out.cols(); ++j) {
          const double dot = out.col(j).dot(dout.col(j));
          g[0]->col(j).array() += out.col(j).array() * (dout.col(j).array() - dot);
        }
      });
}

Var row_softmax(Var a) {
  return a.tape()->record(
      {a}, [](Inputs in) -> Matrix { return smixup::row_softmax(*in[0]); },
      [](const Matrix& out, const Matrix& dout, Inputs, std::span<Matrix* const> g) {
        for (Index i = 0; i < out.rows(); ++i) {
          const double dot = out.row(i).dot(dout.row(i));
          g[0]->row(i).array() += out.row(i).array() * (dout.row(i).array() - dot);
        }
      });
}

namespace {

// Rows scaled to unit norm; zero rows stay zero.
Matrix unit_rows(const Matrix& m, Vector& norms) {
  norms = m.rowwise().norm();
  Matrix out = m;
  for (Index i = 0; i < m.rows(); ++i) {
    if (norms(i) > 0.0) out.row(i) /= norms(i);
  }
  return out;
}

// Backpropagates through x -> x / |x| row by row.
void unit_rows_backward(const Matrix& unit, const Vector& norms, const Matrix& dunit, Matrix& dx) {
  for (Index i = 0; i < unit.rows(); ++i) {
    if (norms(i) <= 0.0) continue;
    const double proj = unit.row(i).dot(dunit.row(i));
    dx.row(i) += (dunit.row(i) - proj * unit.row(i)) / norms(i);
  }
}

}  // namespace

Var pairwise_cosine(Var a, Var b) {
  require_same_tape(a, b, "pairwise_cosine");
  if (a.cols() != b.cols()) throw std::invalid_argument("pairwise_cosine: width mismatch");
  return a.tape()->record(
      {a, b},
      [](Inputs in) -> Matrix { return pairwise_similarity(*in[0], *in[1], Similarity::cosine); },
      [](const Matrix&, const Matrix& dout, Inputs in, std::span<Matrix* const> g) {
        Vector na;
        Vector nb;
        const Matrix ua = unit_rows(*in[0], na);
        const Matrix ub = unit_rows(*in[1], nb);
        const Matrix dua = dout * ub;
        const Matrix dub = dout.transpose() * ua;
        unit_rows_backward(ua, na, dua, *g[0]);
        unit_rows_backward(ub, nb, dub, *g[1]);
      });
}

Var pairwise_neg_sq_euclidean(Var a, Var b) {
  require_same_tape(a, b, "pairwise_neg_sq_euclidean");
  if (a.cols() != b.cols()) throw std::invalid_argument("pairwise_neg_sq_euclidean: width mismatch");
  return a.tape()->record(
      {a, b},
      [](Inputs in) -> Matrix {
        return pairwise_similarity(*in[0], *in[1], Similarity::neg_sq_euclidean);
      },
      [](const Matrix&, const Matrix& dout, Inputs in, std::span<Matrix* const> g) {
        // s_ij = -|a_i|^2 - |b_j|^2 + 2 a_i.b_j
        const Matrix& A = *in[0];
        const Matrix& B = *in[1];
        const Vector row_sums = dout.rowwise().sum();
        const Vector col_sums = dout.colwise().sum().transpose();
        g[0]->noalias() += 2.0 * dout * B;
        *g[0] -= 2.0 * (A.array().colwise() * row_sums.array()).matrix();
        g[1]->noalias() += 2.0 * dout.transpose() * A;
        *g[1] -= 2.0 * (B.array().colwise() * col_sums.array()).matrix();
      });
}

}  // namespace smixup::ad
