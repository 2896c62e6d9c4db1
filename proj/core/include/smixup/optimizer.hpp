#pragma once

#include "smixup/checkpoint.hpp"

namespace smixup {

/// Adam with bias correction, applied to every tensor of a ParamStore.
class Adam {
 public:
  explicit Adam(double learning_rate, double beta1 = 0.9, double beta2 = 0.999, double epsilon = 1e-8)
      : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(epsilon) {}

  /// Tensors without an entry in `grads` are skipped, moments included.
  void step(ParamStore& params, const ParamStore& grads);

  long steps() const { return t_; }
  double learning_rate() const { return lr_; }

 private:
  double lr_;
  double beta1_;
  double beta2_;
  double eps_;
  long t_ = 0;
  ParamStore m_;
  ParamStore v_;
};

}  // namespace smixup
