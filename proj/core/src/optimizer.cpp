#include "smixup/optimizer.hpp"

#include <cmath>

namespace smixup {

void Adam::step(ParamStore& params, const ParamStore& grads) {
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (auto& [name, theta] : params) {
    auto g = grads.find(name);
    if (g == grads.end()) continue;
    auto [mit, m_new] = m_.try_emplace(name, Matrix::Zero(theta.rows(), theta.cols()));
    auto [vit, v_new] = v_.try_emplace(name, Matrix::Zero(theta.rows(), theta.cols()));
    Matrix& m = mit->second;
    Matrix& v = vit->second;
    m = beta1_ * m + (1.0 - beta1_) * g->second;
    v = beta2_ * v + (1.0 - beta2_) * g->second.cwiseAbs2();
    theta.array() -= lr_ * (m.array() / c1) / ((v.array() / c2).sqrt() + eps_);
  }
}

}  // namespace smixup
