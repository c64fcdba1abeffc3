#include "nuggetbench/tk/optim.hpp"

#include <cmath>

namespace nb::tk {

Adam::Adam(std::vector<Var> params, AdamConfig config)
    : params_(std::move(params)), config_(config) {
  state_.reserve(params_.size());
  for (const auto& p : params_) {
    state_.push_back({Tensor(p->value.shape()), Tensor(p->value.shape())});
  }
}

void Adam::step() {
  ++t_;
  const double bc1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params_.size(); ++i) {
    Node& p = *params_[i];
    Slot& s = state_[i];
    const bool has_grad = p.grad.numel() != 0;
    for (std::size_t j = 0; j < p.value.numel(); ++j) {
      double g = has_grad ? p.grad.data()[j] : 0.0;
      if (!std::isfinite(g)) {
        throw NumericError("non-finite gradient in parameter '" + p.name + "' at index " +
                           std::to_string(j));
      }
      double m = config_.beta1 * s.m.data()[j] + (1.0 - config_.beta1) * g;
      double v = config_.beta2 * s.v.data()[j] + (1.0 - config_.beta2) * g * g;
      s.m.data()[j] = m;
      s.v.data()[j] = v;
      double mhat = m / bc1;
      double vhat = v / bc2;
      p.value.data()[j] -= config_.lr * mhat / (std::sqrt(vhat) + config_.eps);
    }
  }
}

void Adam::zero_grad() {
  for (const auto& p : params_) p->zero_grad();
}

}  // namespace nb::tk
