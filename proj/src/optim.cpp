#include "irfuse/optim.hpp"

#include <cmath>
#include <stdexcept>

namespace irfuse::num {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double LrSchedule::factor(int step) const {
  if (step < 0) return 0.0;
  if (warmup_steps > 0 && step < warmup_steps) {
    return static_cast<double>(step + 1) / static_cast<double>(warmup_steps);
  }
  if (step >= total_steps) return 0.0;
  const int span = total_steps - warmup_steps;
  if (span <= 0) return 0.0;
  const double progress = static_cast<double>(step - warmup_steps) / static_cast<double>(span);
  return 0.5 * (1.0 + std::cos(kPi * progress));
}

AdamW::AdamW(std::vector<ParamGroup> groups, LrSchedule schedule, double beta1, double beta2,
             double eps, double weight_decay)
    : groups_(std::move(groups)),
      schedule_(schedule),
      beta1_(beta1),
      beta2_(beta2),
      eps_(eps),
      weight_decay_(weight_decay) {
  if (schedule_.total_steps <= 0) throw std::invalid_argument("AdamW: total_steps must be > 0");
  for (const auto& g : groups_) {
    if (g.base_lr < 0.0) {
      throw std::invalid_argument("AdamW: negative learning rate " + std::to_string(g.base_lr));
    }
    for (Param* p : g.params) {
      if (!p->trainable) continue;
      slots_.push_back({p, Tensor::zeros(p->value.shape()), Tensor::zeros(p->value.shape()),
                        g.base_lr});
    }
  }
}

void AdamW::step() {
  const double f = schedule_.factor(step_);
  const int t = step_ + 1;
  const double bc1 = 1.0 - std::pow(beta1_, t);
  const double bc2 = 1.0 - std::pow(beta2_, t);
  for (auto& s : slots_) {
    const double lr = s.base_lr * f;
    double* w = s.param->value.data();
    const double* g = s.param->grad.data();
    double* m = s.m.data();
    double* v = s.v.data();
    const std::size_t n = s.param->value.numel();
    for (std::size_t i = 0; i < n; ++i) {
      m[i] = beta1_ * m[i] + (1.0 - beta1_) * g[i];
      v[i] = beta2_ * v[i] + (1.0 - beta2_) * g[i] * g[i];
      const double mhat = m[i] / bc1;
      const double vhat = v[i] / bc2;
      w[i] -= lr * (mhat / (std::sqrt(vhat) + eps_) + weight_decay_ * w[i]);
    }
  }
  ++step_;
}

void AdamW::zero_grads() {
  for (auto& g : groups_) {
    for (Param* p : g.params) p->zero_grad();
  }
}

double AdamW::effective_lr(std::size_t g) const {
  if (g >= groups_.size()) throw std::out_of_range("AdamW: group index");
  return groups_[g].base_lr * schedule_.factor(step_);
}

}  // namespace irfuse::num
