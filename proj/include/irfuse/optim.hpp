#pragma once

#include <cstddef>
#include <vector>

#include "irfuse/tensor.hpp"

namespace irfuse::num {

// Linear warm-up followed by cosine annealing to zero.
// factor(0) = 1/warmup_steps (first step already trains); factor(total_steps) = 0.
struct LrSchedule {
  int warmup_steps = 0;
  int total_steps = 1;

  double factor(int step) const;
};

struct ParamGroup {
  std::vector<Param*> params;
  double base_lr = 1e-4;
};

// AdamW with decoupled weight decay (zero by default). Non-trainable params
// are skipped entirely: no state, no update.
class AdamW {
public:
  AdamW(std::vector<ParamGroup> groups, LrSchedule schedule, double beta1 = 0.9,
        double beta2 = 0.999, double eps = 1e-8, double weight_decay = 0.0);

  void step();
  void zero_grads();

  int step_count() const { return step_; }
  // Effective lr of group g at the current step counter.
  double effective_lr(std::size_t g) const;

private:
  struct Slot {
    Param* param;
    Tensor m;
    Tensor v;
    double base_lr;
  };

  std::vector<ParamGroup> groups_;
  std::vector<Slot> slots_;
  LrSchedule schedule_;
  double beta1_, beta2_, eps_, weight_decay_;
  int step_ = 0;
};

}  // namespace irfuse::num
