#pragma once

#include <functional>
#include <string>
#include <vector>

#include "irfuse/ops.hpp"

namespace irfuse::num {

struct GradCheckEntry {
  std::string name;
  double max_rel_err = 0.0;
  double max_abs_err = 0.0;
  std::size_t worst_index = 0;
  bool pass = true;
};

struct GradCheckReport {
  std::vector<GradCheckEntry> entries;
  double threshold = 1e-4;

  bool all_pass() const;
  const GradCheckEntry* worst() const;
};

// |a - n| / max(|a|, |n|, floor). The floor keeps structurally tiny
// gradients from amplifying finite-difference roundoff into failures.
double rel_err(double analytic, double numeric, double floor = 1e-3);

// Central-difference check of every trainable param against the analytic
// gradients that grad_fn leaves in param.grad. loss_fn must be a pure
// function of the current parameter values; grad_fn must zero and then
// fill the gradients for the same loss.
GradCheckReport check_gradients(const NamedParams& params, const std::function<double()>& loss_fn,
                                const std::function<void()>& grad_fn, double h = 1e-5,
                                double threshold = 1e-4);

}  // namespace irfuse::num
