#include "irfuse/gradcheck.hpp"

#include <cmath>

namespace irfuse::num {

bool GradCheckReport::all_pass() const {
  for (const auto& e : entries) {
    if (!e.pass) return false;
  }
  return true;
}

const GradCheckEntry* GradCheckReport::worst() const {
  const GradCheckEntry* w = nullptr;
  for (const auto& e : entries) {
    if (!w || e.max_rel_err > w->max_rel_err) w = &e;
  }
  return w;
}

double rel_err(double analytic, double numeric, double floor) {
  const double denom = std::max({std::fabs(analytic), std::fabs(numeric), floor});
  return std::fabs(analytic - numeric) / denom;
}

GradCheckReport check_gradients(const NamedParams& params, const std::function<double()>& loss_fn,
                                const std::function<void()>& grad_fn, double h,
                                double threshold) {
  GradCheckReport report;
  report.threshold = threshold;

  grad_fn();
  std::vector<Tensor> analytic;
  analytic.reserve(params.size());
  for (const auto& [name, p] : params) analytic.push_back(p->grad);

  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    const auto& [name, p] = params[pi];
    if (!p->trainable) continue;
    GradCheckEntry entry;
    entry.name = name;
    for (std::size_t i = 0; i < p->value.numel(); ++i) {
      double& w = p->value.data()[i];
      const double saved = w;
      w = saved + h;
      const double lp = loss_fn();
      w = saved - h;
      const double lm = loss_fn();
      w = saved;
      const double numeric = (lp - lm) / (2.0 * h);
      const double a = analytic[pi].data()[i];
      const double re = rel_err(a, numeric);
      if (re > entry.max_rel_err) {
        entry.max_rel_err = re;
        entry.max_abs_err = std::fabs(a - numeric);
        entry.worst_index = i;
      }
    }
    entry.pass = entry.max_rel_err < threshold;
    report.entries.push_back(std::move(entry));
  }
  return report;
}

}  // namespace irfuse::num
