#include "irfuse/ops.hpp"

#include <cmath>
#include <stdexcept>

namespace irfuse::num {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244;
constexpr double kInvSqrt2Pi = 0.3989422804014326779;

void require_rank2(const Tensor& t, const char* who) {
  if (t.rank() != 2) {
    throw std::invalid_argument(std::string(who) + ": expected rank-2 tensor, got " +
                                t.shape_str());
  }
}

}  // namespace

void init_xavier_uniform(Tensor& w, Rng& rng) {
  const std::size_t fan_in = w.rank() == 2 ? w.rows() : w.numel();
  const double a = std::sqrt(3.0 / static_cast<double>(fan_in));
  for (std::size_t i = 0; i < w.numel(); ++i) w.data()[i] = rng.uniform(-a, a);
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  require_rank2(a, "matmul");
  require_rank2(b, "matmul");
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("matmul: inner extents differ, " + a.shape_str() + " * " +
                                b.shape_str());
  }
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  Tensor c({m, n});
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = c.data() + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = a(i, p);
      const double* brow = b.data() + p * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += aip * brow[j];
    }
  }
  return c;
}

void matmul_backward(const Tensor& a, const Tensor& b, const Tensor& d_out, Tensor* d_a,
                     Tensor* d_b) {
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  if (d_out.rows() != m || d_out.cols() != n) {
    throw std::invalid_argument("matmul_backward: d_out shape " + d_out.shape_str() +
                                " does not match product " + std::to_string(m) + "x" +
                                std::to_string(n));
  }
  if (d_a) {
    // dA = dC * B^T
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t p = 0; p < k; ++p) {
        double acc = 0.0;
        const double* drow = d_out.data() + i * n;
        const double* brow = b.data() + p * n;
        for (std::size_t j = 0; j < n; ++j) acc += drow[j] * brow[j];
        (*d_a)(i, p) += acc;
      }
    }
  }
  if (d_b) {
    // dB = A^T * dC
    for (std::size_t p = 0; p < k; ++p) {
      double* brow = d_b->data() + p * n;
      for (std::size_t i = 0; i < m; ++i) {
        const double aip = a(i, p);
        const double* drow = d_out.data() + i * n;
        for (std::size_t j = 0; j < n; ++j) brow[j] += aip * drow[j];
      }
    }
  }
}

Tensor softmax_rows(const Tensor& x) {
  require_rank2(x, "softmax_rows");
  const std::size_t m = x.rows(), n = x.cols();
  Tensor y({m, n});
  for (std::size_t i = 0; i < m; ++i) {
    const double* xr = x.data() + i * n;
    double* yr = y.data() + i * n;
    double mx = xr[0];
    for (std::size_t j = 1; j < n; ++j) mx = std::max(mx, xr[j]);
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      yr[j] = std::exp(xr[j] - mx);
      sum += yr[j];
    }
    const double inv = 1.0 / sum;
    for (std::size_t j = 0; j < n; ++j) yr[j] *= inv;
  }
  return y;
}

Tensor softmax_rows_backward(const Tensor& y, const Tensor& d_y) {
  const std::size_t m = y.rows(), n = y.cols();
  Tensor dx({m, n});
  for (std::size_t i = 0; i < m; ++i) {
    const double* yr = y.data() + i * n;
    const double* dr = d_y.data() + i * n;
    double dot = 0.0;
    for (std::size_t j = 0; j < n; ++j) dot += yr[j] * dr[j];
    double* xr = dx.data() + i * n;
    for (std::size_t j = 0; j < n; ++j) xr[j] = yr[j] * (dr[j] - dot);
  }
  return dx;
}

Tensor layer_norm(const Tensor& x, const Param& gain, const Param& bias, double eps,
                  LayerNormCache* cache) {
  require_rank2(x, "layer_norm");
  const std::size_t m = x.rows(), d = x.cols();
  if (gain.value.numel() != d || bias.value.numel() != d) {
    throw std::invalid_argument("layer_norm: gain/bias extent does not match feature dim " +
                                std::to_string(d));
  }
  Tensor out({m, d});
  Tensor xhat({m, d});
  std::vector<double> inv_std(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double* xr = x.data() + i * d;
    double mean = 0.0;
    for (std::size_t j = 0; j < d; ++j) mean += xr[j];
    mean /= static_cast<double>(d);
    double var = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double c = xr[j] - mean;
      var += c * c;
    }
    var /= static_cast<double>(d);
    const double is = 1.0 / std::sqrt(var + eps);
    inv_std[i] = is;
    double* hr = xhat.data() + i * d;
    double* orow = out.data() + i * d;
    for (std::size_t j = 0; j < d; ++j) {
      hr[j] = (xr[j] - mean) * is;
      orow[j] = gain.value(j) * hr[j] + bias.value(j);
    }
  }
  if (cache) {
    cache->xhat = std::move(xhat);
    cache->inv_std = std::move(inv_std);
  }
  return out;
}

Tensor layer_norm_backward(const Tensor& d_out, const LayerNormCache& cache, Param& gain,
                           Param& bias) {
  const std::size_t m = d_out.rows(), d = d_out.cols();
  Tensor dx({m, d});
  for (std::size_t i = 0; i < m; ++i) {
    const double* dr = d_out.data() + i * d;
    const double* hr = cache.xhat.data() + i * d;
    double mean_g = 0.0, mean_gh = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double g = gain.value(j) * dr[j];
      mean_g += g;
      mean_gh += g * hr[j];
      gain.grad(j) += dr[j] * hr[j];
      bias.grad(j) += dr[j];
    }
    mean_g /= static_cast<double>(d);
    mean_gh /= static_cast<double>(d);
    double* xr = dx.data() + i * d;
    const double is = cache.inv_std[i];
    for (std::size_t j = 0; j < d; ++j) {
      const double g = gain.value(j) * dr[j];
      xr[j] = (g - mean_g - hr[j] * mean_gh) * is;
    }
  }
  return dx;
}

double gelu(double x) { return 0.5 * x * (1.0 + std::erf(x * kInvSqrt2)); }

double gelu_grad(double x) {
  return 0.5 * (1.0 + std::erf(x * kInvSqrt2)) + x * kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

Ffn Ffn::make(std::size_t d, std::size_t hidden, Rng& rng, bool zero_output) {
  Ffn f;
  f.w1 = Param(Tensor({d, hidden}));
  f.b1 = Param(Tensor({hidden}));
  f.w2 = Param(Tensor({hidden, d}));
  f.b2 = Param(Tensor({d}));
  init_xavier_uniform(f.w1.value, rng);
  if (!zero_output) init_xavier_uniform(f.w2.value, rng);
  return f;
}

Tensor Ffn::forward(const Tensor& x, Cache* cache) const {
  Tensor pre = matmul(x, w1.value);
  const std::size_t m = pre.rows(), h = pre.cols();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < h; ++j) pre(i, j) += b1.value(j);
  Tensor act({m, h});
  for (std::size_t i = 0; i < pre.numel(); ++i) act.data()[i] = gelu(pre.data()[i]);
  Tensor out = matmul(act, w2.value);
  const std::size_t d = out.cols();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < d; ++j) out(i, j) += b2.value(j);
  if (cache) {
    cache->x = x;
    cache->pre = std::move(pre);
    cache->act = std::move(act);
  }
  return out;
}

Tensor Ffn::backward(const Tensor& d_out, const Cache& cache) {
  const std::size_t m = d_out.rows(), d = d_out.cols(), h = cache.act.cols();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < d; ++j) b2.grad(j) += d_out(i, j);
  Tensor d_act({m, h});
  matmul_backward(cache.act, w2.value, d_out, &d_act, &w2.grad);
  Tensor d_pre({m, h});
  for (std::size_t i = 0; i < d_pre.numel(); ++i)
    d_pre.data()[i] = d_act.data()[i] * gelu_grad(cache.pre.data()[i]);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < h; ++j) b1.grad(j) += d_pre(i, j);
  Tensor dx({m, cache.x.cols()});
  matmul_backward(cache.x, w1.value, d_pre, &dx, &w1.grad);
  return dx;
}

NamedParams Ffn::params(const std::string& prefix) {
  return {{prefix + ".w1", &w1}, {prefix + ".b1", &b1}, {prefix + ".w2", &w2},
          {prefix + ".b2", &b2}};
}

LoraLinear LoraLinear::make(std::size_t d_in, std::size_t d_out, std::size_t rank, double scale,
                            Rng& rng, bool zero_base) {
  if (rank > std::min(d_in, d_out)) {
    throw std::invalid_argument("LoraLinear: rank " + std::to_string(rank) +
                                " exceeds min(d_in, d_out) = " +
                                std::to_string(std::min(d_in, d_out)));
  }
  LoraLinear l;
  l.base = Param(Tensor({d_in, d_out}), /*trainable=*/false);
  if (!zero_base) init_xavier_uniform(l.base.value, rng);
  l.a = Param(Tensor({d_in, rank}));
  init_xavier_uniform(l.a.value, rng);
  l.b = Param(Tensor({rank, d_out}));  // zero: adapter starts as a no-op
  l.scale = scale;
  return l;
}

Tensor LoraLinear::forward(const Tensor& x, Cache* cache) const {
  Tensor out = matmul(x, base.value);
  Tensor xa = matmul(x, a.value);
  Tensor adapt = matmul(xa, b.value);
  out.add_scaled(adapt, scale);
  if (cache) {
    cache->x = x;
    cache->xa = std::move(xa);
  }
  return out;
}

Tensor LoraLinear::backward(const Tensor& d_out, const Cache& cache) {
  Tensor dx({cache.x.rows(), cache.x.cols()});
  // Frozen path: dx += d_out * base^T, no gradient into base.
  matmul_backward(cache.x, base.value, d_out, &dx, nullptr);
  // Adapter path, scaled.
  Tensor d_scaled = d_out;
  for (std::size_t i = 0; i < d_scaled.numel(); ++i) d_scaled.data()[i] *= scale;
  Tensor d_xa({cache.xa.rows(), cache.xa.cols()});
  matmul_backward(cache.xa, b.value, d_scaled, &d_xa, &b.grad);
  matmul_backward(cache.x, a.value, d_xa, &dx, &a.grad);
  return dx;
}

NamedParams LoraLinear::params(const std::string& prefix) {
  return {{prefix + ".base", &base}, {prefix + ".lora_a", &a}, {prefix + ".lora_b", &b}};
}

CrossEntropyResult cross_entropy(const Tensor& logits, const std::vector<int>& targets,
                                 const std::vector<std::uint8_t>& answer_mask) {
  require_rank2(logits, "cross_entropy");
  const std::size_t t_len = logits.rows(), vocab = logits.cols();
  if (targets.size() != t_len || answer_mask.size() != t_len) {
    throw std::invalid_argument("cross_entropy: targets/mask length does not match logits rows");
  }
  std::size_t active = 0;
  for (std::size_t t = 0; t < t_len; ++t) {
    if (!answer_mask[t]) continue;
    if (targets[t] < 0 || static_cast<std::size_t>(targets[t]) >= vocab) {
      throw std::invalid_argument("cross_entropy: target id " + std::to_string(targets[t]) +
                                  " out of range for vocab " + std::to_string(vocab));
    }
    ++active;
  }
  if (active == 0) throw std::invalid_argument("cross_entropy: no unmasked positions");

  CrossEntropyResult res;
  res.d_logits = Tensor::zeros(logits.shape());
  const double inv_n = 1.0 / static_cast<double>(active);
  for (std::size_t t = 0; t < t_len; ++t) {
    if (!answer_mask[t]) continue;
    const double* lr = logits.data() + t * vocab;
    double mx = lr[0];
    for (std::size_t j = 1; j < vocab; ++j) mx = std::max(mx, lr[j]);
    double sum = 0.0;
    for (std::size_t j = 0; j < vocab; ++j) sum += std::exp(lr[j] - mx);
    const double lse = std::log(sum) + mx;
    res.loss += (lse - lr[targets[t]]) * inv_n;
    double* dr = res.d_logits.data() + t * vocab;
    for (std::size_t j = 0; j < vocab; ++j) dr[j] = std::exp(lr[j] - lse) * inv_n;
    dr[targets[t]] -= inv_n;
  }
  return res;
}

}  // namespace irfuse::num
