#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "irfuse/rng.hpp"
#include "irfuse/tensor.hpp"

namespace irfuse::num {

using NamedParams = std::vector<std::pair<std::string, Param*>>;

// Xavier-uniform init: U(-a, a) with a = sqrt(3 / fan_in), fan_in = rows
// for rank-2 weights. Gives unit-variance activations for unit inputs.
void init_xavier_uniform(Tensor& w, Rng& rng);

// C = A * B for rank-2 tensors. Throws on inner-extent mismatch.
Tensor matmul(const Tensor& a, const Tensor& b);

// Accumulates dA += dC * B^T and dB += A^T * dC. Either output may be null.
void matmul_backward(const Tensor& a, const Tensor& b, const Tensor& d_out, Tensor* d_a,
                     Tensor* d_b);

// Row-wise softmax with per-row max subtraction.
Tensor softmax_rows(const Tensor& x);

// Given y = softmax_rows(x) and dL/dy, returns dL/dx.
Tensor softmax_rows_backward(const Tensor& y, const Tensor& d_y);

struct LayerNormCache {
  Tensor xhat;                  // normalized rows before affine
  std::vector<double> inv_std;  // per-row 1/sqrt(var + eps)
};

// Per-row zero-mean/unit-variance normalization followed by gain/bias.
Tensor layer_norm(const Tensor& x, const Param& gain, const Param& bias, double eps,
                  LayerNormCache* cache = nullptr);

// Returns dL/dx; accumulates into gain.grad and bias.grad.
Tensor layer_norm_backward(const Tensor& d_out, const LayerNormCache& cache, Param& gain,
                           Param& bias);

double gelu(double x);
double gelu_grad(double x);

// Two-layer MLP d -> hidden -> d with GELU, biases on both layers.
struct Ffn {
  Param w1, b1, w2, b2;

  // zero_output zeroes the second layer (weights and bias) so the module
  // starts as the constant-zero map.
  static Ffn make(std::size_t d, std::size_t hidden, Rng& rng, bool zero_output);

  struct Cache {
    Tensor x;    // input
    Tensor pre;  // x*w1 + b1
    Tensor act;  // gelu(pre)
  };

  Tensor forward(const Tensor& x, Cache* cache = nullptr) const;
  // Returns dL/dx; accumulates parameter gradients.
  Tensor backward(const Tensor& d_out, const Cache& cache);

  NamedParams params(const std::string& prefix);
};

// x*W_frozen + scale * (x*A)*B. Only A and B are trainable.
struct LoraLinear {
  Param base;  // frozen
  Param a;     // d_in x rank
  Param b;     // rank x d_out, zero-initialized
  double scale = 1.0;

  static LoraLinear make(std::size_t d_in, std::size_t d_out, std::size_t rank, double scale,
                         Rng& rng, bool zero_base = false);

  struct Cache {
    Tensor x;
    Tensor xa;  // x*A
  };

  Tensor forward(const Tensor& x, Cache* cache = nullptr) const;
  Tensor backward(const Tensor& d_out, const Cache& cache);

  NamedParams params(const std::string& prefix);
};

struct CrossEntropyResult {
  double loss = 0.0;
  Tensor d_logits;
};

// Mean negative log-likelihood over unmasked positions of logits [T x V].
// Log-sum-exp is stabilized with a per-row max. Throws on out-of-range ids
// and when no position is unmasked.
CrossEntropyResult cross_entropy(const Tensor& logits, const std::vector<int>& targets,
                                 const std::vector<std::uint8_t>& answer_mask);

}  // namespace irfuse::num
