#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace irfuse::num {

// Dense row-major tensor of rank 1..3, double precision throughout.
class Tensor {
public:
  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> shape);

  static Tensor zeros(std::vector<std::size_t> shape);
  static Tensor full(std::vector<std::size_t> shape, double value);

  std::size_t rank() const { return shape_.size(); }
  std::size_t size(std::size_t dim) const;
  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t numel() const { return data_.size(); }

  // Rank-2 convenience.
  std::size_t rows() const { return size(0); }
  std::size_t cols() const { return size(1); }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  double& operator()(std::size_t i) { return data_[i]; }
  double operator()(std::size_t i) const { return data_[i]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * shape_[1] + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * shape_[1] + j]; }
  double& operator()(std::size_t i, std::size_t j, std::size_t k) {
    return data_[(i * shape_[1] + j) * shape_[2] + k];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[(i * shape_[1] + j) * shape_[2] + k];
  }

  void fill(double value);
  bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }
  bool all_finite() const;

  // In-place axpy: *this += alpha * other. Shapes must match.
  void add_scaled(const Tensor& other, double alpha = 1.0);

  std::string shape_str() const;

private:
  std::vector<std::size_t> shape_;
  std::vector<double> data_;
};

// A trainable (or frozen) tensor with paired gradient storage.
struct Param {
  Tensor value;
  Tensor grad;
  bool trainable = true;

  Param() = default;
  explicit Param(Tensor v, bool trainable_ = true)
      : value(std::move(v)), grad(Tensor::zeros(value.shape())), trainable(trainable_) {}

  void zero_grad() { grad.fill(0.0); }
};

}  // namespace irfuse::num
