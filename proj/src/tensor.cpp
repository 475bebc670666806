#include "irfuse/tensor.hpp"

#include <cmath>
#include <stdexcept>

namespace irfuse::num {

namespace {

std::size_t checked_numel(const std::vector<std::size_t>& shape) {
  if (shape.empty() || shape.size() > 3) {
    throw std::invalid_argument("Tensor: rank must be 1..3, got " + std::to_string(shape.size()));
  }
  std::size_t n = 1;
  for (std::size_t extent : shape) {
    if (extent == 0) throw std::invalid_argument("Tensor: zero extent");
    n *= extent;
  }
  return n;
}

}  // namespace

Tensor::Tensor(std::vector<std::size_t> shape) : shape_(std::move(shape)) {
  data_.assign(checked_numel(shape_), 0.0);
}

Tensor Tensor::zeros(std::vector<std::size_t> shape) { return Tensor(std::move(shape)); }

Tensor Tensor::full(std::vector<std::size_t> shape, double value) {
  Tensor t(std::move(shape));
  t.fill(value);
  return t;
}

std::size_t Tensor::size(std::size_t dim) const {
  if (dim >= shape_.size()) throw std::out_of_range("Tensor::size: dim out of range");
  return shape_[dim];
}

void Tensor::fill(double value) {
  for (double& x : data_) x = value;
}

bool Tensor::all_finite() const {
  for (double x : data_) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

void Tensor::add_scaled(const Tensor& other, double alpha) {
  if (!same_shape(other)) {
    throw std::invalid_argument("Tensor::add_scaled: shape mismatch " + shape_str() + " vs " +
                                other.shape_str());
  }
  const double* src = other.data();
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += alpha * src[i];
}

std::string Tensor::shape_str() const {
  std::string s = "[";
  for (std::size_t i = 0; i < shape_.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(shape_[i]);
  }
  return s + "]";
}

}  // namespace irfuse::num
