#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "nuggetbench/core/error.hpp"

namespace nb::tk {

// Dense row-major 64-bit tensor. Rank 0 (scalar), 1, and 2 cover every
// operation in the model graphs.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> shape)
      : shape_(std::move(shape)), v_(count(shape_), 0.0) {}
  Tensor(std::vector<std::size_t> shape, std::vector<double> values)
      : shape_(std::move(shape)), v_(std::move(values)) {
    if (v_.size() != count(shape_)) {
      throw ShapeError("tensor value count does not match shape " + shape_string());
    }
  }

  static Tensor scalar(double v) { return Tensor({}, {v}); }
  static Tensor zeros_like(const Tensor& other) { return Tensor(other.shape_); }

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t numel() const { return v_.size(); }
  bool is_scalar() const { return v_.size() == 1 && shape_.empty(); }

  std::size_t rows() const {
    require_rank(2);
    return shape_[0];
  }
  std::size_t cols() const {
    require_rank(2);
    return shape_[1];
  }
  std::size_t dim() const {
    require_rank(1);
    return shape_[0];
  }

  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }
  std::vector<double>& values() { return v_; }
  const std::vector<double>& values() const { return v_; }

  double& at(std::size_t i) { return v_[i]; }
  double at(std::size_t i) const { return v_[i]; }
  double& at(std::size_t i, std::size_t j) { return v_[i * shape_[1] + j]; }
  double at(std::size_t i, std::size_t j) const { return v_[i * shape_[1] + j]; }

  double* row_ptr(std::size_t i) { return v_.data() + i * shape_[1]; }
  const double* row_ptr(std::size_t i) const { return v_.data() + i * shape_[1]; }

  bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }

  std::string shape_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < shape_.size(); ++i) {
      if (i) s += "x";
      s += std::to_string(shape_[i]);
    }
    return s + ")";
  }

  void fill(double v) { v_.assign(v_.size(), v); }

 private:
  static std::size_t count(const std::vector<std::size_t>& shape) {
    std::size_t n = 1;
    for (std::size_t d : shape) n *= d;
    return n;
  }
  void require_rank(std::size_t r) const {
    if (shape_.size() != r) {
      throw ShapeError("expected rank-" + std::to_string(r) + " tensor, got " + shape_string());
    }
  }

  std::vector<std::size_t> shape_;
  std::vector<double> v_;
};

}  // namespace nb::tk
