#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <vector>

#include "eegcloak/errors.hpp"

namespace eegcloak {

// Eigen-aligned storage. Alignment must not depend on heap history: Eigen's
// vectorized kernels peel differently for differently aligned pointers, which
// changes floating-point summation order and breaks run-to-run determinism.
template <typename T>
using AlignedVec = std::vector<T, Eigen::aligned_allocator<T>>;

// Dense row-major tensor. 4-D activations use N,C,H,W order.
template <typename T>
struct Tensor {
  std::vector<int> shape;
  AlignedVec<T> data;

  Tensor() = default;
  explicit Tensor(std::vector<int> s) : shape(std::move(s)), data(numel_of(shape), T(0)) {}
  Tensor(std::initializer_list<int> s) : Tensor(std::vector<int>(s)) {}

  static std::size_t numel_of(const std::vector<int>& s) {
    std::size_t n = 1;
    for (int d : s) n *= static_cast<std::size_t>(d);
    return n;
  }
  std::size_t numel() const { return data.size(); }

  int dim(int i) const { return shape[static_cast<std::size_t>(i)]; }

  T* ptr() { return data.data(); }
  const T* ptr() const { return data.data(); }

  // n-th sample of an N,C,H,W tensor
  T* sample(int n) { return data.data() + static_cast<std::size_t>(n) * (numel() / shape[0]); }
  const T* sample(int n) const {
    return data.data() + static_cast<std::size_t>(n) * (numel() / shape[0]);
  }

  void fill(T v) { std::fill(data.begin(), data.end(), v); }
  void zero() { fill(T(0)); }

  bool same_shape(const Tensor& o) const { return shape == o.shape; }
};

template <typename T>
using MatMap = Eigen::Map<Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
template <typename T>
using ConstMatMap =
    Eigen::Map<const Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
template <typename T>
using VecMap = Eigen::Map<Eigen::Matrix<T, Eigen::Dynamic, 1>>;
template <typename T>
using ConstVecMap = Eigen::Map<const Eigen::Matrix<T, Eigen::Dynamic, 1>>;

}  // namespace eegcloak
