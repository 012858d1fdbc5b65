#pragma once

#include <cmath>
#include <vector>

#include "eegcloak/errors.hpp"
#include "eegcloak/tensor.hpp"

namespace eegcloak::nn {

template <typename T>
Tensor<T> softmax_rows(const Tensor<T>& logits) {
  const int n = logits.dim(0), k = logits.dim(1);
  Tensor<T> out(logits.shape);
  for (int i = 0; i < n; ++i) {
    const T* row = logits.ptr() + static_cast<std::size_t>(i) * k;
    T* o = out.ptr() + static_cast<std::size_t>(i) * k;
    T mx = row[0];
    for (int j = 1; j < k; ++j) mx = std::max(mx, row[j]);
    T z = 0;
    for (int j = 0; j < k; ++j) {
      o[j] = std::exp(row[j] - mx);
      z += o[j];
    }
    for (int j = 0; j < k; ++j) o[j] /= z;
  }
  return out;
}

template <typename T>
std::vector<int> argmax_rows(const Tensor<T>& logits) {
  const int n = logits.dim(0), k = logits.dim(1);
  std::vector<int> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const T* row = logits.ptr() + static_cast<std::size_t>(i) * k;
    int best = 0;
    for (int j = 1; j < k; ++j)
      if (row[j] > row[best]) best = j;
    out[static_cast<std::size_t>(i)] = best;
  }
  return out;
}

// Mean softmax cross-entropy over the batch; when dlogits is non-null it
// receives d(mean loss)/d(logits) scaled by `grad_scale`.
template <typename T>
double cross_entropy(const Tensor<T>& logits, const std::vector<int>& labels,
                     Tensor<T>* dlogits = nullptr, double grad_scale = 1.0) {
  const int n = logits.dim(0), k = logits.dim(1);
  if (static_cast<int>(labels.size()) != n) throw MissingLabel("label count != batch size");
  const Tensor<T> probs = softmax_rows(logits);
  double loss = 0.0;
  if (dlogits) *dlogits = Tensor<T>(logits.shape);
  for (int i = 0; i < n; ++i) {
    const int y = labels[static_cast<std::size_t>(i)];
    if (y < 0 || y >= k) throw LabelOutOfRange("class label out of range");
    const T p = probs.data[static_cast<std::size_t>(i) * k + y];
    loss -= std::log(std::max(static_cast<double>(p), 1e-30));
    if (dlogits) {
      T* d = dlogits->ptr() + static_cast<std::size_t>(i) * k;
      const T scale = static_cast<T>(grad_scale / n);
      for (int j = 0; j < k; ++j)
        d[j] = scale * (probs.data[static_cast<std::size_t>(i) * k + j] - T(j == y));
    }
  }
  return loss / n;
}

}  // namespace eegcloak::nn
