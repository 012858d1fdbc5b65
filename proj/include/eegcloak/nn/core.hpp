#pragma once

#include <memory>
#include <string>
#include <vector>

#include "eegcloak/rng.hpp"
#include "eegcloak/tensor.hpp"

namespace eegcloak::nn {

// Learnable (or persistent) tensor with its gradient buffer.
template <typename T>
struct Param {
  std::string name;
  Tensor<T> value;
  Tensor<T> grad;
  bool trainable = true;  // false: saved/loaded but not touched by the optimizer

  void init(std::string n, std::vector<int> shape, bool train = true) {
    name = std::move(n);
    value = Tensor<T>(shape);
    grad = Tensor<T>(shape);
    trainable = train;
  }
};

// Single-owner layer: forward caches whatever backward needs, so exactly one
// forward pass may be in flight per layer instance.
template <typename T>
struct Layer {
  virtual ~Layer() = default;
  virtual Tensor<T> forward(const Tensor<T>& x, bool train) = 0;
  virtual Tensor<T> backward(const Tensor<T>& gy) = 0;
  virtual void collect(std::vector<Param<T>*>& out) {}
};

template <typename T>
class Chain : public Layer<T> {
 public:
  Chain() = default;

  template <typename L, typename... Args>
  L* emplace(Args&&... args) {
    auto layer = std::make_unique<L>(std::forward<Args>(args)...);
    L* raw = layer.get();
    layers_.push_back(std::move(layer));
    return raw;
  }

  Tensor<T> forward(const Tensor<T>& x, bool train) override {
    Tensor<T> h = x;
    for (auto& l : layers_) h = l->forward(h, train);
    return h;
  }

  Tensor<T> backward(const Tensor<T>& gy) override {
    Tensor<T> g = gy;
    for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) g = (*it)->backward(g);
    return g;
  }

  void collect(std::vector<Param<T>*>& out) override {
    for (auto& l : layers_) l->collect(out);
  }

  std::vector<Param<T>*> params() {
    std::vector<Param<T>*> out;
    collect(out);
    return out;
  }

 private:
  std::vector<std::unique_ptr<Layer<T>>> layers_;
};

template <typename T>
inline void zero_grads(const std::vector<Param<T>*>& params) {
  for (auto* p : params) p->grad.zero();
}

}  // namespace eegcloak::nn
