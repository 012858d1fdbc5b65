#pragma once

#include <cmath>
#include <vector>

#include "eegcloak/nn/core.hpp"

namespace eegcloak::nn {

template <typename T>
class Adam {
 public:
  Adam(std::vector<Param<T>*> params, T lr, T beta1 = T(0.9), T beta2 = T(0.999),
       T eps = T(1e-8))
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
    for (auto* p : params)
      if (p->trainable) params_.push_back(p);
    m_.resize(params_.size());
    v_.resize(params_.size());
    for (std::size_t i = 0; i < params_.size(); ++i) {
      m_[i].assign(params_[i]->value.numel(), T(0));
      v_[i].assign(params_[i]->value.numel(), T(0));
    }
  }

  void zero_grad() {
    for (auto* p : params_) p->grad.zero();
  }

  void step() {
    ++t_;
    const T bc1 = T(1) - static_cast<T>(std::pow(static_cast<double>(beta1_), t_));
    const T bc2 = T(1) - static_cast<T>(std::pow(static_cast<double>(beta2_), t_));
    for (std::size_t i = 0; i < params_.size(); ++i) {
      auto& val = params_[i]->value.data;
      auto& g = params_[i]->grad.data;
      for (std::size_t j = 0; j < val.size(); ++j) {
        m_[i][j] = beta1_ * m_[i][j] + (T(1) - beta1_) * g[j];
        v_[i][j] = beta2_ * v_[i][j] + (T(1) - beta2_) * g[j] * g[j];
        const T mhat = m_[i][j] / bc1;
        const T vhat = v_[i][j] / bc2;
        val[j] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
      }
    }
  }

 private:
  T lr_, beta1_, beta2_, eps_;
  int t_ = 0;
  std::vector<Param<T>*> params_;
  std::vector<std::vector<T>> m_, v_;
};

}  // namespace eegcloak::nn
