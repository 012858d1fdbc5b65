#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "eegcloak/nn/core.hpp"

namespace eegcloak::nn {

namespace detail {

template <typename T>
void im2col(const T* x, int c_in, int h, int w, int k, int stride, int pad, int ho, int wo,
            T* col) {
  const int m = ho * wo;
  for (int c = 0; c < c_in; ++c) {
    const T* xc = x + static_cast<std::size_t>(c) * h * w;
    for (int ki = 0; ki < k; ++ki) {
      for (int kj = 0; kj < k; ++kj) {
        T* row = col + (static_cast<std::size_t>(c) * k * k + ki * k + kj) * m;
        for (int i = 0; i < ho; ++i) {
          const int yi = i * stride - pad + ki;
          for (int j = 0; j < wo; ++j) {
            const int xj = j * stride - pad + kj;
            row[i * wo + j] =
                (yi >= 0 && yi < h && xj >= 0 && xj < w) ? xc[yi * w + xj] : T(0);
          }
        }
      }
    }
  }
}

template <typename T>
void col2im_add(const T* col, int c_in, int h, int w, int k, int stride, int pad, int ho, int wo,
                T* x) {
  const int m = ho * wo;
  for (int c = 0; c < c_in; ++c) {
    T* xc = x + static_cast<std::size_t>(c) * h * w;
    for (int ki = 0; ki < k; ++ki) {
      for (int kj = 0; kj < k; ++kj) {
        const T* row = col + (static_cast<std::size_t>(c) * k * k + ki * k + kj) * m;
        for (int i = 0; i < ho; ++i) {
          const int yi = i * stride - pad + ki;
          if (yi < 0 || yi >= h) continue;
          for (int j = 0; j < wo; ++j) {
            const int xj = j * stride - pad + kj;
            if (xj >= 0 && xj < w) xc[yi * w + xj] += row[i * wo + j];
          }
        }
      }
    }
  }
}

}  // namespace detail

template <typename T>
class Conv2d : public Layer<T> {
 public:
  Conv2d(std::string name, Rng& rng, int in_c, int out_c, int k, int stride = 1, int pad = -1,
         bool bias = true)
      : in_c_(in_c), out_c_(out_c), k_(k), stride_(stride), pad_(pad < 0 ? k / 2 : pad),
        has_bias_(bias) {
    weight_.init(name + ".weight", {out_c, in_c * k * k});
    const T std = static_cast<T>(std::sqrt(2.0 / (in_c * k * k)));
    for (auto& v : weight_.value.data) v = static_cast<T>(rng.normal()) * std;
    if (has_bias_) bias_.init(name + ".bias", {out_c});
  }

  Tensor<T> forward(const Tensor<T>& x, bool) override {
    x_ = x;
    const int n = x.dim(0), h = x.dim(2), w = x.dim(3);
    ho_ = (h + 2 * pad_ - k_) / stride_ + 1;
    wo_ = (w + 2 * pad_ - k_) / stride_ + 1;
    const int m = ho_ * wo_, ink = in_c_ * k_ * k_;
    Tensor<T> y({n, out_c_, ho_, wo_});
    std::vector<T> col(static_cast<std::size_t>(ink) * m);
    ConstMatMap<T> wmat(weight_.value.ptr(), out_c_, ink);
    for (int i = 0; i < n; ++i) {
      detail::im2col(x.sample(i), in_c_, h, w, k_, stride_, pad_, ho_, wo_, col.data());
      ConstMatMap<T> cmat(col.data(), ink, m);
      MatMap<T> ymat(y.sample(i), out_c_, m);
      ymat.noalias() = wmat * cmat;
      if (has_bias_)
        for (int c = 0; c < out_c_; ++c) ymat.row(c).array() += bias_.value.data[c];
    }
    return y;
  }

  Tensor<T> backward(const Tensor<T>& gy) override {
    const int n = x_.dim(0), h = x_.dim(2), w = x_.dim(3);
    const int m = ho_ * wo_, ink = in_c_ * k_ * k_;
    Tensor<T> dx(x_.shape);
    std::vector<T> col(static_cast<std::size_t>(ink) * m);
    std::vector<T> dcol(static_cast<std::size_t>(ink) * m);
    ConstMatMap<T> wmat(weight_.value.ptr(), out_c_, ink);
    MatMap<T> gw(weight_.grad.ptr(), out_c_, ink);
    for (int i = 0; i < n; ++i) {
      detail::im2col(x_.sample(i), in_c_, h, w, k_, stride_, pad_, ho_, wo_, col.data());
      ConstMatMap<T> cmat(col.data(), ink, m);
      ConstMatMap<T> gmat(gy.sample(i), out_c_, m);
      gw.noalias() += gmat * cmat.transpose();
      if (has_bias_)
        for (int c = 0; c < out_c_; ++c) bias_.grad.data[c] += gmat.row(c).sum();
      MatMap<T> dcmat(dcol.data(), ink, m);
      dcmat.noalias() = wmat.transpose() * gmat;
      detail::col2im_add(dcol.data(), in_c_, h, w, k_, stride_, pad_, ho_, wo_, dx.sample(i));
    }
    return dx;
  }

  void collect(std::vector<Param<T>*>& out) override {
    out.push_back(&weight_);
    if (has_bias_) out.push_back(&bias_);
  }

 private:
  int in_c_, out_c_, k_, stride_, pad_;
  bool has_bias_;
  int ho_ = 0, wo_ = 0;
  Param<T> weight_, bias_;
  Tensor<T> x_;
};

template <typename T>
class BatchNorm2d : public Layer<T> {
 public:
  BatchNorm2d(std::string name, int c, T momentum = T(0.1), T eps = T(1e-5))
      : c_(c), momentum_(momentum), eps_(eps) {
    gamma_.init(name + ".gamma", {c});
    beta_.init(name + ".beta", {c});
    run_mean_.init(name + ".running_mean", {c}, false);
    run_var_.init(name + ".running_var", {c}, false);
    gamma_.value.fill(T(1));
    run_var_.value.fill(T(1));
  }

  Tensor<T> forward(const Tensor<T>& x, bool train) override {
    train_ = train;
    const int n = x.dim(0), h = x.dim(2), w = x.dim(3);
    const int hw = h * w;
    const T inv_m = T(1) / static_cast<T>(n * hw);
    Tensor<T> y(x.shape);
    xhat_ = Tensor<T>(x.shape);
    invstd_.assign(static_cast<std::size_t>(c_), T(0));
    for (int c = 0; c < c_; ++c) {
      T mean, var;
      if (train) {
        T s = 0, s2 = 0;
        for (int i = 0; i < n; ++i) {
          const T* p = x.sample(i) + static_cast<std::size_t>(c) * hw;
          for (int t = 0; t < hw; ++t) {
            s += p[t];
            s2 += p[t] * p[t];
          }
        }
        mean = s * inv_m;
        var = s2 * inv_m - mean * mean;
        if (var < T(0)) var = T(0);
        run_mean_.value.data[c] = (T(1) - momentum_) * run_mean_.value.data[c] + momentum_ * mean;
        run_var_.value.data[c] = (T(1) - momentum_) * run_var_.value.data[c] + momentum_ * var;
      } else {
        mean = run_mean_.value.data[c];
        var = run_var_.value.data[c];
      }
      const T istd = T(1) / std::sqrt(var + eps_);
      invstd_[static_cast<std::size_t>(c)] = istd;
      const T g = gamma_.value.data[c], b = beta_.value.data[c];
      for (int i = 0; i < n; ++i) {
        const T* p = x.sample(i) + static_cast<std::size_t>(c) * hw;
        T* xh = xhat_.sample(i) + static_cast<std::size_t>(c) * hw;
        T* yo = y.sample(i) + static_cast<std::size_t>(c) * hw;
        for (int t = 0; t < hw; ++t) {
          xh[t] = (p[t] - mean) * istd;
          yo[t] = g * xh[t] + b;
        }
      }
    }
    return y;
  }

  Tensor<T> backward(const Tensor<T>& gy) override {
    const int n = gy.dim(0), h = gy.dim(2), w = gy.dim(3);
    const int hw = h * w;
    const T m = static_cast<T>(n * hw);
    Tensor<T> dx(gy.shape);
    for (int c = 0; c < c_; ++c) {
      const T g = gamma_.value.data[c];
      const T istd = invstd_[static_cast<std::size_t>(c)];
      T sum_dy = 0, sum_dy_xhat = 0;
      for (int i = 0; i < n; ++i) {
        const T* dy = gy.sample(i) + static_cast<std::size_t>(c) * hw;
        const T* xh = xhat_.sample(i) + static_cast<std::size_t>(c) * hw;
        for (int t = 0; t < hw; ++t) {
          sum_dy += dy[t];
          sum_dy_xhat += dy[t] * xh[t];
        }
      }
      gamma_.grad.data[c] += sum_dy_xhat;
      beta_.grad.data[c] += sum_dy;
      for (int i = 0; i < n; ++i) {
        const T* dy = gy.sample(i) + static_cast<std::size_t>(c) * hw;
        const T* xh = xhat_.sample(i) + static_cast<std::size_t>(c) * hw;
        T* d = dx.sample(i) + static_cast<std::size_t>(c) * hw;
        if (train_) {
          const T a = g * istd / m;
          for (int t = 0; t < hw; ++t)
            d[t] = a * (m * dy[t] - sum_dy - xh[t] * sum_dy_xhat);
        } else {
          for (int t = 0; t < hw; ++t) d[t] = g * istd * dy[t];
        }
      }
    }
    return dx;
  }

  void collect(std::vector<Param<T>*>& out) override {
    out.push_back(&gamma_);
    out.push_back(&beta_);
    out.push_back(&run_mean_);
    out.push_back(&run_var_);
  }

 private:
  int c_;
  T momentum_, eps_;
  bool train_ = true;
  Param<T> gamma_, beta_, run_mean_, run_var_;
  Tensor<T> xhat_;
  std::vector<T> invstd_;
};

// Per-instance normalization over H*W; uses instance statistics in both
// training and inference (the usual choice for style-transfer generators).
template <typename T>
class InstanceNorm2d : public Layer<T> {
 public:
  InstanceNorm2d(std::string name, int c, T eps = T(1e-5)) : c_(c), eps_(eps) {
    gamma_.init(name + ".gamma", {c});
    beta_.init(name + ".beta", {c});
    gamma_.value.fill(T(1));
  }

  Tensor<T> forward(const Tensor<T>& x, bool) override {
    const int n = x.dim(0), hw = x.dim(2) * x.dim(3);
    Tensor<T> y(x.shape);
    xhat_ = Tensor<T>(x.shape);
    invstd_.assign(static_cast<std::size_t>(n) * c_, T(0));
    const T inv_m = T(1) / static_cast<T>(hw);
    for (int i = 0; i < n; ++i) {
      for (int c = 0; c < c_; ++c) {
        const T* p = x.sample(i) + static_cast<std::size_t>(c) * hw;
        T s = 0, s2 = 0;
        for (int t = 0; t < hw; ++t) {
          s += p[t];
          s2 += p[t] * p[t];
        }
        const T mean = s * inv_m;
        T var = s2 * inv_m - mean * mean;
        if (var < T(0)) var = T(0);
        const T istd = T(1) / std::sqrt(var + eps_);
        invstd_[static_cast<std::size_t>(i) * c_ + c] = istd;
        const T g = gamma_.value.data[c], b = beta_.value.data[c];
        T* xh = xhat_.sample(i) + static_cast<std::size_t>(c) * hw;
        T* yo = y.sample(i) + static_cast<std::size_t>(c) * hw;
        for (int t = 0; t < hw; ++t) {
          xh[t] = (p[t] - mean) * istd;
          yo[t] = g * xh[t] + b;
        }
      }
    }
    return y;
  }

  Tensor<T> backward(const Tensor<T>& gy) override {
    const int n = gy.dim(0), hw = gy.dim(2) * gy.dim(3);
    const T m = static_cast<T>(hw);
    Tensor<T> dx(gy.shape);
    for (int i = 0; i < n; ++i) {
      for (int c = 0; c < c_; ++c) {
        const T* dy = gy.sample(i) + static_cast<std::size_t>(c) * hw;
        const T* xh = xhat_.sample(i) + static_cast<std::size_t>(c) * hw;
        const T g = gamma_.value.data[c];
        const T istd = invstd_[static_cast<std::size_t>(i) * c_ + c];
        T sum_dy = 0, sum_dy_xhat = 0;
        for (int t = 0; t < hw; ++t) {
          sum_dy += dy[t];
          sum_dy_xhat += dy[t] * xh[t];
        }
        gamma_.grad.data[c] += sum_dy_xhat;
        beta_.grad.data[c] += sum_dy;
        T* d = dx.sample(i) + static_cast<std::size_t>(c) * hw;
        const T a = g * istd / m;
        for (int t = 0; t < hw; ++t) d[t] = a * (m * dy[t] - sum_dy - xh[t] * sum_dy_xhat);
      }
    }
    return dx;
  }

  void collect(std::vector<Param<T>*>& out) override {
    out.push_back(&gamma_);
    out.push_back(&beta_);
  }

 private:
  int c_;
  T eps_;
  Param<T> gamma_, beta_;
  Tensor<T> xhat_;
  std::vector<T> invstd_;
};

template <typename T>
class ReLU : public Layer<T> {
 public:
  Tensor<T> forward(const Tensor<T>& x, bool) override {
    mask_.assign(x.numel(), false);
    Tensor<T> y(x.shape);
    for (std::size_t i = 0; i < x.numel(); ++i) {
      const bool pos = x.data[i] > T(0);
      mask_[i] = pos;
      y.data[i] = pos ? x.data[i] : T(0);
    }
    return y;
  }
  Tensor<T> backward(const Tensor<T>& gy) override {
    Tensor<T> dx(gy.shape);
    for (std::size_t i = 0; i < gy.numel(); ++i) dx.data[i] = mask_[i] ? gy.data[i] : T(0);
    return dx;
  }

 private:
  std::vector<bool> mask_;
};

template <typename T>
class LeakyReLU : public Layer<T> {
 public:
  explicit LeakyReLU(T slope = T(0.2)) : slope_(slope) {}
  Tensor<T> forward(const Tensor<T>& x, bool) override {
    mask_.assign(x.numel(), false);
    Tensor<T> y(x.shape);
    for (std::size_t i = 0; i < x.numel(); ++i) {
      const bool pos = x.data[i] > T(0);
      mask_[i] = pos;
      y.data[i] = pos ? x.data[i] : slope_ * x.data[i];
    }
    return y;
  }
  Tensor<T> backward(const Tensor<T>& gy) override {
    Tensor<T> dx(gy.shape);
    for (std::size_t i = 0; i < gy.numel(); ++i)
      dx.data[i] = mask_[i] ? gy.data[i] : slope_ * gy.data[i];
    return dx;
  }

 private:
  T slope_;
  std::vector<bool> mask_;
};

template <typename T>
class Tanh : public Layer<T> {
 public:
  Tensor<T> forward(const Tensor<T>& x, bool) override {
    y_ = Tensor<T>(x.shape);
    for (std::size_t i = 0; i < x.numel(); ++i) y_.data[i] = std::tanh(x.data[i]);
    return y_;
  }
  Tensor<T> backward(const Tensor<T>& gy) override {
    Tensor<T> dx(gy.shape);
    for (std::size_t i = 0; i < gy.numel(); ++i)
      dx.data[i] = gy.data[i] * (T(1) - y_.data[i] * y_.data[i]);
    return dx;
  }

 private:
  Tensor<T> y_;
};

template <typename T>
class Linear : public Layer<T> {
 public:
  Linear(std::string name, Rng& rng, int in, int out) : in_(in), out_(out) {
    weight_.init(name + ".weight", {out, in});
    bias_.init(name + ".bias", {out});
    const T std = static_cast<T>(std::sqrt(2.0 / in));
    for (auto& v : weight_.value.data) v = static_cast<T>(rng.normal()) * std;
  }

  Tensor<T> forward(const Tensor<T>& x, bool) override {
    x_ = x;
    const int n = x.dim(0);
    Tensor<T> y({n, out_});
    ConstMatMap<T> xm(x.ptr(), n, in_);
    ConstMatMap<T> wm(weight_.value.ptr(), out_, in_);
    MatMap<T> ym(y.ptr(), n, out_);
    ym.noalias() = xm * wm.transpose();
    for (int i = 0; i < n; ++i)
      for (int o = 0; o < out_; ++o) y.data[static_cast<std::size_t>(i) * out_ + o] +=
          bias_.value.data[o];
    return y;
  }

  Tensor<T> backward(const Tensor<T>& gy) override {
    const int n = x_.dim(0);
    ConstMatMap<T> gm(gy.ptr(), n, out_);
    ConstMatMap<T> xm(x_.ptr(), n, in_);
    ConstMatMap<T> wm(weight_.value.ptr(), out_, in_);
    MatMap<T> gw(weight_.grad.ptr(), out_, in_);
    gw.noalias() += gm.transpose() * xm;
    VecMap<T> gb(bias_.grad.ptr(), out_);
    gb.noalias() += gm.colwise().sum().transpose();
    Tensor<T> dx({n, in_});
    MatMap<T> dxm(dx.ptr(), n, in_);
    dxm.noalias() = gm * wm;
    return dx;
  }

  void collect(std::vector<Param<T>*>& out) override {
    out.push_back(&weight_);
    out.push_back(&bias_);
  }

 private:
  int in_, out_;
  Param<T> weight_, bias_;
  Tensor<T> x_;
};

template <typename T>
class GlobalAvgPool : public Layer<T> {
 public:
  Tensor<T> forward(const Tensor<T>& x, bool) override {
    shape_ = x.shape;
    const int n = x.dim(0), c = x.dim(1), hw = x.dim(2) * x.dim(3);
    Tensor<T> y({n, c});
    for (int i = 0; i < n; ++i)
      for (int ch = 0; ch < c; ++ch) {
        const T* p = x.sample(i) + static_cast<std::size_t>(ch) * hw;
        T s = 0;
        for (int t = 0; t < hw; ++t) s += p[t];
        y.data[static_cast<std::size_t>(i) * c + ch] = s / static_cast<T>(hw);
      }
    return y;
  }
  Tensor<T> backward(const Tensor<T>& gy) override {
    Tensor<T> dx(shape_);
    const int n = shape_[0], c = shape_[1], hw = shape_[2] * shape_[3];
    for (int i = 0; i < n; ++i)
      for (int ch = 0; ch < c; ++ch) {
        const T g = gy.data[static_cast<std::size_t>(i) * c + ch] / static_cast<T>(hw);
        T* p = dx.sample(i) + static_cast<std::size_t>(ch) * hw;
        for (int t = 0; t < hw; ++t) p[t] = g;
      }
    return dx;
  }

 private:
  std::vector<int> shape_;
};

template <typename T>
class UpsampleNearest : public Layer<T> {
 public:
  explicit UpsampleNearest(int factor = 2) : f_(factor) {}
  Tensor<T> forward(const Tensor<T>& x, bool) override {
    shape_ = x.shape;
    const int n = x.dim(0), c = x.dim(1), h = x.dim(2), w = x.dim(3);
    Tensor<T> y({n, c, h * f_, w * f_});
    for (int i = 0; i < n; ++i)
      for (int ch = 0; ch < c; ++ch) {
        const T* src = x.sample(i) + static_cast<std::size_t>(ch) * h * w;
        T* dst = y.sample(i) + static_cast<std::size_t>(ch) * h * f_ * w * f_;
        for (int r = 0; r < h * f_; ++r)
          for (int col = 0; col < w * f_; ++col)
            dst[r * w * f_ + col] = src[(r / f_) * w + col / f_];
      }
    return y;
  }
  Tensor<T> backward(const Tensor<T>& gy) override {
    Tensor<T> dx(shape_);
    const int n = shape_[0], c = shape_[1], h = shape_[2], w = shape_[3];
    for (int i = 0; i < n; ++i)
      for (int ch = 0; ch < c; ++ch) {
        T* dst = dx.sample(i) + static_cast<std::size_t>(ch) * h * w;
        const T* src = gy.sample(i) + static_cast<std::size_t>(ch) * h * f_ * w * f_;
        for (int r = 0; r < h * f_; ++r)
          for (int col = 0; col < w * f_; ++col)
            dst[(r / f_) * w + col / f_] += src[r * w * f_ + col];
      }
    return dx;
  }

 private:
  int f_;
  std::vector<int> shape_;
};

}  // namespace eegcloak::nn
