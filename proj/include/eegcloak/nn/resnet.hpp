#pragma once

#include <memory>
#include <string>
#include <vector>

#include "eegcloak/errors.hpp"
#include "eegcloak/nn/layers.hpp"

namespace eegcloak::nn {

// conv3x3-bn-relu-conv3x3-bn with identity (or projection) shortcut
template <typename T>
class BasicBlock : public Layer<T> {
 public:
  BasicBlock(const std::string& name, Rng& rng, int in_c, int out_c, int stride)
      : conv1_(name + ".conv1", rng, in_c, out_c, 3, stride, 1, false),
        bn1_(name + ".bn1", out_c),
        conv2_(name + ".conv2", rng, out_c, out_c, 3, 1, 1, false),
        bn2_(name + ".bn2", out_c) {
    if (stride != 1 || in_c != out_c) {
      down_conv_ = std::make_unique<Conv2d<T>>(name + ".down", rng, in_c, out_c, 1, stride, 0,
                                               false);
      down_bn_ = std::make_unique<BatchNorm2d<T>>(name + ".down_bn", out_c);
    }
  }

  Tensor<T> forward(const Tensor<T>& x, bool train) override {
    Tensor<T> main = bn1_.forward(conv1_.forward(x, train), train);
    main = relu1_.forward(main, train);
    main = bn2_.forward(conv2_.forward(main, train), train);
    Tensor<T> skip = down_conv_ ? down_bn_->forward(down_conv_->forward(x, train), train) : x;
    Tensor<T> y(main.shape);
    mask_.assign(main.numel(), false);
    for (std::size_t i = 0; i < main.numel(); ++i) {
      const T s = main.data[i] + skip.data[i];
      mask_[i] = s > T(0);
      y.data[i] = mask_[i] ? s : T(0);
    }
    return y;
  }

  Tensor<T> backward(const Tensor<T>& gy) override {
    Tensor<T> g(gy.shape);
    for (std::size_t i = 0; i < gy.numel(); ++i) g.data[i] = mask_[i] ? gy.data[i] : T(0);
    Tensor<T> dmain = conv1_.backward(bn1_.backward(relu1_.backward(
        conv2_.backward(bn2_.backward(g)))));
    Tensor<T> dskip = down_conv_ ? down_conv_->backward(down_bn_->backward(g)) : g;
    for (std::size_t i = 0; i < dmain.numel(); ++i) dmain.data[i] += dskip.data[i];
    return dmain;
  }

  void collect(std::vector<Param<T>*>& out) override {
    conv1_.collect(out);
    bn1_.collect(out);
    conv2_.collect(out);
    bn2_.collect(out);
    if (down_conv_) {
      down_conv_->collect(out);
      down_bn_->collect(out);
    }
  }

 private:
  Conv2d<T> conv1_;
  BatchNorm2d<T> bn1_;
  Conv2d<T> conv2_;
  BatchNorm2d<T> bn2_;
  ReLU<T> relu1_;
  std::unique_ptr<Conv2d<T>> down_conv_;
  std::unique_ptr<BatchNorm2d<T>> down_bn_;
  std::vector<bool> mask_;
};

// 1x1 reduce, 3x3, 1x1 expand (x4) with shortcut
template <typename T>
class BottleneckBlock : public Layer<T> {
 public:
  static constexpr int kExpansion = 4;

  BottleneckBlock(const std::string& name, Rng& rng, int in_c, int mid_c, int stride)
      : conv1_(name + ".conv1", rng, in_c, mid_c, 1, 1, 0, false),
        bn1_(name + ".bn1", mid_c),
        conv2_(name + ".conv2", rng, mid_c, mid_c, 3, stride, 1, false),
        bn2_(name + ".bn2", mid_c),
        conv3_(name + ".conv3", rng, mid_c, mid_c * kExpansion, 1, 1, 0, false),
        bn3_(name + ".bn3", mid_c * kExpansion) {
    if (stride != 1 || in_c != mid_c * kExpansion) {
      down_conv_ = std::make_unique<Conv2d<T>>(name + ".down", rng, in_c, mid_c * kExpansion, 1,
                                               stride, 0, false);
      down_bn_ = std::make_unique<BatchNorm2d<T>>(name + ".down_bn", mid_c * kExpansion);
    }
  }

  Tensor<T> forward(const Tensor<T>& x, bool train) override {
    Tensor<T> h = relu1_.forward(bn1_.forward(conv1_.forward(x, train), train), train);
    h = relu2_.forward(bn2_.forward(conv2_.forward(h, train), train), train);
    h = bn3_.forward(conv3_.forward(h, train), train);
    Tensor<T> skip = down_conv_ ? down_bn_->forward(down_conv_->forward(x, train), train) : x;
    Tensor<T> y(h.shape);
    mask_.assign(h.numel(), false);
    for (std::size_t i = 0; i < h.numel(); ++i) {
      const T s = h.data[i] + skip.data[i];
      mask_[i] = s > T(0);
      y.data[i] = mask_[i] ? s : T(0);
    }
    return y;
  }

  Tensor<T> backward(const Tensor<T>& gy) override {
    Tensor<T> g(gy.shape);
    for (std::size_t i = 0; i < gy.numel(); ++i) g.data[i] = mask_[i] ? gy.data[i] : T(0);
    Tensor<T> d = bn3_.backward(g);
    d = conv3_.backward(d);
    d = relu2_.backward(d);
    d = conv2_.backward(bn2_.backward(d));
    d = relu1_.backward(d);
    d = conv1_.backward(bn1_.backward(d));
    Tensor<T> dskip = down_conv_ ? down_conv_->backward(down_bn_->backward(g)) : g;
    for (std::size_t i = 0; i < d.numel(); ++i) d.data[i] += dskip.data[i];
    return d;
  }

  void collect(std::vector<Param<T>*>& out) override {
    conv1_.collect(out);
    bn1_.collect(out);
    conv2_.collect(out);
    bn2_.collect(out);
    conv3_.collect(out);
    bn3_.collect(out);
    if (down_conv_) {
      down_conv_->collect(out);
      down_bn_->collect(out);
    }
  }

 private:
  Conv2d<T> conv1_;
  BatchNorm2d<T> bn1_;
  Conv2d<T> conv2_;
  BatchNorm2d<T> bn2_;
  Conv2d<T> conv3_;
  BatchNorm2d<T> bn3_;
  ReLU<T> relu1_, relu2_;
  std::unique_ptr<Conv2d<T>> down_conv_;
  std::unique_ptr<BatchNorm2d<T>> down_bn_;
  std::vector<bool> mask_;
};

inline const std::vector<int>& resnet_stage_blocks(int depth) {
  static const std::vector<int> d18{2, 2, 2, 2};
  static const std::vector<int> d34{3, 4, 6, 3};
  switch (depth) {
    case 18: return d18;
    case 34:
    case 50: return d34;
    default: throw InvalidConfig("resnet depth must be 18, 34 or 50");
  }
}

inline int resnet_feature_dim(int depth) {
  return depth == 50 ? 512 * BottleneckBlock<float>::kExpansion : 512;
}

// Residual trunk with a small-image stem (3x3 stride-1 first convolution, no
// initial pooling); output is the pooled feature vector [N, feature_dim].
template <typename T>
Chain<T> make_resnet_trunk(Rng& rng, int depth, int in_channels = 3) {
  Chain<T> net;
  const auto& blocks = resnet_stage_blocks(depth);
  const bool bottleneck = depth == 50;
  net.template emplace<Conv2d<T>>("stem.conv", rng, in_channels, 64, 3, 1, 1, false);
  net.template emplace<BatchNorm2d<T>>("stem.bn", 64);
  net.template emplace<ReLU<T>>();
  int widths[4] = {64, 128, 256, 512};
  int in_c = 64;
  for (int stage = 0; stage < 4; ++stage) {
    const int w = widths[stage];
    for (int b = 0; b < blocks[static_cast<std::size_t>(stage)]; ++b) {
      const int stride = (stage > 0 && b == 0) ? 2 : 1;
      const std::string name =
          "stage" + std::to_string(stage) + ".block" + std::to_string(b);
      if (bottleneck) {
        net.template emplace<BottleneckBlock<T>>(name, rng, in_c, w, stride);
        in_c = w * BottleneckBlock<T>::kExpansion;
      } else {
        net.template emplace<BasicBlock<T>>(name, rng, in_c, w, stride);
        in_c = w;
      }
    }
  }
  net.template emplace<GlobalAvgPool<T>>();
  return net;
}

}  // namespace eegcloak::nn
