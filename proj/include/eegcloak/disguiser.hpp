#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "eegcloak/classifier.hpp"
#include "eegcloak/dummyid.hpp"
#include "eegcloak/errors.hpp"
#include "eegcloak/nn/adam.hpp"
#include "eegcloak/nn/checkpoint.hpp"
#include "eegcloak/nn/layers.hpp"
#include "eegcloak/nn/loss.hpp"
#include "eegcloak/rng.hpp"
#include "eegcloak/topomap.hpp"

namespace eegcloak {

struct ConstraintSet {
  bool alcoholism = false;
  bool stimulus = false;

  bool any() const { return alcoholism || stimulus; }
  std::vector<Task> tasks() const {
    std::vector<Task> t;
    if (alcoholism) t.push_back(Task::alcoholism);
    if (stimulus) t.push_back(Task::stimulus);
    return t;
  }
  std::string name() const {
    if (alcoholism && stimulus) return "both";
    if (alcoholism) return "alc";
    if (stimulus) return "sti";
    return "none";
  }
  static ConstraintSet from_name(const std::string& s) {
    if (s == "none") return {};
    if (s == "alc") return {true, false};
    if (s == "sti") return {false, true};
    if (s == "both") return {true, true};
    throw InvalidConfig("unknown constraint set: " + s);
  }
};

namespace nn {

// conv-IN-relu-conv-IN with an identity shortcut (no activation after the add)
template <typename T>
class GenResBlock : public Layer<T> {
 public:
  GenResBlock(const std::string& name, Rng& rng, int c)
      : conv1_(name + ".conv1", rng, c, c, 3, 1, 1, false),
        in1_(name + ".in1", c),
        conv2_(name + ".conv2", rng, c, c, 3, 1, 1, false),
        in2_(name + ".in2", c) {}

  Tensor<T> forward(const Tensor<T>& x, bool train) override {
    Tensor<T> h = relu_.forward(in1_.forward(conv1_.forward(x, train), train), train);
    h = in2_.forward(conv2_.forward(h, train), train);
    for (std::size_t i = 0; i < h.numel(); ++i) h.data[i] += x.data[i];
    return h;
  }

  Tensor<T> backward(const Tensor<T>& gy) override {
    Tensor<T> d = conv1_.backward(in1_.backward(relu_.backward(conv2_.backward(in2_.backward(gy)))));
    for (std::size_t i = 0; i < d.numel(); ++i) d.data[i] += gy.data[i];
    return d;
  }

  void collect(std::vector<Param<T>*>& out) override {
    conv1_.collect(out);
    in1_.collect(out);
    conv2_.collect(out);
    in2_.collect(out);
  }

 private:
  Conv2d<T> conv1_;
  InstanceNorm2d<T> in1_;
  Conv2d<T> conv2_;
  InstanceNorm2d<T> in2_;
  ReLU<T> relu_;
};

}  // namespace nn

// Translation generator: two stride-2 downsampling stages, four residual
// blocks, two nearest-upsample stages, tanh output in [-1, 1].
inline nn::Chain<float> make_generator(Rng& rng, const std::string& name) {
  nn::Chain<float> g;
  g.emplace<nn::Conv2d<float>>(name + ".in", rng, 3, 32, 3, 1, 1, false);
  g.emplace<nn::InstanceNorm2d<float>>(name + ".in_norm", 32);
  g.emplace<nn::ReLU<float>>();
  g.emplace<nn::Conv2d<float>>(name + ".down1", rng, 32, 64, 3, 2, 1, false);
  g.emplace<nn::InstanceNorm2d<float>>(name + ".down1_norm", 64);
  g.emplace<nn::ReLU<float>>();
  g.emplace<nn::Conv2d<float>>(name + ".down2", rng, 64, 128, 3, 2, 1, false);
  g.emplace<nn::InstanceNorm2d<float>>(name + ".down2_norm", 128);
  g.emplace<nn::ReLU<float>>();
  for (int b = 0; b < 4; ++b)
    g.emplace<nn::GenResBlock<float>>(name + ".res" + std::to_string(b), rng, 128);
  g.emplace<nn::UpsampleNearest<float>>(2);
  g.emplace<nn::Conv2d<float>>(name + ".up1", rng, 128, 64, 3, 1, 1, false);
  g.emplace<nn::InstanceNorm2d<float>>(name + ".up1_norm", 64);
  g.emplace<nn::ReLU<float>>();
  g.emplace<nn::UpsampleNearest<float>>(2);
  g.emplace<nn::Conv2d<float>>(name + ".up2", rng, 64, 32, 3, 1, 1, false);
  g.emplace<nn::InstanceNorm2d<float>>(name + ".up2_norm", 32);
  g.emplace<nn::ReLU<float>>();
  g.emplace<nn::Conv2d<float>>(name + ".out", rng, 32, 3, 3, 1, 1, true);
  g.emplace<nn::Tanh<float>>();
  return g;
}

// 3-layer patch discriminator; output is a real-valued patch map.
inline nn::Chain<float> make_patch_discriminator(Rng& rng, const std::string& name) {
  nn::Chain<float> d;
  d.emplace<nn::Conv2d<float>>(name + ".c1", rng, 3, 64, 4, 2, 1, true);
  d.emplace<nn::LeakyReLU<float>>(0.2f);
  d.emplace<nn::Conv2d<float>>(name + ".c2", rng, 64, 128, 4, 2, 1, false);
  d.emplace<nn::InstanceNorm2d<float>>(name + ".c2_norm", 128);
  d.emplace<nn::LeakyReLU<float>>(0.2f);
  d.emplace<nn::Conv2d<float>>(name + ".c3", rng, 128, 1, 4, 1, 1, true);
  return d;
}

struct GanBatchLosses {
  double adv_G = 0, adv_D = 0, cycle = 0, task = 0, semantic = 0, total_G = 0, total_D = 0;
};

struct GanEpochStats {
  int epoch = 0;
  GanBatchLosses mean;
  bool gate = false;    // latched semantic gate state at epoch end
  double ema = 0.0;     // running-mean task loss driving the gate
};

// generator term = mean((d_fake-1)^2);
// discriminator term = 0.5*mean((d_real-1)^2) + 0.5*mean(d_fake^2)
template <typename T>
std::pair<double, double> lsgan_losses(const Tensor<T>& d_real, const Tensor<T>& d_fake) {
  if (d_real.shape != d_fake.shape)
    throw ShapeMismatch("discriminator output shapes differ");
  double g = 0, dr = 0, df = 0;
  for (std::size_t i = 0; i < d_fake.numel(); ++i) {
    const double f = d_fake.data[i], r = d_real.data[i];
    g += (f - 1) * (f - 1);
    dr += (r - 1) * (r - 1);
    df += f * f;
  }
  const double n = static_cast<double>(d_fake.numel());
  return {g / n, 0.5 * dr / n + 0.5 * df / n};
}

// mean absolute reconstruction error summed over both cycle directions
template <typename T>
double cycle_loss(const Tensor<T>& x, const Tensor<T>& rec_x, const Tensor<T>& y,
                  const Tensor<T>& rec_y) {
  if (x.shape != rec_x.shape || y.shape != rec_y.shape)
    throw ShapeMismatch("cycle reconstruction shapes differ");
  double a = 0, b = 0;
  for (std::size_t i = 0; i < x.numel(); ++i) a += std::abs(x.data[i] - rec_x.data[i]);
  for (std::size_t i = 0; i < y.numel(); ++i) b += std::abs(y.data[i] - rec_y.data[i]);
  return a / static_cast<double>(x.numel()) + b / static_cast<double>(y.numel());
}

namespace detail {

inline std::vector<int> labels_of(const std::vector<const EEGImage*>& imgs, Task task) {
  std::vector<int> out;
  out.reserve(imgs.size());
  for (const auto* img : imgs) out.push_back(label_for(*img, task, {}));
  return out;
}

// Sum of per-head cross-entropies plus the summed feature gradient (null to
// skip gradient work). Forward is eval-mode: C acts as a fixed judge here.
inline double multihead_ce(ClassifierNet& C, const Tensor<float>& feat,
                           const std::vector<std::vector<int>>& labels_per_head,
                           Tensor<float>* dfeat, double grad_scale = 1.0) {
  double total = 0;
  if (dfeat) *dfeat = Tensor<float>(feat.shape);
  for (std::size_t h = 0; h < C.heads.size(); ++h) {
    auto logits = C.head_logits(h, feat, false);
    Tensor<float> dl;
    total += nn::cross_entropy(logits, labels_per_head[h], dfeat ? &dl : nullptr, grad_scale);
    if (dfeat) {
      auto dh = C.heads[h]->backward(dl);
      for (std::size_t i = 0; i < dfeat->numel(); ++i) dfeat->data[i] += dh.data[i];
    }
  }
  return total;
}

}  // namespace detail

// task = sum over constrained tasks of CE(C(x), true label);
// semantic = sum over constrained tasks of CE(C(G_X(x)), argmax C(x)).
// Both are 0 when the constraint set is empty. Inputs are in [0,1] space.
inline std::pair<double, double> constraint_losses(ClassifierNet& C,
                                                   const std::vector<const EEGImage*>& x,
                                                   const Tensor<float>& fake_x01,
                                                   const ConstraintSet& cs) {
  if (!cs.any()) return {0.0, 0.0};
  const auto tasks = cs.tasks();
  auto x01 = images_to_tensor(x, C.config.image_size);

  auto feat_real = C.features(x01, false);
  double task_loss = 0;
  std::vector<std::vector<int>> pseudo(C.heads.size());
  for (const Task t : tasks) {
    const std::size_t h = C.head_index(t);
    auto logits = C.head_logits(h, feat_real, false);
    task_loss += nn::cross_entropy(logits, detail::labels_of(x, t));
    pseudo[h] = nn::argmax_rows(logits);
  }

  auto feat_fake = C.features(fake_x01, false);
  double semantic = 0;
  for (const Task t : tasks) {
    const std::size_t h = C.head_index(t);
    semantic += nn::cross_entropy(C.head_logits(h, feat_fake, false), pseudo[h]);
  }
  return {task_loss, semantic};
}

struct DisguiserModel {
  nn::Chain<float> g_x, g_y, d_x, d_y;
  std::unique_ptr<ClassifierNet> constraint_net;  // null when constraint_set is empty
  ConstraintSet constraints;
  float lambda_cycle = 10.0f, lambda_task = 1.0f, lambda_sem = 1.0f;
  double gate_threshold = 1.0;
  int image_size = kDefaultImageSize;
  std::uint64_t seed = 0;
  std::vector<GanEpochStats> history;
};

inline DisguiserModel build_disguiser(const ConstraintSet& cs, std::uint64_t seed,
                                      int image_size = kDefaultImageSize) {
  DisguiserModel m;
  m.constraints = cs;
  m.image_size = image_size;
  m.seed = seed;
  Rng rng(Rng::derive(seed, "disguiser"));
  m.g_x = make_generator(rng, "g_x");
  m.g_y = make_generator(rng, "g_y");
  m.d_x = make_patch_discriminator(rng, "d_x");
  m.d_y = make_patch_discriminator(rng, "d_y");
  if (cs.any()) {
    NetConfig cfg;
    cfg.depth = 18;
    cfg.image_size = image_size;
    for (const Task t : cs.tasks()) cfg.heads.push_back({t, head_size_for(t, 0)});
    m.constraint_net =
        std::make_unique<ClassifierNet>(build_net(cfg, Rng::derive(seed, "constraint-C")));
  }
  return m;
}

struct GanTrainOptions {
  int epochs = 30;
  int batch = 4;
  float lr = 2e-4f;
  float beta1 = 0.5f;
  std::uint64_t seed = 0;
  bool verbose = false;
};

namespace detail {

inline Tensor<float> to_signed(const Tensor<float>& x01) {
  Tensor<float> out(x01.shape);
  for (std::size_t i = 0; i < x01.numel(); ++i) out.data[i] = 2.0f * x01.data[i] - 1.0f;
  return out;
}

inline Tensor<float> to_unit(const Tensor<float>& xs) {
  Tensor<float> out(xs.shape);
  for (std::size_t i = 0; i < xs.numel(); ++i)
    out.data[i] = std::clamp(0.5f * (xs.data[i] + 1.0f), 0.0f, 1.0f);
  return out;
}

// d mean((d-target)^2) / d d
inline Tensor<float> lsgan_grad(const Tensor<float>& d, float target, float scale) {
  Tensor<float> g(d.shape);
  const float s = 2.0f * scale / static_cast<float>(d.numel());
  for (std::size_t i = 0; i < d.numel(); ++i) g.data[i] = s * (d.data[i] - target);
  return g;
}

// d mean|rec - ref| / d rec
inline Tensor<float> l1_grad(const Tensor<float>& rec, const Tensor<float>& ref, float scale) {
  Tensor<float> g(rec.shape);
  const float s = scale / static_cast<float>(rec.numel());
  for (std::size_t i = 0; i < rec.numel(); ++i) {
    const float d = rec.data[i] - ref.data[i];
    g.data[i] = d > 0 ? s : (d < 0 ? -s : 0.0f);
  }
  return g;
}

inline void add_into(Tensor<float>& dst, const Tensor<float>& src) {
  for (std::size_t i = 0; i < dst.numel(); ++i) dst.data[i] += src.data[i];
}

}  // namespace detail

// Alternating CycleGAN training with optional task/semantic constraints.
// The semantic term is gated: it participates only once the exponential
// running mean (decay 0.9) of C's task loss has dropped below gate_threshold,
// and stays enabled for the rest of the run.
inline void train_disguiser(DisguiserModel& m, const std::vector<EEGImage>& real_x,
                            const DummySet& dummy_y, const GanTrainOptions& opts) {
  if (real_x.empty()) throw EmptyDomain("source domain is empty");
  if (dummy_y.images.empty()) throw EmptyDomain("target (dummy) domain is empty");

  auto g_params = m.g_x.params();
  {
    auto gy = m.g_y.params();
    g_params.insert(g_params.end(), gy.begin(), gy.end());
  }
  nn::Adam<float> opt_g(g_params, opts.lr, opts.beta1);
  nn::Adam<float> opt_dx(m.d_x.params(), opts.lr, opts.beta1);
  nn::Adam<float> opt_dy(m.d_y.params(), opts.lr, opts.beta1);
  std::unique_ptr<nn::Adam<float>> opt_c;
  if (m.constraints.any())
    opt_c = std::make_unique<nn::Adam<float>>(m.constraint_net->params(), opts.lr, opts.beta1);

  const auto tasks = m.constraints.tasks();
  const std::size_t steps = std::min(real_x.size(), dummy_y.images.size());
  bool gate = false;
  double ema = 0.0;
  bool ema_init = false;

  std::vector<std::size_t> xi(real_x.size()), yi(dummy_y.images.size());
  for (std::size_t i = 0; i < xi.size(); ++i) xi[i] = i;
  for (std::size_t i = 0; i < yi.size(); ++i) yi[i] = i;

  for (int epoch = 0; epoch < opts.epochs; ++epoch) {
    Rng rng(Rng::derive(opts.seed, "gan-epoch:" + std::to_string(epoch)));
    rng.shuffle(xi);
    rng.shuffle(yi);
    GanBatchLosses sum;
    std::size_t batches = 0;

    for (std::size_t at = 0; at < steps; at += opts.batch) {
      const std::size_t hi = std::min(steps, at + opts.batch);
      std::vector<const EEGImage*> bx, by;
      for (std::size_t i = at; i < hi; ++i) {
        bx.push_back(&real_x[xi[i]]);
        by.push_back(&dummy_y.images[yi[i]]);
      }
      const auto xm = detail::to_signed(images_to_tensor(bx, m.image_size));
      const auto ym = detail::to_signed(images_to_tensor(by, m.image_size));
      GanBatchLosses L;

      // ---- generator update (G_X and G_Y jointly) ----
      opt_g.zero_grad();

      // direction X -> Y -> X
      const auto fake_y = m.g_x.forward(xm, true);
      Tensor<float> g_fake_y(fake_y.shape);
      {
        const auto d_fy = m.d_y.forward(fake_y, true);
        double adv = 0;
        for (std::size_t i = 0; i < d_fy.numel(); ++i)
          adv += (d_fy.data[i] - 1.0) * (d_fy.data[i] - 1.0);
        L.adv_G += adv / static_cast<double>(d_fy.numel());
        g_fake_y = m.d_y.backward(detail::lsgan_grad(d_fy, 1.0f, 1.0f));
      }
      {
        const auto rec_x = m.g_y.forward(fake_y, true);
        double c = 0;
        for (std::size_t i = 0; i < rec_x.numel(); ++i)
          c += std::abs(rec_x.data[i] - xm.data[i]);
        L.cycle += c / static_cast<double>(rec_x.numel());
        detail::add_into(g_fake_y, m.g_y.backward(detail::l1_grad(rec_x, xm, m.lambda_cycle)));
      }
      if (m.constraints.any()) {
        // C is a fixed judge here: eval-mode forwards, and any gradient that
        // lands in C's parameters is discarded before C's own update.
        auto& C = *m.constraint_net;
        const auto x01 = detail::to_unit(xm);
        const auto fake01 = detail::to_unit(fake_y);
        auto feat_real = C.features(x01, false);
        std::vector<std::vector<int>> pseudo(C.heads.size());
        for (const Task t : tasks) {
          const std::size_t h = C.head_index(t);
          pseudo[h] = nn::argmax_rows(C.head_logits(h, feat_real, false));
        }
        auto feat_fake = C.features(fake01, false);
        Tensor<float> dfeat(feat_fake.shape);
        for (const Task t : tasks) {
          const std::size_t h = C.head_index(t);
          auto logits = C.head_logits(h, feat_fake, false);
          Tensor<float> dl;
          L.semantic += nn::cross_entropy(logits, pseudo[h], gate ? &dl : nullptr,
                                          m.lambda_sem);
          if (gate) detail::add_into(dfeat, C.heads[h]->backward(dl));
        }
        if (gate) {
          auto dfake01 = C.trunk.backward(dfeat);
          // d fake01 / d fake_y = 0.5 inside the clamp-free tanh range
          for (std::size_t i = 0; i < dfake01.numel(); ++i) dfake01.data[i] *= 0.5f;
          detail::add_into(g_fake_y, dfake01);
        }
      }
      m.g_x.backward(g_fake_y);

      // direction Y -> X -> Y
      const auto fake_x = m.g_y.forward(ym, true);
      Tensor<float> g_fake_x(fake_x.shape);
      {
        const auto d_fx = m.d_x.forward(fake_x, true);
        double adv = 0;
        for (std::size_t i = 0; i < d_fx.numel(); ++i)
          adv += (d_fx.data[i] - 1.0) * (d_fx.data[i] - 1.0);
        L.adv_G += adv / static_cast<double>(d_fx.numel());
        g_fake_x = m.d_x.backward(detail::lsgan_grad(d_fx, 1.0f, 1.0f));
      }
      {
        const auto rec_y = m.g_x.forward(fake_x, true);
        double c = 0;
        for (std::size_t i = 0; i < rec_y.numel(); ++i)
          c += std::abs(rec_y.data[i] - ym.data[i]);
        L.cycle += c / static_cast<double>(rec_y.numel());
        detail::add_into(g_fake_x, m.g_x.backward(detail::l1_grad(rec_y, ym, m.lambda_cycle)));
      }
      m.g_y.backward(g_fake_x);
      opt_g.step();

      // ---- discriminator updates (real pass, then detached fake pass) ----
      auto d_update = [&](nn::Chain<float>& d, nn::Adam<float>& opt, const Tensor<float>& real,
                          const Tensor<float>& fake) {
        opt.zero_grad();
        const auto d_real = d.forward(real, true);
        double lr_ = 0;
        for (std::size_t i = 0; i < d_real.numel(); ++i)
          lr_ += (d_real.data[i] - 1.0) * (d_real.data[i] - 1.0);
        d.backward(detail::lsgan_grad(d_real, 1.0f, 0.5f));
        const auto d_fake = d.forward(fake, true);
        double lf = 0;
        for (std::size_t i = 0; i < d_fake.numel(); ++i)
          lf += d_fake.data[i] * d_fake.data[i];
        d.backward(detail::lsgan_grad(d_fake, 0.0f, 0.5f));
        opt.step();
        return 0.5 * lr_ / static_cast<double>(d_real.numel()) +
               0.5 * lf / static_cast<double>(d_fake.numel());
      };
      L.adv_D += d_update(m.d_y, opt_dy, ym, fake_y);
      L.adv_D += d_update(m.d_x, opt_dx, xm, fake_x);

      // ---- constraint classifier update on its task loss ----
      if (m.constraints.any()) {
        auto& C = *m.constraint_net;
        opt_c->zero_grad();
        const auto x01 = detail::to_unit(xm);
        auto feat = C.features(x01, true);
        Tensor<float> dfeat(feat.shape);
        for (const Task t : tasks) {
          const std::size_t h = C.head_index(t);
          auto logits = C.head_logits(h, feat, true);
          Tensor<float> dl;
          L.task += nn::cross_entropy(logits, detail::labels_of(bx, t), &dl, m.lambda_task);
          detail::add_into(dfeat, C.heads[h]->backward(dl));
        }
        C.trunk.backward(dfeat);
        opt_c->step();
        ema = ema_init ? 0.9 * ema + 0.1 * L.task : L.task;
        ema_init = true;
        if (ema < m.gate_threshold) gate = true;  // latches; never disables
      }

      L.total_G = L.adv_G + m.lambda_cycle * L.cycle + m.lambda_task * L.task +
                  m.lambda_sem * L.semantic * (gate ? 1.0 : 0.0);
      L.total_D = L.adv_D;
      if (!std::isfinite(L.total_G) || !std::isfinite(L.total_D))
        throw Diverged("non-finite GAN loss");

      sum.adv_G += L.adv_G;
      sum.adv_D += L.adv_D;
      sum.cycle += L.cycle;
      sum.task += L.task;
      sum.semantic += L.semantic;
      sum.total_G += L.total_G;
      sum.total_D += L.total_D;
      ++batches;
    }

    GanEpochStats st;
    st.epoch = epoch;
    const double n = static_cast<double>(std::max<std::size_t>(1, batches));
    st.mean = {sum.adv_G / n, sum.adv_D / n,    sum.cycle / n,  sum.task / n,
               sum.semantic / n, sum.total_G / n, sum.total_D / n};
    st.gate = gate;
    st.ema = ema;
    m.history.push_back(st);
    if (opts.verbose)
      std::fprintf(stderr, "gan epoch %d advG %.4f advD %.4f cycle %.4f task %.4f sem %.4f gate %d\n",
                   epoch, st.mean.adv_G, st.mean.adv_D, st.mean.cycle, st.mean.task,
                   st.mean.semantic, st.gate ? 1 : 0);
  }
}

inline std::string gan_history_csv(const std::vector<GanEpochStats>& history) {
  std::string out = "epoch,adv_G,adv_D,cycle,task,semantic,total_G,total_D,gate,ema\n";
  char line[256];
  for (const auto& st : history) {
    std::snprintf(line, sizeof(line), "%d,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%d,%.9g\n",
                  st.epoch, st.mean.adv_G, st.mean.adv_D, st.mean.cycle, st.mean.task,
                  st.mean.semantic, st.mean.total_G, st.mean.total_D, st.gate ? 1 : 0, st.ema);
    out += line;
  }
  return out;
}

// G_X applied to one real image; labels carry through for later evaluation.
inline EEGImage disguise(DisguiserModel& m, const EEGImage& image) {
  if (image.provenance != Provenance::real)
    throw WrongProvenance("disguise expects a real-provenance image");
  std::vector<const EEGImage*> batch{&image};
  const auto xm = detail::to_signed(images_to_tensor(batch, m.image_size));
  const auto out = detail::to_unit(m.g_x.forward(xm, false));
  EEGImage res = image;
  res.pixels.assign(out.data.begin(), out.data.end());
  res.provenance = Provenance::disguised;
  return res;
}

inline std::vector<EEGImage> disguise_all(DisguiserModel& m,
                                          const std::vector<EEGImage>& images) {
  std::vector<EEGImage> out;
  out.reserve(images.size());
  for (const auto& img : images) out.push_back(disguise(m, img));
  return out;
}

inline void save_disguiser(const std::filesystem::path& path, DisguiserModel& m) {
  nlohmann::json meta = {{"kind", "disguiser"},
                         {"constraints", m.constraints.name()},
                         {"lambda_cycle", m.lambda_cycle},
                         {"lambda_task", m.lambda_task},
                         {"lambda_sem", m.lambda_sem},
                         {"gate_threshold", m.gate_threshold},
                         {"image_size", m.image_size},
                         {"seed", m.seed}};
  std::vector<nn::NamedNet> nets = {{"g_x", m.g_x.params()},
                                    {"g_y", m.g_y.params()},
                                    {"d_x", m.d_x.params()},
                                    {"d_y", m.d_y.params()}};
  if (m.constraint_net) nets.push_back({"c", m.constraint_net->params()});
  nn::save_checkpoint(path, meta, nets);
}

inline DisguiserModel load_disguiser(const std::filesystem::path& path) {
  const auto meta = nn::checkpoint_meta(path);
  auto m = build_disguiser(ConstraintSet::from_name(meta.at("constraints").get<std::string>()),
                           meta.at("seed").get<std::uint64_t>(),
                           meta.at("image_size").get<int>());
  m.lambda_cycle = meta.at("lambda_cycle").get<float>();
  m.lambda_task = meta.at("lambda_task").get<float>();
  m.lambda_sem = meta.at("lambda_sem").get<float>();
  m.gate_threshold = meta.at("gate_threshold").get<double>();
  std::vector<nn::NamedNet> nets = {{"g_x", m.g_x.params()},
                                    {"g_y", m.g_y.params()},
                                    {"d_x", m.d_x.params()},
                                    {"d_y", m.d_y.params()}};
  if (m.constraint_net) nets.push_back({"c", m.constraint_net->params()});
  nn::load_checkpoint_into(path, nets);
  return m;
}

}  // namespace eegcloak
