#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "eegcloak/dummyid.hpp"
#include "eegcloak/errors.hpp"
#include "eegcloak/nn/adam.hpp"
#include "eegcloak/nn/checkpoint.hpp"
#include "eegcloak/nn/loss.hpp"
#include "eegcloak/nn/resnet.hpp"
#include "eegcloak/rng.hpp"
#include "eegcloak/topomap.hpp"

namespace eegcloak {

enum class Task { identity = 0, alcoholism = 1, stimulus = 2 };

inline const char* task_name(Task t) {
  switch (t) {
    case Task::identity: return "identity";
    case Task::alcoholism: return "alcoholism";
    case Task::stimulus: return "stimulus";
  }
  throw InvalidConfig("unknown task");
}

inline Task task_from_name(const std::string& s) {
  if (s == "identity") return Task::identity;
  if (s == "alcoholism") return Task::alcoholism;
  if (s == "stimulus") return Task::stimulus;
  throw InvalidConfig("unknown task name: " + s);
}

struct HeadSpec {
  Task task = Task::alcoholism;
  int size = 2;
};

struct NetConfig {
  int depth = 18;
  std::vector<HeadSpec> heads;  // one per task; single-head for plain classifiers
  int image_size = kDefaultImageSize;
};

// Sorted distinct real-subject vocabulary; the identity head indexes into it.
inline std::vector<std::string> identity_vocab(const std::vector<EEGImage>& images) {
  std::set<std::string> ids;
  for (const auto& img : images)
    if (img.provenance == Provenance::real || img.provenance == Provenance::disguised)
      ids.insert(img.subject_id);
  return {ids.begin(), ids.end()};
}

inline int head_size_for(Task task, int n_subjects) {
  switch (task) {
    case Task::identity:
      if (n_subjects < 2) throw InvalidConfig("identity task needs at least 2 subjects");
      return n_subjects;
    case Task::alcoholism: return 2;
    case Task::stimulus: return kStimulusClasses;
  }
  throw InvalidConfig("unknown task");
}

inline int label_for(const EEGImage& img, Task task,
                     const std::vector<std::string>& subjects) {
  switch (task) {
    case Task::identity: {
      if (img.provenance == Provenance::dummy)
        throw MissingLabel("dummy image has no identity label");
      const auto it = std::lower_bound(subjects.begin(), subjects.end(), img.subject_id);
      if (it == subjects.end() || *it != img.subject_id)
        throw MissingLabel("subject not in identity vocabulary: " + img.subject_id);
      return static_cast<int>(it - subjects.begin());
    }
    case Task::alcoholism: return img.alcoholism;
    case Task::stimulus: {
      if (img.stimulus < 0 || img.stimulus >= kStimulusClasses)
        throw MissingLabel("image has no stimulus label");
      return img.stimulus;
    }
  }
  throw InvalidConfig("unknown task");
}

inline Tensor<float> images_to_tensor(const std::vector<const EEGImage*>& batch,
                                      int image_size = kDefaultImageSize) {
  if (batch.empty()) throw ShapeMismatch("empty image batch");
  Tensor<float> x({static_cast<int>(batch.size()), 3, image_size, image_size});
  const std::size_t per = 3u * static_cast<std::size_t>(image_size) * image_size;
  for (std::size_t n = 0; n < batch.size(); ++n) {
    const EEGImage& img = *batch[n];
    if (img.h != image_size || img.w != image_size || img.pixels.size() != per)
      throw ShapeMismatch("image size does not match network input");
    std::copy(img.pixels.begin(), img.pixels.end(), x.data.begin() + n * per);
  }
  return x;
}

// Residual trunk with one softmax head per configured task. Multi-head nets
// share the trunk; heads are addressed by index in config.heads order.
struct ClassifierNet {
  NetConfig config;
  std::uint64_t seed = 0;
  std::vector<std::string> subjects;  // identity vocabulary (may be empty)
  nn::Chain<float> trunk;
  std::vector<std::unique_ptr<nn::Linear<float>>> heads;

  Tensor<float> features(const Tensor<float>& x, bool train) {
    return trunk.forward(x, train);
  }
  Tensor<float> head_logits(std::size_t h, const Tensor<float>& feat, bool train) {
    return heads.at(h)->forward(feat, train);
  }
  // Single forward through trunk + one head (most callers are single-head).
  Tensor<float> logits(const Tensor<float>& x, bool train, std::size_t h = 0) {
    return head_logits(h, features(x, train), train);
  }
  // Backward from one head's logit gradient all the way to the input.
  Tensor<float> backprop(const Tensor<float>& dlogits, std::size_t h = 0) {
    return trunk.backward(heads.at(h)->backward(dlogits));
  }

  std::vector<nn::Param<float>*> params() {
    auto out = trunk.params();
    for (auto& head : heads) head->collect(out);
    return out;
  }
  std::size_t param_count() {
    std::size_t n = 0;
    for (auto* p : params())
      if (p->trainable) n += p->value.numel();
    return n;
  }

  std::size_t head_index(Task t) const {
    for (std::size_t i = 0; i < config.heads.size(); ++i)
      if (config.heads[i].task == t) return i;
    throw InvalidConfig(std::string("net has no head for task ") + task_name(t));
  }
};

inline ClassifierNet build_net(const NetConfig& config, std::uint64_t seed,
                               std::vector<std::string> subjects = {}) {
  if (config.heads.empty()) throw InvalidConfig("network needs at least one head");
  for (const auto& h : config.heads) {
    if (h.size < 2) throw InvalidConfig("head size must be at least 2");
    if (h.task == Task::identity &&
        h.size != static_cast<int>(subjects.size()))
      throw InvalidConfig("identity head size must match the subject vocabulary");
  }
  ClassifierNet net;
  net.config = config;
  net.seed = seed;
  net.subjects = std::move(subjects);
  Rng rng(Rng::derive(seed, "classifier"));
  net.trunk = nn::make_resnet_trunk<float>(rng, config.depth);
  const int feat = nn::resnet_feature_dim(config.depth);
  for (std::size_t i = 0; i < config.heads.size(); ++i)
    net.heads.push_back(std::make_unique<nn::Linear<float>>(
        "head" + std::to_string(i), rng, feat, config.heads[i].size));
  return net;
}

// Convenience single-task constructor with a manifest-derived identity head.
inline ClassifierNet build_task_net(int depth, Task task, std::uint64_t seed,
                                    std::vector<std::string> subjects = {}) {
  NetConfig cfg;
  cfg.depth = depth;
  cfg.heads = {{task, head_size_for(task, static_cast<int>(subjects.size()))}};
  return build_net(cfg, seed, std::move(subjects));
}

struct Prediction {
  Tensor<float> probs;      // [N, head size]
  std::vector<int> labels;  // argmax per row
};

inline Prediction predict_batch(ClassifierNet& net, const std::vector<const EEGImage*>& images,
                                std::size_t head = 0) {
  auto logits = net.logits(images_to_tensor(images, net.config.image_size), false, head);
  Prediction p;
  p.probs = nn::softmax_rows(logits);
  p.labels = nn::argmax_rows(logits);
  return p;
}

inline std::vector<const EEGImage*> image_ptrs(const std::vector<EEGImage>& images) {
  std::vector<const EEGImage*> out;
  out.reserve(images.size());
  for (const auto& img : images) out.push_back(&img);
  return out;
}

inline double accuracy(ClassifierNet& net, const std::vector<EEGImage>& images, Task task,
                       std::size_t head = 0, int batch = 64) {
  if (images.empty()) throw EmptyTrainingSet("no images to evaluate");
  std::size_t correct = 0;
  for (std::size_t at = 0; at < images.size(); at += batch) {
    std::vector<const EEGImage*> chunk;
    for (std::size_t i = at; i < std::min(images.size(), at + batch); ++i)
      chunk.push_back(&images[i]);
    const auto pred = predict_batch(net, chunk, head);
    for (std::size_t i = 0; i < chunk.size(); ++i)
      if (pred.labels[i] == label_for(*chunk[i], task, net.subjects)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(images.size());
}

struct EpochStats {
  int epoch = 0;
  double train_loss = 0.0;
  double val_accuracy = 0.0;
};

struct TrainOptions {
  int epochs = 50;
  int batch = 64;
  float lr = 1e-3f;
  bool joint = false;
  const DummySet* dummies = nullptr;
  std::uint64_t seed = 0;
  bool verbose = false;
};

struct TrainResult {
  std::vector<EpochStats> history;
  double best_val_accuracy = 0.0;
  int best_epoch = -1;
};

namespace detail {

inline std::vector<Tensor<float>> snapshot_params(ClassifierNet& net) {
  std::vector<Tensor<float>> out;
  for (auto* p : net.params()) out.push_back(p->value);
  return out;
}

inline void restore_params(ClassifierNet& net, const std::vector<Tensor<float>>& snap) {
  auto params = net.params();
  for (std::size_t i = 0; i < params.size(); ++i) params[i]->value = snap[i];
}

}  // namespace detail

// Single-head supervised training: Adam, best-validation checkpointing, and
// optional joint training that appends dummy exemplars to the training pool.
inline TrainResult train_classifier(ClassifierNet& net, const std::vector<EEGImage>& train_set,
                                    const std::vector<EEGImage>& val_set,
                                    const TrainOptions& opts) {
  if (net.config.heads.size() != 1)
    throw InvalidConfig("train_classifier expects a single-head network");
  const Task task = net.config.heads[0].task;
  if (train_set.empty() || val_set.empty()) throw EmptyTrainingSet("empty train or val set");
  if (opts.joint) {
    if (task == Task::identity)
      throw JointIdentityUnsupported("dummy images carry no real identity label");
    if (!opts.dummies) throw InvalidConfig("joint training requires a dummy set");
  }

  std::vector<const EEGImage*> pool = image_ptrs(train_set);
  if (opts.joint)
    for (const auto& img : opts.dummies->images) pool.push_back(&img);

  std::vector<int> labels(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i)
    labels[i] = label_for(*pool[i], task, net.subjects);

  nn::Adam<float> opt(net.params(), opts.lr);
  TrainResult result;
  std::vector<Tensor<float>> best;

  std::vector<std::size_t> order(pool.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (int epoch = 0; epoch < opts.epochs; ++epoch) {
    Rng rng(Rng::derive(opts.seed, "cls-epoch:" + std::to_string(epoch)));
    rng.shuffle(order);
    double loss_sum = 0.0;
    std::size_t batches = 0;
    for (std::size_t at = 0; at < order.size(); at += opts.batch) {
      std::vector<const EEGImage*> batch;
      std::vector<int> y;
      for (std::size_t i = at; i < std::min(order.size(), at + opts.batch); ++i) {
        batch.push_back(pool[order[i]]);
        y.push_back(labels[order[i]]);
      }
      auto logits = net.logits(images_to_tensor(batch, net.config.image_size), true);
      Tensor<float> dlogits;
      const double loss = nn::cross_entropy(logits, y, &dlogits);
      if (!std::isfinite(loss)) throw Diverged("non-finite training loss");
      opt.zero_grad();
      net.backprop(dlogits);
      opt.step();
      loss_sum += loss;
      ++batches;
    }
    EpochStats st;
    st.epoch = epoch;
    st.train_loss = loss_sum / std::max<std::size_t>(1, batches);
    st.val_accuracy = accuracy(net, val_set, task, 0, opts.batch);
    result.history.push_back(st);
    if (st.val_accuracy > result.best_val_accuracy || result.best_epoch < 0) {
      result.best_val_accuracy = st.val_accuracy;
      result.best_epoch = epoch;
      best = detail::snapshot_params(net);
    }
    if (opts.verbose)
      std::fprintf(stderr, "epoch %d loss %.4f val %.4f\n", epoch, st.train_loss,
                   st.val_accuracy);
  }
  detail::restore_params(net, best);
  return result;
}

inline std::string history_csv(const std::vector<EpochStats>& history) {
  std::string out = "epoch,train_loss,val_accuracy\n";
  char line[96];
  for (const auto& st : history) {
    std::snprintf(line, sizeof(line), "%d,%.9g,%.9g\n", st.epoch, st.train_loss,
                  st.val_accuracy);
    out += line;
  }
  return out;
}

inline nlohmann::json classifier_meta(const ClassifierNet& net) {
  nlohmann::json heads = nlohmann::json::array();
  for (const auto& h : net.config.heads)
    heads.push_back({{"task", task_name(h.task)}, {"size", h.size}});
  return {{"kind", "classifier"},
          {"depth", net.config.depth},
          {"image_size", net.config.image_size},
          {"heads", heads},
          {"seed", net.seed},
          {"subjects", net.subjects}};
}

inline void save_classifier(const std::filesystem::path& path, ClassifierNet& net,
                            nlohmann::json extra_meta = {}) {
  nlohmann::json meta = classifier_meta(net);
  if (!extra_meta.is_null())
    for (auto& [k, v] : extra_meta.items()) meta[k] = v;
  nn::save_checkpoint(path, meta, {{"net", net.params()}});
}

inline ClassifierNet load_classifier(const std::filesystem::path& path) {
  const auto meta = nn::checkpoint_meta(path);
  NetConfig cfg;
  cfg.depth = meta.at("depth").get<int>();
  cfg.image_size = meta.at("image_size").get<int>();
  for (const auto& h : meta.at("heads"))
    cfg.heads.push_back(
        {task_from_name(h.at("task").get<std::string>()), h.at("size").get<int>()});
  auto net = build_net(cfg, meta.at("seed").get<std::uint64_t>(),
                       meta.at("subjects").get<std::vector<std::string>>());
  nn::load_checkpoint_into(path, {{"net", net.params()}});
  return net;
}

}  // namespace eegcloak
