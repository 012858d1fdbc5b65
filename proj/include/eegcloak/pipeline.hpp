#pragma once

#include <algorithm>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "eegcloak/classifier.hpp"
#include "eegcloak/config.hpp"
#include "eegcloak/dataset.hpp"
#include "eegcloak/disguiser.hpp"
#include "eegcloak/dummyid.hpp"
#include "eegcloak/evalreport.hpp"
#include "eegcloak/png.hpp"
#include "eegcloak/spectral.hpp"
#include "eegcloak/topomap.hpp"

namespace eegcloak::pipeline {

namespace fs = std::filesystem;

inline fs::path manifest_path(const RunConfig& c) { return c.workdir() / "manifest.json"; }
inline fs::path split_path(const RunConfig& c) { return c.workdir() / "split.json"; }
inline fs::path features_path(const RunConfig& c) { return c.workdir() / "features.json"; }
inline fs::path normalizer_path(const RunConfig& c) { return c.workdir() / "normalizer.json"; }
inline fs::path images_dir(const RunConfig& c, const std::string& split) {
  return c.workdir() / "images" / split;
}
inline fs::path dummies_dir(const RunConfig& c) { return c.workdir() / "dummies"; }
inline fs::path models_dir(const RunConfig& c) { return c.workdir() / "models"; }
inline fs::path reports_dir(const RunConfig& c) { return c.workdir() / "reports"; }
inline fs::path cls_model_path(const RunConfig& c, const std::string& task, bool joint) {
  return models_dir(c) / ("cls_" + task + (joint ? "_joint" : "") + ".eckp");
}
inline fs::path gan_model_path(const RunConfig& c, const std::string& constraints) {
  return models_dir(c) / ("gan_" + constraints + ".eckp");
}
inline fs::path disguised_dir(const RunConfig& c, const std::string& constraints) {
  return c.workdir() / "disguised" / constraints;
}

inline std::string sanitize_id(const std::string& id) {
  std::string out = id;
  for (char& ch : out)
    if (ch == '/' || ch == '\\') ch = '_';
  return out;
}

inline void write_json(const fs::path& p, const nlohmann::json& j) {
  write_file(p, j.dump(2) + "\n");
}

inline nlohmann::json read_json(const fs::path& p) {
  return nlohmann::json::parse(read_file(p));
}

// ---- stage: ingest ----

inline Manifest run_ingest(const RunConfig& cfg) {
  Manifest m = build_manifest(cfg.corpus_root);
  nlohmann::json j = manifest_to_json(m);
  j["config"] = cfg.echo;
  write_json(manifest_path(cfg), j);
  return m;
}

inline Manifest load_manifest_artifact(const RunConfig& cfg) {
  return manifest_from_json(read_json(manifest_path(cfg)));
}

// ---- stage: split ----

inline SplitAssignment run_split(const RunConfig& cfg) {
  const Manifest m = load_manifest_artifact(cfg);
  // ratios in Split enum order: train, test, validation = 70/10/20
  SplitAssignment s = split_within_subject(m, {0.7, 0.1, 0.2}, cfg.seed);
  nlohmann::json j = split_to_json(s);
  j["config"] = cfg.echo;
  write_json(split_path(cfg), j);
  return s;
}

inline SplitAssignment load_split_artifact(const RunConfig& cfg) {
  return split_from_json(read_json(split_path(cfg)));
}

// ---- stage: preprocess (features, normalizer, per-split images) ----

inline nlohmann::json features_to_json(const std::vector<BandFeatures>& feats) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& f : feats)
    arr.push_back({{"subject_id", f.subject_id},
                   {"alcoholism", f.alcoholism},
                   {"stimulus", f.stimulus},
                   {"trial_id", f.trial_id},
                   {"powers", f.powers}});
  return arr;
}

inline std::vector<BandFeatures> features_from_json(const nlohmann::json& arr) {
  std::vector<BandFeatures> out;
  for (const auto& j : arr) {
    BandFeatures f;
    f.subject_id = j.at("subject_id").get<std::string>();
    f.alcoholism = j.at("alcoholism").get<int>();
    f.stimulus = j.at("stimulus").get<int>();
    f.trial_id = j.at("trial_id").get<std::string>();
    f.powers = j.at("powers").get<std::vector<double>>();
    out.push_back(std::move(f));
  }
  return out;
}

inline nlohmann::json normalizer_to_json(const Normalizer& n) {
  return {{"lo", n.lo}, {"hi", n.hi},   {"p_lo", n.p_lo},
          {"p_hi", n.p_hi}, {"fit_split", n.fit_split}};
}

inline Normalizer normalizer_from_json(const nlohmann::json& j) {
  Normalizer n;
  n.lo = j.at("lo").get<std::array<double, kBands>>();
  n.hi = j.at("hi").get<std::array<double, kBands>>();
  n.p_lo = j.at("p_lo").get<double>();
  n.p_hi = j.at("p_hi").get<double>();
  n.fit_split = j.at("fit_split").get<std::string>();
  return n;
}

inline void run_preprocess(const RunConfig& cfg) {
  const Manifest m = load_manifest_artifact(cfg);
  const SplitAssignment split = load_split_artifact(cfg);
  const ElectrodeTable& table = ElectrodeTable::builtin();

  std::vector<BandFeatures> feats;
  feats.reserve(m.trials.size());
  for (const auto& ref : m.trials) {
    BandFeatures f = trial_band_features(load_trial(m, ref, table), cfg.bands.data());
    f.trial_id = ref.id;
    feats.push_back(std::move(f));
  }

  std::vector<BandFeatures> train_feats;
  for (const auto& f : feats)
    if (split.by_trial.at(f.trial_id) == Split::train) train_feats.push_back(f);
  const Normalizer norm =
      fit_normalizer(train_feats, cfg.normalizer_p_lo, cfg.normalizer_p_hi);

  const GridInterpolator interp(project_electrodes(table), cfg.image_size, cfg.image_size);
  for (const auto& f : feats) {
    const EEGImage img = assemble_image(f, interp, norm);
    const std::string split_name_str = split_name(split.by_trial.at(f.trial_id));
    save_eegimg(images_dir(cfg, split_name_str) / (sanitize_id(f.trial_id) + ".eimg"), img);
  }

  nlohmann::json fj = {{"config", cfg.echo}, {"features", features_to_json(feats)}};
  write_json(features_path(cfg), fj);
  nlohmann::json nj = normalizer_to_json(norm);
  nj["config"] = cfg.echo;
  write_json(normalizer_path(cfg), nj);
}

inline std::vector<BandFeatures> load_features_artifact(const RunConfig& cfg) {
  return features_from_json(read_json(features_path(cfg)).at("features"));
}

inline Normalizer load_normalizer_artifact(const RunConfig& cfg) {
  return normalizer_from_json(read_json(normalizer_path(cfg)));
}

inline std::vector<EEGImage> load_images_dir(const fs::path& dir) {
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".eimg")
      paths.push_back(entry.path());
  std::sort(paths.begin(), paths.end());
  std::vector<EEGImage> out;
  out.reserve(paths.size());
  for (const auto& p : paths) out.push_back(load_eegimg(p));
  return out;
}

inline std::vector<EEGImage> load_split_images(const RunConfig& cfg, const std::string& split) {
  return load_images_dir(images_dir(cfg, split));
}

// ---- stage: dummies ----

inline DummySet run_dummies(const RunConfig& cfg) {
  const SplitAssignment split = load_split_artifact(cfg);
  auto feats = load_features_artifact(cfg);
  std::vector<BandFeatures> train_feats;
  for (const auto& f : feats)
    if (split.by_trial.at(f.trial_id) == Split::train) train_feats.push_back(std::move(f));

  const Normalizer norm = load_normalizer_artifact(cfg);
  const GridInterpolator interp(project_electrodes(ElectrodeTable::builtin()), cfg.image_size,
                                cfg.image_size);
  DummySet set = make_dummy_set(train_feats, cfg.dummy_k, cfg.dummy_m,
                                Rng::derive(cfg.seed, "dummies"), interp, norm);
  nlohmann::json meta = {{"config", cfg.echo},
                         {"k", set.k},
                         {"m", set.m},
                         {"seed", set.seed},
                         {"contributors", set.contributors},
                         {"count", set.images.size()}};
  for (std::size_t i = 0; i < set.images.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "dummy_%03zu.eimg", i);
    save_eegimg(dummies_dir(cfg) / name, set.images[i]);
  }
  write_json(dummies_dir(cfg) / "dummies.json", meta);
  return set;
}

inline DummySet load_dummies_artifact(const RunConfig& cfg) {
  const auto meta = read_json(dummies_dir(cfg) / "dummies.json");
  DummySet set;
  set.k = meta.at("k").get<int>();
  set.m = meta.at("m").get<int>();
  set.seed = meta.at("seed").get<std::uint64_t>();
  set.contributors = meta.at("contributors").get<std::vector<std::vector<std::string>>>();
  set.images = load_images_dir(dummies_dir(cfg));
  return set;
}

// ---- stage: train-cls ----

inline fs::path run_train_cls(const RunConfig& cfg) {
  const Task task = task_from_name(cfg.cls_task);
  auto train = load_split_images(cfg, "train");
  auto val = load_split_images(cfg, "validation");

  std::vector<std::string> subjects;
  if (task == Task::identity) subjects = identity_vocab(train);
  NetConfig nc;
  nc.depth = cfg.cls_depth;
  nc.image_size = cfg.image_size;
  nc.heads = {{task, head_size_for(task, static_cast<int>(subjects.size()))}};
  auto net =
      build_net(nc, Rng::derive(cfg.seed, "train-cls:" + cfg.cls_task), std::move(subjects));

  DummySet dummies;
  TrainOptions opts;
  opts.epochs = cfg.cls_epochs;
  opts.batch = cfg.cls_batch;
  opts.lr = static_cast<float>(cfg.cls_lr);
  opts.joint = cfg.cls_joint;
  opts.seed = Rng::derive(cfg.seed, "train-cls-sgd:" + cfg.cls_task);
  if (cfg.cls_joint) {
    dummies = load_dummies_artifact(cfg);
    opts.dummies = &dummies;
  }
  const auto result = train_classifier(net, train, val, opts);

  const fs::path path = cls_model_path(cfg, cfg.cls_task, cfg.cls_joint);
  nlohmann::json extra = {{"config", cfg.echo},
                          {"best_val_accuracy", result.best_val_accuracy},
                          {"best_epoch", result.best_epoch}};
  save_classifier(path, net, extra);
  write_file(path.string() + ".history.csv", history_csv(result.history));
  return path;
}

// ---- stage: train-gan ----

inline fs::path run_train_gan(const RunConfig& cfg) {
  auto train = load_split_images(cfg, "train");
  auto dummies = load_dummies_artifact(cfg);
  auto model = build_disguiser(ConstraintSet::from_name(cfg.constraints),
                               Rng::derive(cfg.seed, "train-gan:" + cfg.constraints),
                               cfg.image_size);
  model.lambda_cycle = static_cast<float>(cfg.lambda_cycle);
  model.lambda_task = static_cast<float>(cfg.lambda_task);
  model.lambda_sem = static_cast<float>(cfg.lambda_sem);
  model.gate_threshold = cfg.gate_threshold;

  GanTrainOptions opts;
  opts.epochs = cfg.gan_epochs;
  opts.batch = cfg.gan_batch;
  opts.lr = static_cast<float>(cfg.gan_lr);
  opts.beta1 = static_cast<float>(cfg.gan_beta1);
  opts.seed = Rng::derive(cfg.seed, "train-gan-sgd:" + cfg.constraints);
  train_disguiser(model, train, dummies, opts);

  const fs::path path = gan_model_path(cfg, cfg.constraints);
  save_disguiser(path, model);
  write_file(path.string() + ".history.csv", gan_history_csv(model.history));
  return path;
}

// ---- stage: disguise ----

inline void run_disguise(const RunConfig& cfg, const fs::path& model_path, const fs::path& in,
                         const fs::path& out) {
  auto model = load_disguiser(model_path);
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(in))
    if (entry.is_regular_file() && entry.path().extension() == ".eimg")
      paths.push_back(entry.path());
  std::sort(paths.begin(), paths.end());
  for (const auto& p : paths)
    save_eegimg(out / p.filename(), disguise(model, load_eegimg(p)));
}

// ---- stage: eval ----

inline nlohmann::json run_eval(const RunConfig& cfg, const fs::path& model_path,
                               const fs::path& images, const std::string& dataset_name,
                               const fs::path& report_out = {}) {
  auto net = load_classifier(model_path);
  if (net.config.heads.size() != 1) throw InvalidConfig("evaluation model must be single-head");
  auto imgs = load_images_dir(images);
  auto report =
      evaluate_model(net, imgs, net.config.heads[0].task, dataset_name, cfg.echo).json();
  if (!report_out.empty()) write_json(report_out, report);
  return report;
}

// ---- stage: ablate ----

// Evaluates all four constraint regimes with shared classifiers on the same
// evaluation split, disguising the identical input set with each regime's
// generator, and emits the grid with the reference row.
inline nlohmann::json run_ablate(const RunConfig& cfg,
                                 const std::string& eval_split = "validation") {
  auto eval_images = load_split_images(cfg, eval_split);
  auto id_net = load_classifier(cls_model_path(cfg, "identity", false));
  auto alc_net = load_classifier(cls_model_path(cfg, "alcoholism", false));
  auto sti_net = load_classifier(cls_model_path(cfg, "stimulus", false));

  auto metrics_on = [&](const std::vector<EEGImage>& imgs) {
    RegimeMetrics m;
    auto idr = evaluate_model(id_net, imgs, Task::identity);
    m.id_acc = idr.accuracy;
    auto alcr = evaluate_model(alc_net, imgs, Task::alcoholism);
    m.alc_sens = alcr.sensitivity;
    m.alc_spec = alcr.specificity;
    auto stir = evaluate_model(sti_net, imgs, Task::stimulus);
    m.sti_acc = stir.accuracy;
    return m;
  };

  const RegimeMetrics original = metrics_on(eval_images);
  std::map<std::string, RegimeMetrics> regimes;
  for (const std::string name : {"none", "alc", "sti", "both"}) {
    const fs::path mp = gan_model_path(cfg, name);
    if (!fs::exists(mp)) throw MissingRegime("no trained disguiser for regime " + name);
    auto model = load_disguiser(mp);
    regimes[name] = metrics_on(disguise_all(model, eval_images));
  }

  auto report = ablation_report(regimes, original, cfg.echo);
  report["eval_split"] = eval_split;
  write_json(reports_dir(cfg) / "ablation.json", report);
  write_file(reports_dir(cfg) / "ablation.txt", ablation_text(report));
  write_file(reports_dir(cfg) / "ablation.csv", ablation_csv(report));
  return report;
}

// ---- stage: export-png ----

inline int run_export_png(const fs::path& in, const fs::path& out) {
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(in))
    if (entry.is_regular_file() && entry.path().extension() == ".eimg")
      paths.push_back(entry.path());
  std::sort(paths.begin(), paths.end());
  for (const auto& p : paths)
    export_png(out / (p.stem().string() + ".png"), load_eegimg(p));
  return static_cast<int>(paths.size());
}

}  // namespace eegcloak::pipeline
