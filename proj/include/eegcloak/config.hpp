#pragma once

#include <array>
#include <cstdlib>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "eegcloak/disguiser.hpp"
#include "eegcloak/errors.hpp"
#include "eegcloak/io_util.hpp"
#include "eegcloak/spectral.hpp"

namespace eegcloak {

// Run-wide configuration. The JSON schema is strict: any key not present in
// the defaults is rejected by name, so typos in loss weights cannot silently
// skew a run.
struct RunConfig {
  std::string corpus_root = ".";
  std::string work_dir;  // default: $EEG_CLOAK_WORKDIR or "work"
  std::uint64_t seed = 1;
  int image_size = kDefaultImageSize;

  std::array<BandSpec, kBands> bands = {kBandTheta, kBandAlpha, kBandBeta};
  double normalizer_p_lo = 1.0, normalizer_p_hi = 99.0;

  int dummy_k = 2, dummy_m = 10;

  int cls_depth = 18;
  std::string cls_task = "alcoholism";
  int cls_epochs = 50, cls_batch = 64;
  double cls_lr = 1e-3;
  bool cls_joint = false;

  int gan_epochs = 30, gan_batch = 4;
  double gan_lr = 2e-4, gan_beta1 = 0.5;
  double lambda_cycle = 10.0, lambda_task = 1.0, lambda_sem = 1.0;
  double gate_threshold = 1.0;
  std::string constraints = "alc";

  nlohmann::json echo;  // the fully-merged config, embedded into artifacts

  std::filesystem::path workdir() const { return work_dir; }
};

namespace detail {

inline nlohmann::json config_defaults() {
  return {
      {"corpus_root", "."},
      {"work_dir", ""},
      {"seed", 1},
      {"image_size", kDefaultImageSize},
      {"bands",
       {{"theta", {4, 8}}, {"alpha", {8, 13}}, {"beta", {13, 30}}}},
      {"normalizer", {{"p_lo", 1.0}, {"p_hi", 99.0}}},
      {"dummy", {{"k", 2}, {"m", 10}}},
      {"classifier",
       {{"depth", 18},
        {"task", "alcoholism"},
        {"epochs", 50},
        {"batch", 64},
        {"lr", 1e-3},
        {"joint", false}}},
      {"gan",
       {{"epochs", 30},
        {"batch", 4},
        {"lr", 2e-4},
        {"beta1", 0.5},
        {"lambda_cycle", 10.0},
        {"lambda_task", 1.0},
        {"lambda_sem", 1.0},
        {"gate_threshold", 1.0},
        {"constraints", "alc"}}},
  };
}

inline void merge_strict(nlohmann::json& base, const nlohmann::json& user,
                         const std::string& prefix) {
  if (!user.is_object())
    throw ConfigInvalid("expected a JSON object at " + (prefix.empty() ? "top level" : prefix));
  for (const auto& [key, value] : user.items()) {
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    if (!base.contains(key)) throw ConfigInvalid("unknown config key: " + path);
    if (base.at(key).is_object() && !base.at(key).empty())
      merge_strict(base.at(key), value, path);
    else
      base[key] = value;
  }
}

inline void parse_band(const nlohmann::json& j, const std::string& name, BandSpec& out) {
  const auto& edges = j.at(name);
  if (!edges.is_array() || edges.size() != 2)
    throw ConfigInvalid("bands." + name + " must be [lo, hi]");
  out.lo_hz = edges[0].get<int>();
  out.hi_hz = edges[1].get<int>();
  if (out.lo_hz < 0 || out.hi_hz <= out.lo_hz || out.hi_hz > kSpectrumBins)
    throw ConfigInvalid("bands." + name + " edges out of range");
}

}  // namespace detail

inline RunConfig config_from_json(const nlohmann::json& user) {
  auto merged = detail::config_defaults();
  detail::merge_strict(merged, user, "");

  RunConfig c;
  try {
    c.corpus_root = merged.at("corpus_root").get<std::string>();
    c.work_dir = merged.at("work_dir").get<std::string>();
    c.seed = merged.at("seed").get<std::uint64_t>();
    c.image_size = merged.at("image_size").get<int>();
    c.bands[0].name = "theta";
    c.bands[1].name = "alpha";
    c.bands[2].name = "beta";
    detail::parse_band(merged.at("bands"), "theta", c.bands[0]);
    detail::parse_band(merged.at("bands"), "alpha", c.bands[1]);
    detail::parse_band(merged.at("bands"), "beta", c.bands[2]);
    c.normalizer_p_lo = merged.at("normalizer").at("p_lo").get<double>();
    c.normalizer_p_hi = merged.at("normalizer").at("p_hi").get<double>();
    c.dummy_k = merged.at("dummy").at("k").get<int>();
    c.dummy_m = merged.at("dummy").at("m").get<int>();
    const auto& cls = merged.at("classifier");
    c.cls_depth = cls.at("depth").get<int>();
    c.cls_task = cls.at("task").get<std::string>();
    c.cls_epochs = cls.at("epochs").get<int>();
    c.cls_batch = cls.at("batch").get<int>();
    c.cls_lr = cls.at("lr").get<double>();
    c.cls_joint = cls.at("joint").get<bool>();
    const auto& gan = merged.at("gan");
    c.gan_epochs = gan.at("epochs").get<int>();
    c.gan_batch = gan.at("batch").get<int>();
    c.gan_lr = gan.at("lr").get<double>();
    c.gan_beta1 = gan.at("beta1").get<double>();
    c.lambda_cycle = gan.at("lambda_cycle").get<double>();
    c.lambda_task = gan.at("lambda_task").get<double>();
    c.lambda_sem = gan.at("lambda_sem").get<double>();
    c.gate_threshold = gan.at("gate_threshold").get<double>();
    c.constraints = gan.at("constraints").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigInvalid(std::string("invalid config value: ") + e.what());
  }

  if (c.image_size < 8) throw ConfigInvalid("image_size must be at least 8");
  if (c.seed == 0) throw ConfigInvalid("seed must be nonzero");
  if (c.dummy_k < 1 || c.dummy_m < 1) throw ConfigInvalid("dummy.k and dummy.m must be >= 1");
  if (c.cls_depth != 18 && c.cls_depth != 34 && c.cls_depth != 50)
    throw ConfigInvalid("classifier.depth must be 18, 34 or 50");
  try {
    task_from_name(c.cls_task);
    ConstraintSet::from_name(c.constraints);
  } catch (const Error& e) {
    throw ConfigInvalid(e.what());
  }
  if (c.cls_epochs < 1 || c.cls_epochs > 50)
    throw ConfigInvalid("classifier.epochs must be in [1, 50]");
  if (c.gan_epochs < 1 || c.cls_batch < 1 || c.gan_batch < 1 || c.cls_lr <= 0 || c.gan_lr <= 0)
    throw ConfigInvalid("training hyperparameters must be positive");
  if (!(c.normalizer_p_lo >= 0 && c.normalizer_p_lo < c.normalizer_p_hi &&
        c.normalizer_p_hi <= 100))
    throw ConfigInvalid("normalizer percentiles must satisfy 0 <= p_lo < p_hi <= 100");

  if (c.work_dir.empty()) {
    const char* env = std::getenv("EEG_CLOAK_WORKDIR");
    c.work_dir = env && *env ? env : "work";
    merged["work_dir"] = c.work_dir;
  }
  c.echo = merged;
  return c;
}

// An empty or missing-keys file yields all defaults.
inline RunConfig load_config(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  nlohmann::json user;
  if (text.find_first_not_of(" \t\r\n") == std::string::npos)
    user = nlohmann::json::object();
  else
    try {
      user = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigInvalid(std::string("config is not valid JSON: ") + e.what());
    }
  return config_from_json(user);
}

}  // namespace eegcloak
