#pragma once

#include <cstdio>
#include <cstring>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "eegcloak/classifier.hpp"
#include "eegcloak/errors.hpp"

namespace eegcloak {

// counts[i][j] = #{truth == i, predicted == j}; for the binary alcoholism
// task the positive class is "alcoholic" (label 1).
struct ConfusionMatrix {
  int k = 0;
  std::vector<long long> counts;  // k*k, row = truth

  long long at(int truth, int pred) const {
    return counts[static_cast<std::size_t>(truth) * k + pred];
  }
  long long total() const {
    long long t = 0;
    for (long long c : counts) t += c;
    return t;
  }
  long long tp() const { return at(1, 1); }
  long long fn() const { return at(1, 0); }
  long long tn() const { return at(0, 0); }
  long long fp() const { return at(0, 1); }
};

inline ConfusionMatrix confusion(const std::vector<int>& preds, const std::vector<int>& truth,
                                 int k) {
  if (preds.size() != truth.size())
    throw LengthMismatch("prediction and truth lengths differ");
  ConfusionMatrix cm;
  cm.k = k;
  cm.counts.assign(static_cast<std::size_t>(k) * k, 0);
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (preds[i] < 0 || preds[i] >= k || truth[i] < 0 || truth[i] >= k)
      throw LabelOutOfRange("label outside [0, k)");
    ++cm.counts[static_cast<std::size_t>(truth[i]) * k + preds[i]];
  }
  return cm;
}

struct BinaryMetrics {
  double accuracy = 0.0;
  std::optional<double> sensitivity;  // absent when TP+FN = 0
  std::optional<double> specificity;  // absent when TN+FP = 0
};

inline BinaryMetrics binary_metrics(const ConfusionMatrix& cm) {
  if (cm.k != 2) throw ShapeMismatch("binary metrics need a 2x2 matrix");
  const long long total = cm.total();
  if (total == 0) throw EmptyMatrix("no evaluated samples");
  BinaryMetrics m;
  m.accuracy = static_cast<double>(cm.tp() + cm.tn()) / static_cast<double>(total);
  if (cm.tp() + cm.fn() > 0)
    m.sensitivity = static_cast<double>(cm.tp()) / static_cast<double>(cm.tp() + cm.fn());
  if (cm.tn() + cm.fp() > 0)
    m.specificity = static_cast<double>(cm.tn()) / static_cast<double>(cm.tn() + cm.fp());
  return m;
}

inline double multiclass_accuracy(const ConfusionMatrix& cm) {
  const long long total = cm.total();
  if (total == 0) throw EmptyMatrix("no evaluated samples");
  long long diag = 0;
  for (int i = 0; i < cm.k; ++i) diag += cm.at(i, i);
  return static_cast<double>(diag) / static_cast<double>(total);
}

// FNV-1a over the serialized parameter bytes; identifies the exact weights.
inline std::string model_checksum(ClassifierNet& net) {
  std::uint64_t h = 1469598103934665603ull;
  for (auto* p : net.params())
    for (float v : p->value.data) {
      std::uint32_t bits;
      std::memcpy(&bits, &v, 4);
      for (int b = 0; b < 4; ++b) {
        h ^= (bits >> (8 * b)) & 0xff;
        h *= 1099511628211ull;
      }
    }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct MetricsReport {
  Task task = Task::alcoholism;
  std::vector<int> predictions;
  std::vector<int> truth;
  ConfusionMatrix cm;
  double accuracy = 0.0;
  std::optional<double> sensitivity, specificity;
  std::string dataset;   // split / provenance identity
  std::string checksum;  // model parameter checksum
  nlohmann::json config; // config echo

  nlohmann::json json() const {
    nlohmann::json j = {{"task", task_name(task)},
                        {"dataset", dataset},
                        {"model_checksum", checksum},
                        {"accuracy", accuracy},
                        {"confusion", nlohmann::json::array()},
                        {"predictions", predictions},
                        {"truth", truth},
                        {"config", config}};
    for (int i = 0; i < cm.k; ++i) {
      auto row = nlohmann::json::array();
      for (int c = 0; c < cm.k; ++c) row.push_back(cm.at(i, c));
      j["confusion"].push_back(row);
    }
    if (sensitivity) j["sensitivity"] = *sensitivity;
    if (specificity) j["specificity"] = *specificity;
    return j;
  }
};

inline MetricsReport evaluate_model(ClassifierNet& net, const std::vector<EEGImage>& images,
                                    Task task, const std::string& dataset = "",
                                    nlohmann::json config = {}) {
  if (net.config.heads.size() != 1 || net.config.heads[0].task != task)
    throw InvalidConfig("evaluation net must have exactly the evaluated task head");
  MetricsReport r;
  r.task = task;
  r.dataset = dataset;
  r.checksum = model_checksum(net);
  r.config = std::move(config);
  const int k = net.config.heads[0].size;
  for (std::size_t at = 0; at < images.size(); at += 64) {
    std::vector<const EEGImage*> chunk;
    for (std::size_t i = at; i < std::min(images.size(), at + 64); ++i)
      chunk.push_back(&images[i]);
    const auto pred = predict_batch(net, chunk);
    for (std::size_t i = 0; i < chunk.size(); ++i) {
      r.predictions.push_back(pred.labels[i]);
      r.truth.push_back(label_for(*chunk[i], task, net.subjects));
    }
  }
  r.cm = confusion(r.predictions, r.truth, k);
  r.accuracy = multiclass_accuracy(r.cm);
  if (k == 2) {
    const auto bm = binary_metrics(r.cm);
    r.sensitivity = bm.sensitivity;
    r.specificity = bm.specificity;
  }
  return r;
}

// One ablation row: identity accuracy, alcoholism sensitivity/specificity,
// stimulus accuracy — the four Table-shaped metric columns.
struct RegimeMetrics {
  double id_acc = 0.0;
  std::optional<double> alc_sens, alc_spec;
  double sti_acc = 0.0;
};

namespace detail {

struct AblationRowSpec {
  const char* regime;     // internal key
  const char* label;      // display row name
  double ref[4];          // published reference values (percent), annotation only
};

// Published reference values shipped as annotations, never as assertions.
inline const std::vector<AblationRowSpec>& ablation_rows() {
  static const std::vector<AblationRowSpec> rows = {
      {"none", "Baseline", {0.48, 65.17, 35.41, 37.79}},
      {"alc", "+Alc.", {9.19, 72.79, 91.56, 43.35}},
      {"sti", "+Sti.", {21.19, 78.91, 62.38, 52.61}},
      {"both", "+Alc.&Sti.", {48.97, 93.47, 64.59, 50.41}},
  };
  return rows;
}

inline constexpr double kReferenceRow[4] = {97.46, 91.29, 95.44, 61.66};

inline nlohmann::json row_json(const std::string& label, const RegimeMetrics& m,
                               const double ref[4]) {
  nlohmann::json j = {{"row", label},
                      {"id_acc", m.id_acc},
                      {"sti_acc", m.sti_acc},
                      {"reference_percent",
                       {{"id_acc", ref[0]},
                        {"alc_sens", ref[1]},
                        {"alc_spec", ref[2]},
                        {"sti_acc", ref[3]}}}};
  if (m.alc_sens) j["alc_sens"] = *m.alc_sens;
  if (m.alc_spec) j["alc_spec"] = *m.alc_spec;
  return j;
}

}  // namespace detail

// Table-shaped grid: four constraint-regime rows plus the original-EEG
// reference row; published values ride along as annotations.
inline nlohmann::json ablation_report(const std::map<std::string, RegimeMetrics>& regimes,
                                      const RegimeMetrics& original,
                                      nlohmann::json config = {}) {
  nlohmann::json rows = nlohmann::json::array();
  rows.push_back(detail::row_json("Original", original, detail::kReferenceRow));
  for (const auto& spec : detail::ablation_rows()) {
    const auto it = regimes.find(spec.regime);
    if (it == regimes.end())
      throw MissingRegime(std::string("missing ablation regime: ") + spec.regime);
    rows.push_back(detail::row_json(spec.label, it->second, spec.ref));
  }
  return {{"kind", "ablation"},
          {"columns", {"id_acc", "alc_sens", "alc_spec", "sti_acc"}},
          {"rows", rows},
          {"config", std::move(config)}};
}

inline std::string ablation_text(const nlohmann::json& report) {
  char line[256];
  std::string out;
  std::snprintf(line, sizeof(line), "%-12s %10s %10s %10s %10s\n", "row", "id_acc",
                "alc_sens", "alc_spec", "sti_acc");
  out += line;
  auto cell = [](const nlohmann::json& row, const char* key) {
    return row.contains(key) ? row.at(key).get<double>() * 100.0 : -1.0;
  };
  for (const auto& row : report.at("rows")) {
    std::snprintf(line, sizeof(line), "%-12s %9.2f%% %9.2f%% %9.2f%% %9.2f%%\n",
                  row.at("row").get<std::string>().c_str(), cell(row, "id_acc"),
                  cell(row, "alc_sens"), cell(row, "alc_spec"), cell(row, "sti_acc"));
    out += line;
  }
  return out;
}

inline std::string ablation_csv(const nlohmann::json& report) {
  std::string out = "row,id_acc,alc_sens,alc_spec,sti_acc\n";
  char line[256];
  for (const auto& row : report.at("rows")) {
    auto cell = [&](const char* key) {
      return row.contains(key) ? std::to_string(row.at(key).get<double>()) : std::string();
    };
    std::snprintf(line, sizeof(line), "%s,%s,%s,%s,%s\n",
                  row.at("row").get<std::string>().c_str(), cell("id_acc").c_str(),
                  cell("alc_sens").c_str(), cell("alc_spec").c_str(), cell("sti_acc").c_str());
    out += line;
  }
  return out;
}

}  // namespace eegcloak
