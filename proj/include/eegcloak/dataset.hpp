#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "eegcloak/electrodes.hpp"
#include "eegcloak/errors.hpp"
#include "eegcloak/io_util.hpp"
#include "eegcloak/rng.hpp"

namespace eegcloak {

inline constexpr int kChannels = 64;
inline constexpr int kSamplesPerTrial = 256;
inline constexpr int kSampleRateHz = 256;
inline constexpr int kStimulusClasses = 5;

enum class Alcoholism : int { control = 0, alcoholic = 1 };

// One 64-channel x 256-sample recording. Channels follow the canonical
// electrode-table order, samples are row-major per channel.
struct Trial {
  std::string subject_id;
  Alcoholism alcoholism = Alcoholism::control;
  std::string stimulus_str;  // condition string, verbatim
  int stimulus = -1;         // vocab index, resolved at manifest time
  int trial_index = 0;
  int sample_rate = kSampleRateHz;
  std::vector<double> samples;  // kChannels * kSamplesPerTrial

  double at(int ch, int t) const {
    return samples[static_cast<std::size_t>(ch) * kSamplesPerTrial + t];
  }
};

namespace detail {

inline Alcoholism class_from_subject_id(const std::string& id) {
  // corpus convention: co<digits><class><digits>, class 'a' or 'c'
  for (std::size_t i = 2; i < id.size(); ++i) {
    char c = id[i];
    if (std::isdigit(static_cast<unsigned char>(c))) continue;
    if (c == 'a') return Alcoholism::alcoholic;
    if (c == 'c') return Alcoholism::control;
    break;
  }
  throw MalformedTrial("cannot derive alcoholism class from subject id '" + id + "'");
}

}  // namespace detail

inline Trial parse_trial(const std::string& raw_text,
                         const ElectrodeTable& table = ElectrodeTable::builtin()) {
  Trial trial;
  trial.samples.assign(static_cast<std::size_t>(kChannels) * kSamplesPerTrial, 0.0);
  std::vector<int> filled(static_cast<std::size_t>(kChannels) * kSamplesPerTrial, 0);

  bool have_subject = false, have_condition = false;
  std::istringstream in(raw_text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = line.substr(1);
      while (!body.empty() && body.front() == ' ') body.erase(body.begin());
      if (!have_subject) {
        // first comment carries the subject file id, e.g. "co2a0000364.rd"
        auto dot = body.find(".rd");
        trial.subject_id = dot == std::string::npos ? body : body.substr(0, dot);
        if (trial.subject_id.empty()) throw MalformedTrial("empty subject id header");
        trial.alcoholism = detail::class_from_subject_id(trial.subject_id);
        have_subject = true;
        continue;
      }
      auto tpos = body.find(", trial ");
      if (tpos != std::string::npos) {
        std::string cond = body.substr(0, tpos);
        while (!cond.empty() && cond.back() == ' ') cond.pop_back();
        if (cond.empty()) throw MissingConditionHeader("empty condition string");
        trial.stimulus_str = cond;
        trial.trial_index = std::atoi(body.c_str() + tpos + 8);
        have_condition = true;
      }
      continue;  // other comments (chan headers, units) carry no extra state
    }
    std::istringstream ls(line);
    int trial_no = 0, sample = 0;
    std::string sensor;
    double value = 0.0;
    if (!(ls >> trial_no >> sensor >> sample >> value))
      throw MalformedTrial("unparseable data line: " + line);
    if (!table.contains(sensor)) throw UnknownSensor("unknown sensor name: " + sensor);
    if (sample < 0 || sample >= kSamplesPerTrial)
      throw MalformedTrial("sample index out of range: " + line);
    if (!std::isfinite(value)) throw MalformedTrial("non-finite sample: " + line);
    const int ch = table.index_of(sensor);
    auto idx = static_cast<std::size_t>(ch) * kSamplesPerTrial + sample;
    if (filled[idx]++) throw MalformedTrial("duplicate sample for " + sensor);
    trial.samples[idx] = value;
  }

  if (!have_subject) throw MalformedTrial("missing subject header");
  if (!have_condition) throw MissingConditionHeader("no condition header found");
  for (int ch = 0; ch < kChannels; ++ch) {
    int n = 0;
    for (int t = 0; t < kSamplesPerTrial; ++t)
      n += filled[static_cast<std::size_t>(ch) * kSamplesPerTrial + t];
    if (n != kSamplesPerTrial)
      throw MalformedTrial("channel " + table.names()[static_cast<std::size_t>(ch)] + " has " +
                           std::to_string(n) + " samples, expected 256");
  }
  return trial;
}

// Emits the corpus text convention; parse_trial(serialize_trial(t)) == t.
inline std::string serialize_trial(const Trial& trial,
                                   const ElectrodeTable& table = ElectrodeTable::builtin()) {
  std::string out;
  out += "# " + trial.subject_id + ".rd\n";
  out += "# 1 trials, 64 chans, 256 samples\n";
  out += "# 3.906000 msecs uV\n";
  out += "# " + trial.stimulus_str + " , trial " + std::to_string(trial.trial_index) + "\n";
  char buf[96];
  for (int ch = 0; ch < kChannels; ++ch) {
    const std::string& name = table.names()[static_cast<std::size_t>(ch)];
    out += "# " + name + " chan " + std::to_string(ch) + "\n";
    for (int t = 0; t < kSamplesPerTrial; ++t) {
      std::snprintf(buf, sizeof(buf), "%d %s %d %.17g\n", trial.trial_index, name.c_str(), t,
                    trial.at(ch, t));
      out += buf;
    }
  }
  return out;
}

struct TrialRef {
  std::string id;       // relative path, unique within the corpus
  std::string path;     // relative to the manifest root
  std::string subject_id;
  int alcoholism = 0;
  int stimulus = -1;
  std::string stimulus_str;
  int trial_index = 0;
};

struct SubjectRef {
  std::string id;
  int alcoholism = 0;
};

struct Manifest {
  std::string root;
  std::vector<TrialRef> trials;              // sorted by id
  std::vector<SubjectRef> subjects;          // sorted by id
  std::vector<std::string> stimulus_vocab;   // exactly 5, lexicographic
};

inline bool looks_like_trial_file(const std::filesystem::path& p) {
  return p.filename().string().find(".rd") != std::string::npos;
}

inline Manifest build_manifest(const std::filesystem::path& root,
                               const ElectrodeTable& table = ElectrodeTable::builtin()) {
  Manifest m;
  m.root = root.string();
  std::map<std::string, int> subject_class;
  std::set<std::string> vocab;
  for (auto& entry : std::filesystem::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file() || !looks_like_trial_file(entry.path())) continue;
    Trial t = parse_trial(read_text_maybe_gz(entry.path()), table);
    TrialRef ref;
    ref.path = std::filesystem::relative(entry.path(), root).generic_string();
    ref.id = ref.path;
    ref.subject_id = t.subject_id;
    ref.alcoholism = static_cast<int>(t.alcoholism);
    ref.stimulus_str = t.stimulus_str;
    ref.trial_index = t.trial_index;
    auto it = subject_class.find(t.subject_id);
    if (it == subject_class.end())
      subject_class[t.subject_id] = ref.alcoholism;
    else if (it->second != ref.alcoholism)
      throw MalformedTrial("subject " + t.subject_id + " has inconsistent alcoholism class");
    vocab.insert(t.stimulus_str);
    m.trials.push_back(std::move(ref));
  }
  if (m.trials.empty()) throw EmptyCorpus("no trial files under " + root.string());
  if (vocab.size() != kStimulusClasses)
    throw VocabSizeMismatch("expected 5 distinct stimulus conditions, found " +
                            std::to_string(vocab.size()));
  m.stimulus_vocab.assign(vocab.begin(), vocab.end());
  for (auto& t : m.trials) {
    auto it = std::lower_bound(m.stimulus_vocab.begin(), m.stimulus_vocab.end(), t.stimulus_str);
    t.stimulus = static_cast<int>(it - m.stimulus_vocab.begin());
  }
  for (auto& [id, cls] : subject_class) m.subjects.push_back({id, cls});
  std::sort(m.trials.begin(), m.trials.end(),
            [](const TrialRef& a, const TrialRef& b) { return a.id < b.id; });
  return m;
}

inline Trial load_trial(const Manifest& m, const TrialRef& ref,
                        const ElectrodeTable& table = ElectrodeTable::builtin()) {
  Trial t = parse_trial(read_text_maybe_gz(std::filesystem::path(m.root) / ref.path), table);
  t.stimulus = ref.stimulus;
  return t;
}

enum class Split : int { train = 0, test = 1, validation = 2 };

inline const char* split_name(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::test: return "test";
    default: return "validation";
  }
}

struct SplitAssignment {
  std::map<std::string, Split> by_trial;  // trial id -> split
  std::uint64_t seed = 0;
};

// Largest-remainder apportionment of n into the three ratio buckets;
// remainder goes to the largest fractional part, ties broken in
// train > test > validation order.
inline std::array<int, 3> split_counts(int n, const std::array<double, 3>& ratios) {
  std::array<int, 3> counts{};
  std::array<double, 3> frac{};
  int assigned = 0;
  for (int i = 0; i < 3; ++i) {
    double exact = ratios[static_cast<std::size_t>(i)] * n;
    counts[static_cast<std::size_t>(i)] = static_cast<int>(std::floor(exact + 1e-9));
    frac[static_cast<std::size_t>(i)] = exact - counts[static_cast<std::size_t>(i)];
    assigned += counts[static_cast<std::size_t>(i)];
  }
  for (int r = assigned; r < n; ++r) {
    int best = 0;
    for (int i = 1; i < 3; ++i)
      if (frac[static_cast<std::size_t>(i)] > frac[static_cast<std::size_t>(best)] + 1e-12)
        best = i;
    counts[static_cast<std::size_t>(best)]++;
    frac[static_cast<std::size_t>(best)] -= 1.0;
  }
  return counts;
}

inline SplitAssignment split_within_subject(const Manifest& manifest,
                                            const std::array<double, 3>& ratios,
                                            std::uint64_t seed) {
  SplitAssignment out;
  out.seed = seed;
  std::map<std::string, std::vector<std::string>> by_subject;
  for (const auto& t : manifest.trials) by_subject[t.subject_id].push_back(t.id);
  for (auto& [subject, ids] : by_subject) {
    const int n = static_cast<int>(ids.size());
    if (n < 3) throw TooFewTrials("subject " + subject + " has only " + std::to_string(n) +
                                  " trials, need >= 3");
    std::sort(ids.begin(), ids.end());
    Rng rng(Rng::derive(seed, "split:" + subject));
    rng.shuffle(ids);
    const auto counts = split_counts(n, ratios);
    int pos = 0;
    for (int s = 0; s < 3; ++s)
      for (int i = 0; i < counts[static_cast<std::size_t>(s)]; ++i)
        out.by_trial[ids[static_cast<std::size_t>(pos++)]] = static_cast<Split>(s);
  }
  return out;
}

// ---- JSON serialization (stable key order for diffability) ----

inline nlohmann::json manifest_to_json(const Manifest& m) {
  nlohmann::json j;
  j["root"] = m.root;
  j["stimulus_vocab"] = m.stimulus_vocab;
  auto subjects = nlohmann::json::array();
  for (const auto& s : m.subjects) subjects.push_back({{"alcoholism", s.alcoholism}, {"id", s.id}});
  j["subjects"] = subjects;
  auto trials = nlohmann::json::array();
  for (const auto& t : m.trials)
    trials.push_back({{"alcoholism", t.alcoholism},
                      {"id", t.id},
                      {"path", t.path},
                      {"stimulus", t.stimulus},
                      {"stimulus_str", t.stimulus_str},
                      {"subject", t.subject_id},
                      {"trial_index", t.trial_index}});
  j["trials"] = trials;
  return j;
}

inline Manifest manifest_from_json(const nlohmann::json& j) {
  Manifest m;
  m.root = j.at("root").get<std::string>();
  m.stimulus_vocab = j.at("stimulus_vocab").get<std::vector<std::string>>();
  for (const auto& s : j.at("subjects"))
    m.subjects.push_back({s.at("id").get<std::string>(), s.at("alcoholism").get<int>()});
  for (const auto& t : j.at("trials")) {
    TrialRef r;
    r.id = t.at("id").get<std::string>();
    r.path = t.at("path").get<std::string>();
    r.subject_id = t.at("subject").get<std::string>();
    r.alcoholism = t.at("alcoholism").get<int>();
    r.stimulus = t.at("stimulus").get<int>();
    r.stimulus_str = t.at("stimulus_str").get<std::string>();
    r.trial_index = t.at("trial_index").get<int>();
    m.trials.push_back(std::move(r));
  }
  return m;
}

inline nlohmann::json split_to_json(const SplitAssignment& s) {
  nlohmann::json j;
  j["seed"] = s.seed;
  nlohmann::json a = nlohmann::json::object();
  for (const auto& [id, sp] : s.by_trial) a[id] = split_name(sp);
  j["assignment"] = a;
  return j;
}

inline SplitAssignment split_from_json(const nlohmann::json& j) {
  SplitAssignment s;
  s.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& [id, name] : j.at("assignment").items()) {
    std::string n = name.get<std::string>();
    Split sp = n == "train" ? Split::train : n == "test" ? Split::test : Split::validation;
    s.by_trial[id] = sp;
  }
  return s;
}

}  // namespace eegcloak
