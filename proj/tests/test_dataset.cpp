#include <catch2/catch_amalgamated.hpp>

#include <zlib.h>

#include <filesystem>
#include <set>
#include <string>

#include "eegcloak/dataset.hpp"
#include "eegcloak/io_util.hpp"
#include "eegcloak/rng.hpp"

using namespace eegcloak;
namespace fs = std::filesystem;

namespace {

Trial make_trial(const std::string& subject, const std::string& cond, int index,
                 double scale = 1.0) {
  Trial t;
  t.subject_id = subject;
  t.alcoholism = detail::class_from_subject_id(subject);
  t.stimulus_str = cond;
  t.trial_index = index;
  t.samples.resize(static_cast<std::size_t>(kChannels) * kSamplesPerTrial);
  Rng rng(Rng::derive(index, subject + cond));
  for (auto& v : t.samples) v = scale * rng.normal();
  return t;
}

fs::path temp_dir(const std::string& tag) {
  fs::path p = fs::temp_directory_path() / ("eegcloak_test_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

const std::array<std::string, 5> kConds = {"S1 obj", "S2 match", "S2 match err", "S2 nomatch",
                                           "S2 nomatch err"};

void write_small_corpus(const fs::path& root, int subjects, int trials_per_subject) {
  for (int s = 0; s < subjects; ++s) {
    char cls = s % 2 ? 'a' : 'c';
    std::string subject = std::string("co2") + cls + "000010" + std::to_string(s);
    for (int i = 0; i < trials_per_subject; ++i) {
      Trial t = make_trial(subject, kConds[static_cast<std::size_t>(i) % 5], i);
      write_file(root / subject / (subject + ".rd." + std::to_string(i)), serialize_trial(t));
    }
  }
}

}  // namespace

TEST_CASE("serializer/parser round-trip preserves the trial") {
  Trial t = make_trial("co2c0000042", "S1 obj", 3);
  Trial back = parse_trial(serialize_trial(t));
  REQUIRE(back.subject_id == t.subject_id);
  REQUIRE(back.alcoholism == Alcoholism::control);
  REQUIRE(back.stimulus_str == "S1 obj");
  REQUIRE(back.trial_index == 3);
  REQUIRE(back.samples == t.samples);
}

TEST_CASE("alcoholism class derives from the subject file id") {
  REQUIRE(parse_trial(serialize_trial(make_trial("co2a0000364", "S1 obj", 0))).alcoholism ==
          Alcoholism::alcoholic);
  REQUIRE(parse_trial(serialize_trial(make_trial("co3c0000111", "S1 obj", 0))).alcoholism ==
          Alcoholism::control);
}

TEST_CASE("file with a missing channel is malformed") {
  Trial t = make_trial("co2c0000042", "S1 obj", 0);
  std::string text = serialize_trial(t);
  // drop every data line of the last channel
  const std::string& last = ElectrodeTable::builtin().names().back();
  std::string out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (line[0] == '#' || line.find(" " + last + " ") == std::string::npos) out += line + "\n";
  REQUIRE_THROWS_AS(parse_trial(out), MalformedTrial);
}

TEST_CASE("missing condition header is reported") {
  std::string text = serialize_trial(make_trial("co2c0000042", "S1 obj", 0));
  auto pos = text.find("# S1 obj , trial 0\n");
  text.erase(pos, std::string("# S1 obj , trial 0\n").size());
  REQUIRE_THROWS_AS(parse_trial(text), MissingConditionHeader);
}

TEST_CASE("unknown sensor name is reported") {
  std::string text = serialize_trial(make_trial("co2c0000042", "S1 obj", 0));
  // corrupt one data line's sensor name
  auto pos = text.find("\n0 FP1 0 ");
  text.replace(pos + 3, 3, "QQ7");
  REQUIRE_THROWS_AS(parse_trial(text), UnknownSensor);
}

TEST_CASE("manifest enumerates trials, subjects and a 5-word vocab") {
  auto root = temp_dir("manifest");
  write_small_corpus(root, 3, 5);
  Manifest m = build_manifest(root);
  REQUIRE(m.trials.size() == 15);
  REQUIRE(m.subjects.size() == 3);
  REQUIRE(m.stimulus_vocab.size() == 5);
  REQUIRE(std::is_sorted(m.stimulus_vocab.begin(), m.stimulus_vocab.end()));
  for (const auto& t : m.trials) {
    REQUIRE(t.stimulus >= 0);
    REQUIRE(t.stimulus < 5);
    REQUIRE(m.stimulus_vocab[static_cast<std::size_t>(t.stimulus)] == t.stimulus_str);
  }
}

TEST_CASE("manifest reads gzip trial files") {
  auto root = temp_dir("gz");
  write_small_corpus(root, 1, 5);
  Trial t = make_trial("co2c0000100", "S1 obj", 99);
  const std::string text = serialize_trial(t);
  fs::create_directories(root / "co2c0000100");
  gzFile f = gzopen((root / "co2c0000100" / "co2c0000100.rd.99.gz").c_str(), "wb");
  REQUIRE(f != nullptr);
  gzwrite(f, text.data(), static_cast<unsigned>(text.size()));
  gzclose(f);
  Manifest m = build_manifest(root);
  REQUIRE(m.trials.size() == 6);
  bool found = false;
  for (const auto& tr : m.trials)
    if (tr.trial_index == 99) found = true;
  REQUIRE(found);
}

TEST_CASE("six distinct conditions is a vocab mismatch") {
  auto root = temp_dir("vocab6");
  write_small_corpus(root, 1, 5);
  Trial t = make_trial("co2c0001000", "S3 bogus", 0);
  write_file(root / "co2c0001000.rd.0", serialize_trial(t));
  REQUIRE_THROWS_AS(build_manifest(root), VocabSizeMismatch);
}

TEST_CASE("empty corpus is an error") {
  auto root = temp_dir("empty");
  REQUIRE_THROWS_AS(build_manifest(root), EmptyCorpus);
}

TEST_CASE("two trials from one subject produce one manifest subject") {
  auto root = temp_dir("onesub");
  for (int i = 0; i < 5; ++i)
    write_file(root / ("co2c0000001.rd." + std::to_string(i)),
               serialize_trial(make_trial("co2c0000001", kConds[static_cast<std::size_t>(i)], i)));
  Manifest m = build_manifest(root);
  REQUIRE(m.subjects.size() == 1);
}

TEST_CASE("largest-remainder split counts") {
  const std::array<double, 3> r{0.7, 0.2, 0.1};
  REQUIRE(split_counts(10, r) == std::array<int, 3>{7, 2, 1});
  // n=3: floors (2, 0, 0), remainder goes to the largest fraction (test, 0.6)
  REQUIRE(split_counts(3, r) == std::array<int, 3>{2, 1, 0});
  for (int n = 3; n <= 50; ++n) {
    auto c = split_counts(n, r);
    REQUIRE(c[0] + c[1] + c[2] == n);
    REQUIRE(std::abs(c[0] - 0.7 * n) <= 1.0 + 1e-9);
    REQUIRE(std::abs(c[1] - 0.2 * n) <= 1.0 + 1e-9);
    REQUIRE(std::abs(c[2] - 0.1 * n) <= 1.0 + 1e-9);
  }
}

TEST_CASE("within-subject split partitions all trials deterministically") {
  auto root = temp_dir("split");
  write_small_corpus(root, 3, 10);
  Manifest m = build_manifest(root);
  SplitAssignment a = split_within_subject(m, {0.7, 0.2, 0.1}, 1234);
  SplitAssignment b = split_within_subject(m, {0.7, 0.2, 0.1}, 1234);
  REQUIRE(a.by_trial == b.by_trial);

  REQUIRE(a.by_trial.size() == m.trials.size());
  std::map<std::string, std::array<int, 3>> per_subject;
  for (const auto& t : m.trials) {
    REQUIRE(a.by_trial.count(t.id) == 1);
    per_subject[t.subject_id][static_cast<std::size_t>(a.by_trial.at(t.id))]++;
  }
  for (const auto& [sub, c] : per_subject) {
    REQUIRE(c[0] == 7);
    REQUIRE(c[1] == 2);
    REQUIRE(c[2] == 1);
  }

  SplitAssignment other = split_within_subject(m, {0.7, 0.2, 0.1}, 4321);
  REQUIRE(other.by_trial != a.by_trial);  // the seed actually shuffles
}

TEST_CASE("subjects with fewer than three trials are rejected") {
  auto root = temp_dir("toofew");
  write_small_corpus(root, 1, 5);
  write_file(root / "co2a0009999.rd.0",
             serialize_trial(make_trial("co2a0009999", kConds[0], 0)));
  write_file(root / "co2a0009999.rd.1",
             serialize_trial(make_trial("co2a0009999", kConds[1], 1)));
  Manifest m = build_manifest(root);
  REQUIRE_THROWS_AS(split_within_subject(m, {0.7, 0.2, 0.1}, 1), TooFewTrials);
}

TEST_CASE("manifest and split JSON round-trip byte-identically") {
  auto root = temp_dir("json");
  write_small_corpus(root, 2, 6);
  Manifest m = build_manifest(root);
  const std::string j1 = manifest_to_json(m).dump(2);
  const std::string j2 = manifest_to_json(manifest_from_json(nlohmann::json::parse(j1))).dump(2);
  REQUIRE(j1 == j2);

  SplitAssignment s = split_within_subject(m, {0.7, 0.2, 0.1}, 7);
  const std::string k1 = split_to_json(s).dump(2);
  const std::string k2 = split_to_json(split_from_json(nlohmann::json::parse(k1))).dump(2);
  REQUIRE(k1 == k2);
}

TEST_CASE("corpus round-trip: every serialized file reparses equal") {
  auto root = temp_dir("roundtrip");
  write_small_corpus(root, 2, 5);
  Manifest m = build_manifest(root);
  for (const auto& ref : m.trials) {
    Trial t = load_trial(m, ref);
    Trial back = parse_trial(serialize_trial(t));
    REQUIRE(back.samples == t.samples);
    REQUIRE(back.subject_id == t.subject_id);
    REQUIRE(back.stimulus_str == t.stimulus_str);
  }
}
