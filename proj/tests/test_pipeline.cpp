#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <array>
#include <filesystem>
#include <map>

#include "eegcloak/fixtures.hpp"
#include "eegcloak/pipeline.hpp"

using namespace eegcloak;
namespace fs = std::filesystem;

namespace {

struct TempTree {
  fs::path root;
  explicit TempTree(const std::string& tag)
      : root(fs::temp_directory_path() / ("eegcloak_pipe_" + tag)) {
    fs::remove_all(root);
    fs::create_directories(root);
  }
  ~TempTree() { fs::remove_all(root); }
};

RunConfig make_cfg(const fs::path& corpus, const fs::path& work) {
  return config_from_json({{"corpus_root", corpus.string()},
                           {"work_dir", work.string()},
                           {"seed", 11},
                           {"dummy", {{"k", 2}, {"m", 3}}},
                           {"classifier", {{"epochs", 2}, {"task", "alcoholism"}}},
                           {"gan", {{"epochs", 1}, {"batch", 4}}}});
}

}  // namespace

TEST_CASE("fixture corpus ingests, splits, preprocesses and produces dummies") {
  TempTree tmp("smoke");
  FixtureOptions fo;
  fo.subjects_per_class = 3;
  fo.trials_per_condition = 3;
  generate_fixture_corpus(tmp.root / "corpus", fo);

  auto cfg = make_cfg(tmp.root / "corpus", tmp.root / "work");

  const auto manifest = pipeline::run_ingest(cfg);
  REQUIRE(manifest.trials.size() == 90);  // 6 subjects x 5 conditions x 3
  REQUIRE(manifest.subjects.size() == 6);
  REQUIRE(manifest.stimulus_vocab.size() == 5);

  const auto split = pipeline::run_split(cfg);
  REQUIRE(split.by_trial.size() == 90);
  std::map<std::string, std::array<int, 3>> per_subject;
  for (const auto& ref : manifest.trials) {
    const auto sp = split.by_trial.at(ref.id);
    ++per_subject[ref.subject_id][static_cast<std::size_t>(sp)];
  }
  for (const auto& [sid, counts] : per_subject) {
    // 15 trials -> 11 train / 1 test / 3 validation by largest remainder
    REQUIRE(counts[static_cast<std::size_t>(Split::train)] == 11);
    REQUIRE(counts[static_cast<std::size_t>(Split::test)] == 1);
    REQUIRE(counts[static_cast<std::size_t>(Split::validation)] == 3);
  }

  pipeline::run_preprocess(cfg);
  auto train = pipeline::load_split_images(cfg, "train");
  auto val = pipeline::load_split_images(cfg, "validation");
  auto test = pipeline::load_split_images(cfg, "test");
  REQUIRE(train.size() == 66);
  REQUIRE(val.size() == 18);
  REQUIRE(test.size() == 6);
  for (const auto& img : train) {
    REQUIRE(img.h == cfg.image_size);
    REQUIRE(img.provenance == Provenance::real);
    REQUIRE(img.stimulus >= 0);
  }

  const auto dummies = pipeline::run_dummies(cfg);
  REQUIRE(dummies.images.size() == static_cast<std::size_t>(kDummyGroups * 3));
  auto reloaded = pipeline::load_dummies_artifact(cfg);
  REQUIRE(reloaded.images.size() == dummies.images.size());
  for (std::size_t i = 0; i < reloaded.images.size(); ++i)
    REQUIRE(reloaded.images[i].provenance == Provenance::dummy);

  SECTION("training a classifier through the pipeline produces a checkpoint") {
    const auto model = pipeline::run_train_cls(cfg);
    REQUIRE(fs::exists(model));
    REQUIRE(fs::exists(model.string() + ".history.csv"));
    auto net = load_classifier(model);
    REQUIRE(net.config.heads[0].task == Task::alcoholism);
    auto report = evaluate_model(net, val, Task::alcoholism, "validation/real");
    REQUIRE(report.cm.total() == 18);
  }
}

TEST_CASE("data stages are deterministic across reruns") {
  TempTree tmp("det");
  FixtureOptions fo;
  fo.subjects_per_class = 2;
  fo.trials_per_condition = 3;
  generate_fixture_corpus(tmp.root / "corpus", fo);

  auto run = [&](const std::string& wd) {
    auto cfg = make_cfg(tmp.root / "corpus", tmp.root / wd);
    pipeline::run_ingest(cfg);
    pipeline::run_split(cfg);
    pipeline::run_preprocess(cfg);
    pipeline::run_dummies(cfg);
    return cfg;
  };
  auto c1 = run("work1");
  auto c2 = run("work2");

  // artifacts embed their producing config (which names the work dir), so
  // compare the data payloads rather than raw bytes
  REQUIRE(pipeline::read_json(pipeline::split_path(c1)).at("assignment") ==
          pipeline::read_json(pipeline::split_path(c2)).at("assignment"));
  REQUIRE(pipeline::read_json(pipeline::normalizer_path(c1)).at("lo") ==
          pipeline::read_json(pipeline::normalizer_path(c2)).at("lo"));
  REQUIRE(pipeline::read_json(pipeline::normalizer_path(c1)).at("hi") ==
          pipeline::read_json(pipeline::normalizer_path(c2)).at("hi"));

  auto a = pipeline::load_split_images(c1, "train");
  auto b = pipeline::load_split_images(c2, "train");
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a[i].subject_id == b[i].subject_id);
    REQUIRE(a[i].pixels == b[i].pixels);
  }
  auto d1 = pipeline::load_dummies_artifact(c1);
  auto d2 = pipeline::load_dummies_artifact(c2);
  for (std::size_t i = 0; i < d1.images.size(); ++i)
    REQUIRE(d1.images[i].pixels == d2.images[i].pixels);
}

TEST_CASE("fixture corpus plants recoverable label cues") {
  TempTree tmp("cues");
  FixtureOptions fo;
  fo.subjects_per_class = 1;
  fo.trials_per_condition = 1;
  generate_fixture_corpus(tmp.root / "corpus", fo);
  auto manifest = build_manifest(tmp.root / "corpus");
  REQUIRE(manifest.trials.size() == 10);

  for (const auto& ref : manifest.trials) {
    const auto f = trial_band_features(load_trial(manifest, ref));
    // alcoholism cue: beta tone on the class-specific half of the montage
    double beta_front = 0, beta_back = 0;
    for (int ch = 0; ch < kChannels; ++ch)
      (ch < kChannels / 2 ? beta_front : beta_back) += f.at(ch, 2);
    if (ref.alcoholism == 1)
      REQUIRE(beta_front > 2.0 * beta_back);
    else
      REQUIRE(beta_back > 2.0 * beta_front);
    // stimulus cue: alpha tone on the (ch mod 5 == level) electrode set
    std::array<double, kStimulusClasses> alpha_by_mask{};
    for (int ch = 0; ch < kChannels; ++ch)
      alpha_by_mask[static_cast<std::size_t>(ch % kStimulusClasses)] += f.at(ch, 1);
    const auto best = std::max_element(alpha_by_mask.begin(), alpha_by_mask.end());
    REQUIRE(static_cast<int>(best - alpha_by_mask.begin()) == ref.stimulus);
  }
}
