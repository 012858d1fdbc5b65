#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "eegcloak/dummyid.hpp"
#include "eegcloak/rng.hpp"

using namespace eegcloak;

namespace {

BandFeatures feat(const std::string& subject, int alc, int sti, double base) {
  BandFeatures f;
  f.subject_id = subject;
  f.alcoholism = alc;
  f.stimulus = sti;
  f.powers.resize(static_cast<std::size_t>(kChannels) * kBands);
  for (std::size_t i = 0; i < f.powers.size(); ++i)
    f.powers[i] = base + static_cast<double>(i % 7);
  return f;
}

// full 10-group training set with `subjects_per_class` subjects per class
std::vector<BandFeatures> full_training_set(int subjects_per_class, int trials_each = 1) {
  Rng rng(77);
  std::vector<BandFeatures> out;
  for (int alc = 0; alc < 2; ++alc)
    for (int s = 0; s < subjects_per_class; ++s) {
      std::string sid = (alc ? "co2a00009" : "co2c00009") + std::to_string(s);
      for (int sti = 0; sti < kStimulusClasses; ++sti)
        for (int t = 0; t < trials_each; ++t)
          out.push_back(feat(sid, alc, sti, rng.uniform(0.0, 5.0)));
    }
  return out;
}

struct Fixture {
  GridInterpolator interp{project_electrodes(ElectrodeTable::builtin()), 16, 16};
  Normalizer norm;
  Fixture() {
    norm.lo = {0.0, 0.0, 0.0};
    norm.hi = {3.0, 3.0, 3.0};
  }
};

}  // namespace

TEST_CASE("group key is alcoholism * 5 + stimulus") {
  REQUIRE(group_key(0, 0) == 0);
  REQUIRE(group_key(1, 4) == 9);
  std::set<int> ids;
  for (int a = 0; a < 2; ++a)
    for (int s = 0; s < 5; ++s) ids.insert(group_key(a, s));
  REQUIRE(ids.size() == 10);
  REQUIRE(*ids.begin() == 0);
  REQUIRE(*ids.rbegin() == 9);
}

TEST_CASE("invalid group labels are rejected") {
  REQUIRE_THROWS_AS(group_key(2, 0), LabelOutOfRange);
  REQUIRE_THROWS_AS(group_key(0, 5), LabelOutOfRange);
}

TEST_CASE("dummy set covers exactly 10 groups with matching labels") {
  Fixture fx;
  auto train = full_training_set(3, 2);
  DummySet d = make_dummy_set(train, 2, 4, 99, fx.interp, fx.norm);
  REQUIRE(d.images.size() == 10u * 4);
  std::set<int> groups;
  for (const auto& img : d.images) {
    REQUIRE(img.provenance == Provenance::dummy);
    const int g = group_key(img.alcoholism, img.stimulus);
    groups.insert(g);
    REQUIRE(img.subject_id.rfind("dummy:g" + std::to_string(g) + ":", 0) == 0);
  }
  REQUIRE(groups.size() == 10);
  for (const auto& c : d.contributors) REQUIRE(c.size() == 2);
}

TEST_CASE("averaging identical matrices is the identity") {
  Fixture fx;
  std::vector<BandFeatures> train;
  for (int alc = 0; alc < 2; ++alc)
    for (int s = 0; s < 3; ++s)
      for (int sti = 0; sti < 5; ++sti) {
        BandFeatures f = feat((alc ? "co2a0000" : "co2c0000") + std::to_string(s), alc, sti, 1.0);
        train.push_back(f);
      }
  DummySet d = make_dummy_set(train, 3, 1, 5, fx.interp, fx.norm);
  // every subject in a group supplied the same matrix F, so the exemplar
  // image equals the image assembled from F directly
  BandFeatures ref = feat("x", 0, 0, 1.0);
  EEGImage expect = assemble_image(ref, fx.interp, fx.norm);
  REQUIRE(d.images[0].pixels == expect.pixels);
}

TEST_CASE("two-subject average is the elementwise mean") {
  Fixture fx;
  std::vector<BandFeatures> train;
  for (int sti = 0; sti < 5; ++sti) {
    for (int alc = 0; alc < 2; ++alc) {
      BandFeatures f1 = feat(alc ? "co2a0000001" : "co2c0000001", alc, sti, 0.0);
      BandFeatures f2 = feat(alc ? "co2a0000002" : "co2c0000002", alc, sti, 0.0);
      f1.powers.assign(f1.powers.size(), 2.0);
      f2.powers.assign(f2.powers.size(), 6.0);
      train.push_back(f1);
      train.push_back(f2);
    }
  }
  DummySet d = make_dummy_set(train, 2, 1, 5, fx.interp, fx.norm);
  BandFeatures mean = feat("x", 0, 0, 0.0);
  mean.powers.assign(mean.powers.size(), 4.0);
  EEGImage expect = assemble_image(mean, fx.interp, fx.norm);
  REQUIRE(d.images[0].pixels == expect.pixels);
}

TEST_CASE("two-stage mean matches a brute-force oracle on a 3-subject toy group") {
  // subject A has two trials in the group, B and C one each: the exemplar
  // must weight subjects equally, not trials
  Fixture fx;
  std::vector<BandFeatures> train;
  auto add = [&](const std::string& sid, double v, int alc, int sti) {
    BandFeatures f = feat(sid, alc, sti, 0.0);
    f.powers.assign(f.powers.size(), v);
    train.push_back(f);
  };
  for (int sti = 0; sti < 5; ++sti)
    for (int alc = 0; alc < 2; ++alc) {
      const char* a = alc ? "co2a000000A" : "co2c000000A";
      const char* b = alc ? "co2a000000B" : "co2c000000B";
      const char* c = alc ? "co2a000000C" : "co2c000000C";
      add(a, 1.0, alc, sti);
      add(a, 3.0, alc, sti);  // subject mean 2.0
      add(b, 5.0, alc, sti);
      add(c, 8.0, alc, sti);
    }
  DummySet d = make_dummy_set(train, 3, 1, 5, fx.interp, fx.norm);
  const double oracle = (2.0 + 5.0 + 8.0) / 3.0;  // NOT (1+3+5+8)/4
  BandFeatures mean = feat("x", 0, 0, 0.0);
  mean.powers.assign(mean.powers.size(), oracle);
  EEGImage expect = assemble_image(mean, fx.interp, fx.norm);
  REQUIRE(d.images[0].pixels == expect.pixels);
}

TEST_CASE("insufficient subjects in a group is an error") {
  Fixture fx;
  auto train = full_training_set(2);
  REQUIRE_THROWS_AS(make_dummy_set(train, 3, 1, 5, fx.interp, fx.norm), InsufficientSubjects);
}

TEST_CASE("dummy sets are seed-deterministic and seed-sensitive") {
  Fixture fx;
  auto train = full_training_set(4, 2);
  DummySet a = make_dummy_set(train, 2, 6, 42, fx.interp, fx.norm);
  DummySet b = make_dummy_set(train, 2, 6, 42, fx.interp, fx.norm);
  REQUIRE(a.images.size() == b.images.size());
  for (std::size_t i = 0; i < a.images.size(); ++i)
    REQUIRE(a.images[i].pixels == b.images[i].pixels);
  REQUIRE(a.contributors == b.contributors);

  DummySet c = make_dummy_set(train, 2, 6, 43, fx.interp, fx.norm);
  REQUIRE(a.contributors != c.contributors);
}
