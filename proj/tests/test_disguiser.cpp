#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>

#include "eegcloak/disguiser.hpp"

using namespace eegcloak;

namespace {

constexpr int kImg = 16;

EEGImage flat_image(Rng& rng, float r, float g, float b, Provenance prov) {
  EEGImage img;
  img.h = img.w = kImg;
  img.pixels.assign(3 * kImg * kImg, 0.0f);
  const float base[3] = {r, g, b};
  for (int c = 0; c < 3; ++c)
    for (int i = 0; i < kImg * kImg; ++i)
      img.pixels[static_cast<std::size_t>(c) * kImg * kImg + i] =
          std::clamp(base[c] + static_cast<float>(rng.uniform() * 0.1), 0.0f, 1.0f);
  img.subject_id = prov == Provenance::real ? "subj" : "dummy:g0:0:0";
  img.alcoholism = 0;
  img.stimulus = 0;
  img.provenance = prov;
  return img;
}

// Two toy domains separated by a fixed channel-mean offset.
std::vector<EEGImage> domain_x(std::uint64_t seed, int n) {
  Rng rng(seed);
  std::vector<EEGImage> out;
  for (int i = 0; i < n; ++i) {
    auto img = flat_image(rng, 0.2f, 0.3f, 0.4f, Provenance::real);
    img.subject_id = "s" + std::to_string(i % 2);
    img.alcoholism = i % 2;
    img.stimulus = i % 5;
    out.push_back(img);
  }
  return out;
}

DummySet domain_y(std::uint64_t seed, int n) {
  Rng rng(seed);
  DummySet set;
  for (int i = 0; i < n; ++i) {
    auto img = flat_image(rng, 0.7f, 0.6f, 0.5f, Provenance::dummy);
    img.alcoholism = i % 2;
    img.stimulus = i % 5;
    set.images.push_back(img);
  }
  return set;
}

Tensor<float> const_map(float v) {
  Tensor<float> t({1, 1, 2, 2});
  for (auto& x : t.data) x = v;
  return t;
}

}  // namespace

TEST_CASE("lsgan losses match hand values at fixed points") {
  auto [g0, d0] = lsgan_losses(const_map(1.0f), const_map(0.0f));
  REQUIRE(d0 == Catch::Approx(0.0).margin(1e-9));
  REQUIRE(g0 == Catch::Approx(1.0).margin(1e-9));

  auto [g1, d1] = lsgan_losses(const_map(0.3f), const_map(1.0f));
  REQUIRE(g1 == Catch::Approx(0.0).margin(1e-9));

  auto [g2, d2] = lsgan_losses(const_map(0.5f), const_map(0.5f));
  REQUIRE(g2 == Catch::Approx(0.25).margin(1e-9));
  REQUIRE(d2 == Catch::Approx(0.25).margin(1e-9));

  Tensor<float> other({1, 1, 3, 3});
  REQUIRE_THROWS_AS(lsgan_losses(const_map(1.0f), other), ShapeMismatch);
}

TEST_CASE("cycle loss hand values and symmetry") {
  Rng rng(1);
  Tensor<float> x({2, 3, 4, 4}), y({2, 3, 4, 4});
  for (auto& v : x.data) v = static_cast<float>(rng.uniform());
  for (auto& v : y.data) v = static_cast<float>(rng.uniform());

  REQUIRE(cycle_loss(x, x, y, y) == Catch::Approx(0.0).margin(1e-12));

  Tensor<float> rec = x;
  for (auto& v : rec.data) v += 0.1f;
  REQUIRE(cycle_loss(x, rec, y, y) == Catch::Approx(0.1).margin(1e-6));
  REQUIRE(cycle_loss(x, rec, y, y) == Catch::Approx(cycle_loss(y, y, x, rec)).margin(1e-12));

  Tensor<float> bad({2, 3, 4, 5});
  REQUIRE_THROWS_AS(cycle_loss(x, bad, y, y), ShapeMismatch);
}

TEST_CASE("constraint losses: empty set, uniform head, and confident head") {
  auto xs = domain_x(3, 4);
  auto ptrs = image_ptrs(xs);
  auto fake = images_to_tensor(ptrs, kImg);

  ClassifierNet dummy_net;  // never touched for the empty set
  auto [t0, s0] = constraint_losses(dummy_net, ptrs, fake, ConstraintSet{});
  REQUIRE(t0 == 0.0);
  REQUIRE(s0 == 0.0);

  auto m = build_disguiser(ConstraintSet{true, false}, 9, kImg);
  auto& C = *m.constraint_net;

  SECTION("zeroed head gives uniform 2-class output: task and semantic = ln 2") {
    std::vector<nn::Param<float>*> hp;
    C.heads[0]->collect(hp);
    for (auto* p : hp) p->value.zero();
    auto [task, sem] = constraint_losses(C, ptrs, fake, m.constraints);
    REQUIRE(task == Catch::Approx(std::log(2.0)).margin(1e-9));
    REQUIRE(sem == Catch::Approx(std::log(2.0)).margin(1e-9));
  }

  SECTION("a delta on its own argmax gives semantic ~ 0") {
    std::vector<nn::Param<float>*> hp;
    C.heads[0]->collect(hp);
    for (auto* p : hp) p->value.zero();
    // huge bias on class 0: both real and fake predictions collapse there
    hp[1]->value.data[0] = 50.0f;
    auto [task, sem] = constraint_losses(C, ptrs, fake, m.constraints);
    REQUIRE(sem == Catch::Approx(0.0).margin(1e-6));
  }
}

TEST_CASE("constraint set of none disables C entirely") {
  auto m = build_disguiser(ConstraintSet{}, 4, kImg);
  REQUIRE(m.constraint_net == nullptr);

  GanTrainOptions opts;
  opts.epochs = 1;
  opts.batch = 4;
  opts.seed = 4;
  auto xs = domain_x(10, 6);
  auto ys = domain_y(11, 6);
  train_disguiser(m, xs, ys, opts);
  REQUIRE(m.history.size() == 1);
  REQUIRE(m.history[0].mean.task == 0.0);
  REQUIRE(m.history[0].mean.semantic == 0.0);
  REQUIRE(m.history[0].gate == false);
}

TEST_CASE("empty domains are rejected") {
  auto m = build_disguiser(ConstraintSet{}, 4, kImg);
  GanTrainOptions opts;
  auto xs = domain_x(1, 4);
  DummySet empty;
  REQUIRE_THROWS_AS(train_disguiser(m, {}, domain_y(1, 4), opts), EmptyDomain);
  REQUIRE_THROWS_AS(train_disguiser(m, xs, empty, opts), EmptyDomain);
}

TEST_CASE("semantic gate starts closed for hard tasks and latches once open") {
  // 5-class stimulus constraint: initial task loss ~ ln 5 > 1, so the
  // running mean starts above the threshold.
  auto m = build_disguiser(ConstraintSet{false, true}, 17, kImg);
  GanTrainOptions opts;
  opts.epochs = 2;
  opts.batch = 5;
  opts.seed = 17;
  auto xs = domain_x(20, 10);
  auto ys = domain_y(21, 10);
  train_disguiser(m, xs, ys, opts);
  REQUIRE(m.history[0].gate == false);
  bool seen = false;
  for (const auto& st : m.history) {
    if (seen) REQUIRE(st.gate);  // once enabled, never disables
    seen = seen || st.gate;
    REQUIRE(std::isfinite(st.mean.total_G));
    REQUIRE(std::isfinite(st.mean.total_D));
    REQUIRE(st.mean.cycle >= 0.0);
    REQUIRE(st.mean.task >= 0.0);
    REQUIRE(st.mean.semantic >= 0.0);
  }
}

TEST_CASE("2-class constraint gate opens quickly") {
  auto m = build_disguiser(ConstraintSet{true, false}, 23, kImg);
  GanTrainOptions opts;
  opts.epochs = 2;
  opts.batch = 4;
  opts.seed = 23;
  train_disguiser(m, domain_x(30, 8), domain_y(31, 8), opts);
  REQUIRE(m.history.back().gate == true);
  REQUIRE(m.history.back().ema < 1.0);
}

TEST_CASE("disguise contract: provenance, range, determinism, batch equivalence") {
  auto m = build_disguiser(ConstraintSet{}, 5, kImg);
  auto xs = domain_x(40, 3);

  auto out = disguise(m, xs[0]);
  REQUIRE(out.provenance == Provenance::disguised);
  REQUIRE(out.h == xs[0].h);
  REQUIRE(out.w == xs[0].w);
  REQUIRE(out.subject_id == xs[0].subject_id);
  REQUIRE(out.alcoholism == xs[0].alcoholism);
  REQUIRE(out.stimulus == xs[0].stimulus);
  for (float v : out.pixels) {
    REQUIRE(v >= 0.0f);
    REQUIRE(v <= 1.0f);
  }
  auto again = disguise(m, xs[0]);
  REQUIRE(again.pixels == out.pixels);

  auto batch = disguise_all(m, xs);
  for (std::size_t i = 0; i < xs.size(); ++i)
    REQUIRE(batch[i].pixels == disguise(m, xs[i]).pixels);

  EEGImage dummy = xs[0];
  dummy.provenance = Provenance::dummy;
  REQUIRE_THROWS_AS(disguise(m, dummy), WrongProvenance);
}

TEST_CASE("toy two-domain run: adversarial and cycle losses trend down") {
  auto m = build_disguiser(ConstraintSet{}, 99, kImg);
  GanTrainOptions opts;
  opts.epochs = 30;
  opts.batch = 4;
  opts.seed = 99;
  auto xs = domain_x(50, 8);
  auto ys = domain_y(51, 8);
  train_disguiser(m, xs, ys, opts);
  REQUIRE(m.history.size() == 30);
  REQUIRE(m.history.back().mean.cycle < m.history.front().mean.cycle);
  REQUIRE(m.history.back().mean.adv_G < m.history.front().mean.adv_G);
  for (const auto& st : m.history) REQUIRE(std::isfinite(st.mean.total_G));

  SECTION("disguiser checkpoint round-trips with identical outputs") {
    const auto path = std::filesystem::temp_directory_path() / "eegcloak_gan_test.eckp";
    save_disguiser(path, m);
    auto loaded = load_disguiser(path);
    auto a = disguise(m, xs[0]);
    auto b = disguise(loaded, xs[0]);
    REQUIRE(a.pixels == b.pixels);
    std::filesystem::remove(path);
  }
}
