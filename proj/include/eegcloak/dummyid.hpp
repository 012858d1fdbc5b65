#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "eegcloak/errors.hpp"
#include "eegcloak/rng.hpp"
#include "eegcloak/spectral.hpp"
#include "eegcloak/topomap.hpp"

namespace eegcloak {

inline constexpr int kDummyGroups = 10;  // 2 alcoholism classes x 5 stimulus classes

inline int group_key(int alcoholism, int stimulus) {
  if (alcoholism < 0 || alcoholism > 1 || stimulus < 0 || stimulus >= kStimulusClasses)
    throw LabelOutOfRange("invalid (alcoholism, stimulus) pair");
  return alcoholism * kStimulusClasses + stimulus;
}

struct DummySet {
  std::vector<EEGImage> images;  // provenance = dummy
  int k = 0;                     // subjects averaged per exemplar
  int m = 0;                     // exemplars per group
  std::uint64_t seed = 0;
  // contributing subjects per image, parallel to `images`
  std::vector<std::vector<std::string>> contributors;
};

// Grand-average dummy identities: per group, each exemplar picks k distinct
// subjects, averages each subject's training-trial feature matrices, then
// averages across the k subjects (two-stage mean so heavily recorded subjects
// don't dominate), and renders the result with the already-fit normalizer.
inline DummySet make_dummy_set(const std::vector<BandFeatures>& train_features, int k, int m,
                               std::uint64_t seed, const GridInterpolator& interp,
                               const Normalizer& norm) {
  DummySet out;
  out.k = k;
  out.m = m;
  out.seed = seed;

  // group id -> subject id -> that subject's training features in the group
  std::map<int, std::map<std::string, std::vector<const BandFeatures*>>> groups;
  for (const auto& f : train_features)
    groups[group_key(f.alcoholism, f.stimulus)][f.subject_id].push_back(&f);

  for (int g = 0; g < kDummyGroups; ++g) {
    auto git = groups.find(g);
    const int available = git == groups.end() ? 0 : static_cast<int>(git->second.size());
    if (available < k)
      throw InsufficientSubjects("group " + std::to_string(g) + " has " +
                                 std::to_string(available) + " subjects, need k=" +
                                 std::to_string(k));

    std::vector<std::string> subject_ids;
    std::vector<std::vector<double>> subject_means;  // per-subject mean 64x3
    for (const auto& [sid, feats] : git->second) {
      std::vector<double> mean(static_cast<std::size_t>(kChannels) * kBands, 0.0);
      for (const auto* f : feats)
        for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += f->powers[i];
      for (auto& v : mean) v /= static_cast<double>(feats.size());
      subject_ids.push_back(sid);
      subject_means.push_back(std::move(mean));
    }

    Rng rng(Rng::derive(seed, "dummy:g" + std::to_string(g)));
    for (int e = 0; e < m; ++e) {
      const auto chosen = rng.sample_without_replacement(available, k);
      BandFeatures avg;
      avg.alcoholism = g / kStimulusClasses;
      avg.stimulus = g % kStimulusClasses;
      avg.powers.assign(static_cast<std::size_t>(kChannels) * kBands, 0.0);
      std::vector<std::string> contributors;
      for (int c : chosen) {
        const auto& mean = subject_means[static_cast<std::size_t>(c)];
        for (std::size_t i = 0; i < avg.powers.size(); ++i) avg.powers[i] += mean[i];
        contributors.push_back(subject_ids[static_cast<std::size_t>(c)]);
      }
      for (auto& v : avg.powers) v /= static_cast<double>(k);
      avg.subject_id = "dummy:g" + std::to_string(g) + ":" + std::to_string(seed) + ":" +
                       std::to_string(e);

      EEGImage img = assemble_image(avg, interp, norm);
      img.provenance = Provenance::dummy;
      img.subject_id = avg.subject_id;
      out.images.push_back(std::move(img));
      out.contributors.push_back(std::move(contributors));
    }
  }
  return out;
}

}  // namespace eegcloak
