#pragma once

#include <array>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "eegcloak/dataset.hpp"
#include "eegcloak/io_util.hpp"
#include "eegcloak/rng.hpp"

namespace eegcloak {

// Synthetic corpus generator. Each label is planted as a spatially shaped
// spectral cue: the translator's instance normalization discards global
// per-channel amplitude, so cues that must survive disguising are encoded in
// which electrodes carry a tone, not in how loud a uniform tone is.
//   - alcoholism: 20 Hz (beta) tone on a class-specific half of the montage
//                 (first half for alcoholics, second half for controls),
//   - stimulus:   10 Hz (alpha) tone on the electrodes whose index is
//                 congruent to the stimulus level mod 5,
//   - identity:   a fixed per-subject 6 Hz (theta) watermark confined to a
//                 subject-specific set of electrodes.
// Group averages keep the class masks (shared within a class) but dilute the
// per-subject watermark, so dummy identities retain attributes while carrying
// no single subject's identity.
struct FixtureOptions {
  int subjects_per_class = 5;    // alcoholic + control each
  int trials_per_condition = 6;  // per subject
  std::uint64_t seed = 7;
  int watermark_channels = 6;
  double noise_amp = 1.0;
};

inline const std::array<std::string, kStimulusClasses>& fixture_conditions() {
  static const std::array<std::string, kStimulusClasses> conds = {
      "S1 obj", "S2 match", "S2 match err", "S2 nomatch", "S2 nomatch err"};
  return conds;
}

namespace detail {

inline std::vector<int> watermark_channels_for(int subject_index, int count) {
  std::vector<int> chans;
  for (int k = 0; k < count; ++k)
    chans.push_back((subject_index * 7 + k * 11) % kChannels);
  return chans;
}

}  // namespace detail

inline Trial make_fixture_trial(const std::string& subject_id, int subject_index,
                                int stimulus, int trial_index, Rng& rng,
                                const FixtureOptions& opt) {
  Trial t;
  t.subject_id = subject_id;
  t.alcoholism = detail::class_from_subject_id(subject_id);
  t.stimulus_str = fixture_conditions()[static_cast<std::size_t>(stimulus)];
  t.stimulus = stimulus;
  t.trial_index = trial_index;
  t.samples.assign(static_cast<std::size_t>(kChannels) * kSamplesPerTrial, 0.0);

  const bool alcoholic = t.alcoholism == Alcoholism::alcoholic;
  const double phase_b = rng.uniform() * 2.0 * M_PI;
  const double phase_a = rng.uniform() * 2.0 * M_PI;
  const double phase_t = rng.uniform() * 2.0 * M_PI;

  const auto wm = detail::watermark_channels_for(subject_index, opt.watermark_channels);
  std::vector<char> is_wm(kChannels, 0);
  for (int ch : wm) is_wm[static_cast<std::size_t>(ch)] = 1;

  for (int ch = 0; ch < kChannels; ++ch) {
    const bool beta_on = alcoholic == (ch < kChannels / 2);
    const bool alpha_on = ch % kStimulusClasses == stimulus;
    for (int s = 0; s < kSamplesPerTrial; ++s) {
      const double tt = static_cast<double>(s) / kSampleRateHz;
      double v = opt.noise_amp * rng.normal();
      if (beta_on) v += 6.0 * std::cos(2.0 * M_PI * 20.0 * tt + phase_b);
      if (alpha_on) v += 5.0 * std::cos(2.0 * M_PI * 10.0 * tt + phase_a);
      if (is_wm[static_cast<std::size_t>(ch)])
        v += 8.0 * std::cos(2.0 * M_PI * 6.0 * tt + phase_t);
      t.samples[static_cast<std::size_t>(ch) * kSamplesPerTrial + s] = v;
    }
  }
  return t;
}

// Writes root/<subject>/<subject>.rd.<nnn> text trials for all subjects and
// conditions. Subject ids follow the corpus convention co2<class><digits>.
inline void generate_fixture_corpus(const std::filesystem::path& root,
                                    const FixtureOptions& opt = {}) {
  int subject_index = 0;
  for (const char cls : {'a', 'c'}) {
    for (int s = 0; s < opt.subjects_per_class; ++s) {
      char sid[16];
      std::snprintf(sid, sizeof(sid), "co2%c%07d", cls, s + 1);
      const std::string subject_id = sid;
      Rng rng(Rng::derive(opt.seed, "fixture:" + subject_id));
      int trial_no = 0;
      for (int stim = 0; stim < kStimulusClasses; ++stim)
        for (int rep = 0; rep < opt.trials_per_condition; ++rep) {
          const Trial t =
              make_fixture_trial(subject_id, subject_index, stim, trial_no, rng, opt);
          char fname[32];
          std::snprintf(fname, sizeof(fname), "%s.rd.%03d", subject_id.c_str(), trial_no);
          write_file(root / subject_id / fname, serialize_trial(t));
          ++trial_no;
        }
      ++subject_index;
    }
  }
}

}  // namespace eegcloak
