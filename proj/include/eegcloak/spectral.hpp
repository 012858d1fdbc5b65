#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "eegcloak/dataset.hpp"
#include "eegcloak/errors.hpp"

namespace eegcloak {

inline constexpr int kSpectrumBins = kSamplesPerTrial / 2 + 1;  // 129, 1 Hz resolution
inline constexpr int kBands = 3;

struct BandSpec {
  const char* name;
  int lo_hz;  // inclusive
  int hi_hz;  // exclusive
};

// theta/alpha/beta, half-open so the touching edges (8, 13 Hz) are unambiguous
inline constexpr BandSpec kBandTheta{"theta", 4, 8};
inline constexpr BandSpec kBandAlpha{"alpha", 8, 13};
inline constexpr BandSpec kBandBeta{"beta", 13, 30};
inline constexpr BandSpec kBandTable[kBands] = {kBandTheta, kBandAlpha, kBandBeta};

namespace detail {

// In-place iterative radix-2 FFT, n a power of two.
inline void fft_pow2(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * M_PI / static_cast<double>(len);
    const std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        std::complex<double> u = a[i + k];
        std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

}  // namespace detail

// Full two-sided DFT (length n); kept separate so tests can check Parseval
// over all bins.
inline std::vector<std::complex<double>> dft_full(const std::vector<double>& x) {
  std::vector<std::complex<double>> a(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) throw NonFiniteInput("non-finite sample in dft input");
    a[i] = std::complex<double>(x[i], 0.0);
  }
  detail::fft_pow2(a);
  return a;
}

// Non-redundant half of the spectrum of a 256-sample signal: 129 bins, bin k
// corresponds to k Hz at the 256 Hz sampling rate.
inline std::vector<std::complex<double>> dft_spectrum(const std::vector<double>& x) {
  if (x.size() != kSamplesPerTrial)
    throw NonFiniteInput("dft_spectrum expects 256 samples, got " + std::to_string(x.size()));
  auto full = dft_full(x);
  full.resize(kSpectrumBins);
  return full;
}

// One-sided band power: sum of squared magnitudes over integer-Hz bins in
// [lo, hi), doubling interior bins to account for the mirrored half.
inline double band_power(const std::vector<std::complex<double>>& spectrum, const BandSpec& band) {
  double p = 0.0;
  for (int k = band.lo_hz; k < band.hi_hz && k < static_cast<int>(spectrum.size()); ++k) {
    const double mag2 = std::norm(spectrum[static_cast<std::size_t>(k)]);
    p += (k == 0 || k == kSamplesPerTrial / 2) ? mag2 : 2.0 * mag2;
  }
  return p;
}

// Per-trial 64 x 3 band-power matrix with the trial labels carried through.
struct BandFeatures {
  std::string subject_id;
  int alcoholism = 0;
  int stimulus = -1;
  std::string trial_id;
  std::vector<double> powers;  // kChannels * kBands, row-major

  double& at(int ch, int band) { return powers[static_cast<std::size_t>(ch) * kBands + band]; }
  double at(int ch, int band) const {
    return powers[static_cast<std::size_t>(ch) * kBands + band];
  }
};

inline BandFeatures trial_band_features(const Trial& trial,
                                        const BandSpec* bands = kBandTable) {
  BandFeatures f;
  f.subject_id = trial.subject_id;
  f.alcoholism = static_cast<int>(trial.alcoholism);
  f.stimulus = trial.stimulus;
  f.powers.assign(static_cast<std::size_t>(kChannels) * kBands, 0.0);
  std::vector<double> channel(kSamplesPerTrial);
  for (int ch = 0; ch < kChannels; ++ch) {
    for (int t = 0; t < kSamplesPerTrial; ++t) channel[static_cast<std::size_t>(t)] = trial.at(ch, t);
    const auto spec = dft_spectrum(channel);
    for (int b = 0; b < kBands; ++b) f.at(ch, b) = band_power(spec, bands[b]);
  }
  return f;
}

}  // namespace eegcloak
