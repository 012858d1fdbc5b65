#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "eegcloak/rng.hpp"
#include "eegcloak/spectral.hpp"

using namespace eegcloak;

namespace {

// Independent O(N^2) direct DFT oracle.
std::vector<std::complex<double>> direct_dft(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
      const double ang = -2.0 * M_PI * static_cast<double>(k) * static_cast<double>(t) /
                         static_cast<double>(n);
      acc += x[t] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  return out;
}

std::vector<double> random_signal(Rng& rng, std::size_t n = kSamplesPerTrial) {
  std::vector<double> x(n);
  for (auto& v : x) v = rng.normal();
  return x;
}

}  // namespace

TEST_CASE("all-zero input gives all-zero spectrum") {
  std::vector<double> x(kSamplesPerTrial, 0.0);
  for (const auto& b : dft_spectrum(x)) REQUIRE(std::abs(b) == 0.0);
}

TEST_CASE("pure 10 Hz cosine concentrates in bin 10") {
  std::vector<double> x(kSamplesPerTrial);
  for (int n = 0; n < kSamplesPerTrial; ++n) x[n] = std::cos(2.0 * M_PI * 10.0 * n / 256.0);
  const auto spec = dft_spectrum(x);
  REQUIRE(std::abs(spec[10]) == Catch::Approx(128.0).epsilon(1e-12));
  for (int k = 0; k < kSpectrumBins; ++k)
    if (k != 10) REQUIRE(std::abs(spec[k]) < 1e-9);
}

TEST_CASE("FFT agrees with direct DFT oracle on 100 random signals") {
  Rng rng(42);
  for (int rep = 0; rep < 100; ++rep) {
    const auto x = random_signal(rng);
    const auto fast = dft_full(x);
    const auto slow = direct_dft(x);
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < fast.size(); ++k) {
      num += std::norm(fast[k] - slow[k]);
      den += std::norm(slow[k]);
    }
    REQUIRE(std::sqrt(num / den) < 1e-9);
  }
}

TEST_CASE("Parseval relation holds to 1e-9 relative") {
  Rng rng(7);
  for (int rep = 0; rep < 100; ++rep) {
    const auto x = random_signal(rng);
    const auto spec = dft_full(x);
    double time_e = 0.0, freq_e = 0.0;
    for (double v : x) time_e += v * v;
    for (const auto& b : spec) freq_e += std::norm(b);
    freq_e /= static_cast<double>(kSamplesPerTrial);
    REQUIRE(std::abs(time_e - freq_e) / time_e < 1e-9);
  }
}

TEST_CASE("non-finite input is rejected") {
  std::vector<double> x(kSamplesPerTrial, 0.0);
  x[13] = std::nan("");
  REQUIRE_THROWS_AS(dft_spectrum(x), NonFiniteInput);
}

TEST_CASE("band power of the zero spectrum is zero") {
  std::vector<std::complex<double>> spec(kSpectrumBins, {0.0, 0.0});
  for (const auto& b : kBandTable) REQUIRE(band_power(spec, b) == 0.0);
}

TEST_CASE("10 Hz cosine has all band power in alpha") {
  std::vector<double> x(kSamplesPerTrial);
  for (int n = 0; n < kSamplesPerTrial; ++n) x[n] = std::cos(2.0 * M_PI * 10.0 * n / 256.0);
  const auto spec = dft_spectrum(x);
  const double theta = band_power(spec, kBandTheta);
  const double alpha = band_power(spec, kBandAlpha);
  const double beta = band_power(spec, kBandBeta);
  REQUIRE(alpha > 0.0);
  REQUIRE(theta <= 1e-9 * alpha);
  REQUIRE(beta <= 1e-9 * alpha);
}

TEST_CASE("13 Hz tone falls in beta, not alpha (half-open bands)") {
  std::vector<double> x(kSamplesPerTrial);
  for (int n = 0; n < kSamplesPerTrial; ++n) x[n] = std::sin(2.0 * M_PI * 13.0 * n / 256.0);
  const auto spec = dft_spectrum(x);
  REQUIRE(band_power(spec, kBandBeta) > 0.0);
  REQUIRE(band_power(spec, kBandAlpha) <= 1e-9 * band_power(spec, kBandBeta));
}

TEST_CASE("band sum never exceeds total one-sided power") {
  Rng rng(99);
  for (int rep = 0; rep < 20; ++rep) {
    const auto spec = dft_spectrum(random_signal(rng));
    const BandSpec all{"all", 0, kSpectrumBins};
    double bands = 0.0;
    for (const auto& b : kBandTable) bands += band_power(spec, b);
    REQUIRE(bands <= band_power(spec, all) * (1.0 + 1e-12));
  }
}

TEST_CASE("trial of zeros yields a zero feature matrix") {
  Trial t;
  t.samples.assign(static_cast<std::size_t>(kChannels) * kSamplesPerTrial, 0.0);
  const auto f = trial_band_features(t);
  for (double v : f.powers) REQUIRE(v == 0.0);
}

TEST_CASE("single-channel 5 Hz tone lights up only (0, theta)") {
  Trial t;
  t.samples.assign(static_cast<std::size_t>(kChannels) * kSamplesPerTrial, 0.0);
  for (int n = 0; n < kSamplesPerTrial; ++n)
    t.samples[static_cast<std::size_t>(n)] = std::cos(2.0 * M_PI * 5.0 * n / 256.0);
  const auto f = trial_band_features(t);
  REQUIRE(f.at(0, 0) > 0.0);
  for (int ch = 0; ch < kChannels; ++ch)
    for (int b = 0; b < kBands; ++b)
      if (!(ch == 0 && b == 0)) REQUIRE(f.at(ch, b) <= 1e-9 * f.at(0, 0));
}

TEST_CASE("features scale quadratically with signal amplitude") {
  Rng rng(5);
  Trial t;
  t.samples.resize(static_cast<std::size_t>(kChannels) * kSamplesPerTrial);
  for (auto& v : t.samples) v = rng.normal();
  Trial t3 = t;
  for (auto& v : t3.samples) v *= 3.0;
  const auto f = trial_band_features(t);
  const auto f3 = trial_band_features(t3);
  for (std::size_t i = 0; i < f.powers.size(); ++i)
    REQUIRE(f3.powers[i] == Catch::Approx(9.0 * f.powers[i]).epsilon(1e-12));
}
