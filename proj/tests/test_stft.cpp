// Copyright 2026 The TensorScene Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "tensorscene/audio.hpp"
#include "tensorscene/errors.hpp"
#include "tensorscene/fft.hpp"
#include "tensorscene/stft.hpp"

using namespace tensorscene;

namespace {

constexpr double kPi = std::numbers::pi;

AudioClip clip_from(const std::vector<std::vector<double>>& channels, int sr = 16000) {
  AudioClip clip;
  clip.sample_rate = sr;
  clip.samples.resize(channels.size(), channels[0].size());
  for (std::size_t c = 0; c < channels.size(); ++c)
    for (std::size_t n = 0; n < channels[c].size(); ++n) clip.samples(c, n) = channels[c][n];
  return clip;
}

std::vector<double> noise(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> v(n);
  for (double& s : v) s = g(rng);
  return v;
}

StftOptions small(int n, int hop) {
  StftOptions o;
  o.fft_size = n;
  o.hop = hop;
  return o;
}

}  // namespace

TEST_SUITE("fft") {
  TEST_CASE("forward agrees with a direct DFT and inverse undoes it") {
    std::mt19937_64 rng(1);
    for (std::size_t n : {1u, 2u, 8u, 64u}) {
      const auto x = noise(rng, n);
      RealFft fft(n);
      std::vector<std::complex<double>> spec(n / 2 + 1);
      fft.forward(x, spec);
      const auto ref = oracle::dft(x);
      for (std::size_t k = 0; k < spec.size(); ++k) CHECK(std::abs(spec[k] - ref[k]) < 1e-10);
      std::vector<double> back(n);
      fft.inverse(spec, back);
      for (std::size_t i = 0; i < n; ++i) CHECK(back[i] == doctest::Approx(x[i]).epsilon(1e-12));
    }
  }

  TEST_CASE("convolution and correlation match direct sums") {
    std::mt19937_64 rng(2);
    const auto a = noise(rng, 37), b = noise(rng, 11);
    const auto fast = fft_convolve(a, b);
    const auto slow = oracle::convolve(a, b);
    REQUIRE(fast.size() == slow.size());
    for (std::size_t i = 0; i < fast.size(); ++i) CHECK(std::abs(fast[i] - slow[i]) < 1e-12);

    const auto r = cross_correlation(a, b, 5);
    REQUIRE(r.size() == 6);
    for (std::size_t lag = 0; lag <= 5; ++lag) {
      double s = 0.0;
      for (std::size_t n = 0; n < b.size() && n + lag < a.size(); ++n) s += a[n + lag] * b[n];
      CHECK(std::abs(r[lag] - s) < 1e-12);
    }
  }

  TEST_CASE("next_pow2") {
    CHECK(next_pow2(1) == 1);
    CHECK(next_pow2(5) == 8);
    CHECK(next_pow2(1024) == 1024);
  }
}

TEST_SUITE("stft") {
  TEST_CASE("frame count covers the signal with zero-padded tail") {
    CHECK(frame_count(1024, 1024, 256) == 1);
    CHECK(frame_count(1025, 1024, 256) == 2);
    CHECK(frame_count(80000, 1024, 256) == 310);
    CHECK(frame_count(100, 1024, 256) == 0);
  }

  TEST_CASE("constant signal puts all energy in the DC bin") {
    const AudioClip clip = clip_from({std::vector<double>(64, 1.0)});
    const SceneTensor x = stft(clip, small(16, 4));
    for (std::size_t t = 0; t < x.frames(); ++t) {
      CHECK(x.magnitudes(0, 0, t) == doctest::Approx(8.0));  // sum of periodic Hann(16)
      CHECK(x.magnitudes(0, 1, t) == doctest::Approx(4.0));  // Hann leaks into bin 1
      for (std::size_t f = 2; f < x.bins(); ++f) CHECK(x.magnitudes(0, f, t) < 1e-12);
    }
  }

  TEST_CASE("bin-centered sinusoid peaks at its bin") {
    const int n = 256;
    std::vector<double> s(n * 8);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::cos(2 * kPi * 20 * i / n);
    const SceneTensor x = stft(clip_from({s}), small(n, 64));
    for (std::size_t t = 0; t < x.frames() - 1; ++t) {
      std::size_t best = 0;
      for (std::size_t f = 0; f < x.bins(); ++f)
        if (x.magnitudes(0, f, t) > x.magnitudes(0, best, t)) best = f;
      CHECK(best == 20);
      CHECK(x.magnitudes(0, 20, t) == doctest::Approx(n / 4.0).epsilon(1e-9));
    }
  }

  TEST_CASE("silence is all zeros") {
    const SceneTensor x = stft(clip_from({std::vector<double>(500, 0.0)}), small(64, 16));
    for (double v : x.magnitudes.data()) CHECK(v == 0.0);
    for (double v : x.phases.data()) CHECK(v == 0.0);
  }

  TEST_CASE("shape and phase range") {
    std::mt19937_64 rng(3);
    const SceneTensor x = stft(clip_from({noise(rng, 1000), noise(rng, 1000)}), small(128, 32));
    CHECK(x.channels() == 2);
    CHECK(x.bins() == 65);
    CHECK(x.frames() == frame_count(1000, 128, 32));
    for (double p : x.phases.data()) {
      CHECK(p > -kPi);
      CHECK(p <= kPi);
    }
  }

  TEST_CASE("analysis then synthesis reconstructs the signal") {
    std::mt19937_64 rng(4);
    for (const auto& [n, hop] : {std::pair{1024, 256}, std::pair{256, 64}, std::pair{64, 16}}) {
      const auto s = noise(rng, 5000);
      const StftOptions opt = small(n, hop);
      const SceneTensor x = stft(clip_from({s}), opt);
      const AudioClip y = istft(x.magnitudes, x.phases, x.sample_rate, opt, s.size());
      REQUIRE(y.length() == s.size());
      double err = 0.0;
      for (std::size_t i = n; i + n < s.size(); ++i) err = std::max(err, std::abs(y.samples(0, i) - s[i]));
      CHECK(err < 1e-6);
    }
  }

  TEST_CASE("rectangular window without overlap also round trips") {
    std::mt19937_64 rng(5);
    const auto s = noise(rng, 512);
    StftOptions opt = small(64, 64);
    opt.window = WindowType::kRectangular;
    const SceneTensor x = stft(clip_from({s}), opt);
    const AudioClip y = istft(x.magnitudes, x.phases, 16000, opt, s.size());
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(std::abs(y.samples(0, i) - s[i]) < 1e-12);
  }

  TEST_CASE("power spectrogram squares magnitudes and inverts") {
    std::mt19937_64 rng(6);
    const auto s = noise(rng, 1024);
    StftOptions opt = small(128, 32);
    const SceneTensor mag = stft(clip_from({s}), opt);
    opt.power = true;
    const SceneTensor pow = stft(clip_from({s}), opt);
    for (std::size_t i = 0; i < mag.magnitudes.size(); ++i)
      CHECK(pow.magnitudes.data()[i] == doctest::Approx(mag.magnitudes.data()[i] * mag.magnitudes.data()[i]));
    const AudioClip y = istft(pow.magnitudes, pow.phases, 16000, opt, s.size());
    for (std::size_t i = 128; i + 128 < s.size(); ++i) CHECK(std::abs(y.samples(0, i) - s[i]) < 1e-9);
  }

  TEST_CASE("zero magnitudes synthesize silence for any phase") {
    std::mt19937_64 rng(7);
    Tensor3 mags(1, 33, 10, 0.0), phases(1, 33, 10);
    for (double& p : phases.data()) p = std::uniform_real_distribution<double>(-kPi, kPi)(rng);
    const AudioClip y = istft(mags, phases, 8000, small(64, 16));
    CHECK(y.samples.isZero(0.0));
  }

  TEST_CASE("complex STFT is linear") {
    std::mt19937_64 rng(8);
    const auto a = noise(rng, 700), b = noise(rng, 700);
    std::vector<double> mix(700);
    for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = 2.0 * a[i] - 0.5 * b[i];
    const StftOptions opt = small(64, 16);
    const auto xa = stft(clip_from({a}), opt), xb = stft(clip_from({b}), opt), xm = stft(clip_from({mix}), opt);
    for (std::size_t f = 0; f < xa.bins(); ++f)
      for (std::size_t t = 0; t < xa.frames(); ++t) {
        const auto za = std::polar(xa.magnitudes(0, f, t), xa.phases(0, f, t));
        const auto zb = std::polar(xb.magnitudes(0, f, t), xb.phases(0, f, t));
        const auto zm = std::polar(xm.magnitudes(0, f, t), xm.phases(0, f, t));
        CHECK(std::abs(zm - (2.0 * za - 0.5 * zb)) < 1e-10);
      }
  }

  TEST_CASE("per-frame Parseval identity") {
    std::mt19937_64 rng(9);
    const auto s = noise(rng, 1024);
    const int n = 128, hop = 32;
    const SceneTensor x = stft(clip_from({s}), small(n, hop));
    const auto w = make_window(WindowType::kHann, n);
    for (std::size_t t = 0; t < x.frames(); ++t) {
      double time_energy = 0.0;
      for (int i = 0; i < n; ++i) {
        const std::size_t idx = t * hop + i;
        const double v = idx < s.size() ? w[i] * s[idx] : 0.0;
        time_energy += v * v;
      }
      double freq_energy = 0.0;
      for (std::size_t f = 0; f < x.bins(); ++f) {
        const double weight = (f == 0 || f == x.bins() - 1) ? 1.0 : 2.0;
        freq_energy += weight * x.magnitudes(0, f, t) * x.magnitudes(0, f, t);
      }
      CHECK(std::abs(freq_energy / n - time_energy) < 1e-9 * std::max(1.0, time_energy));
    }
  }

  TEST_CASE("invalid configurations are rejected") {
    const AudioClip clip = clip_from({std::vector<double>(4096, 0.1)});
    CHECK_THROWS_AS(stft(clip, small(1000, 250)), ConfigError);  // not a power of two
    CHECK_THROWS_AS(stft(clip, small(1024, 0)), ConfigError);
    // Squared Hann does not overlap-add to a constant at half-frame hops.
    const SceneTensor x = stft(clip, small(1024, 512));
    CHECK_THROWS_AS(istft(x.magnitudes, x.phases, 16000, small(1024, 512)), ConfigError);
    CHECK_THROWS_AS(stft(clip_from({std::vector<double>(100, 0.0)}), small(1024, 256)), InputError);
  }

  TEST_CASE("loudest channel selects the largest energy, ties to the lowest index") {
    SceneTensor x;
    x.magnitudes = Tensor3(3, 2, 2, 1.0);
    x.phases = Tensor3(3, 2, 2);
    for (std::size_t c = 0; c < 3; ++c)
      for (std::size_t i = 0; i < 4; ++i) x.phases.data()[c * 4 + i] = 0.1 * c;
    Tensor3 s(3, 2, 2);
    const double amp[3] = {0.5, 1.0, 0.75};  // energies 1, 4, 2.25
    for (std::size_t c = 0; c < 3; ++c)
      for (std::size_t f = 0; f < 2; ++f)
        for (std::size_t t = 0; t < 2; ++t) s(c, f, t) = amp[c];
    const LoudestChannel pick = loudest_channel_phase(x, s);
    CHECK(pick.channel == 1);
    CHECK(pick.phases(0, 0) == doctest::Approx(0.1));

    const Tensor3 flat(3, 2, 2, 1.0);
    CHECK(loudest_channel_phase(x, flat).channel == 0);
  }
}

TEST_SUITE("wav") {
  TEST_CASE("float32 round trip is exact for representable samples") {
    std::mt19937_64 rng(10);
    AudioClip clip;
    clip.sample_rate = 22050;
    clip.samples.resize(2, 300);
    for (Eigen::Index i = 0; i < clip.samples.size(); ++i)
      clip.samples(i) = static_cast<float>(std::uniform_real_distribution<double>(-1, 1)(rng));
    const auto path = std::filesystem::temp_directory_path() / "tensorscene_f32.wav";
    write_wav(clip, path);
    const AudioClip back = read_wav(path);
    CHECK(back.sample_rate == 22050);
    CHECK(back.samples == clip.samples);
    std::filesystem::remove(path);
  }

  TEST_CASE("PCM16 round trip within one quantization step, clipped at full scale") {
    AudioClip clip;
    clip.sample_rate = 8000;
    clip.samples.resize(1, 5);
    clip.samples << 0.0, 0.25, -0.5, 1.5, -2.0;
    const auto path = std::filesystem::temp_directory_path() / "tensorscene_pcm.wav";
    write_wav(clip, path, SampleFormat::kPcm16);
    const AudioClip back = read_wav(path);
    CHECK(back.samples(0, 0) == 0.0);
    CHECK(back.samples(0, 1) == 0.25);
    CHECK(back.samples(0, 2) == -0.5);
    CHECK(back.samples(0, 3) == doctest::Approx(32767.0 / 32768.0));
    CHECK(back.samples(0, 4) == -1.0);
    std::filesystem::remove(path);
  }

  TEST_CASE("missing or corrupt files are I/O errors") {
    const auto path = std::filesystem::temp_directory_path() / "tensorscene_bad.wav";
    std::ofstream(path) << "RIFF garbage";
    CHECK_THROWS_AS(read_wav(path), IoError);
    CHECK_THROWS_AS(read_wav(path.string() + ".missing"), IoError);
    std::filesystem::remove(path);
  }
}
