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

#include "tensorscene/signals.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "tensorscene/errors.hpp"
#include "tensorscene/fft.hpp"

namespace tensorscene {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Syllable {
  std::size_t start = 0;
  std::size_t length = 0;
  double f0_begin = 0.0;
  double f0_end = 0.0;
  double formants[3] = {0.0, 0.0, 0.0};
  double gain = 1.0;
};

double formant_gain(double freq, const double (&formants)[3]) {
  static constexpr double kBandwidths[3] = {90.0, 120.0, 180.0};
  static constexpr double kWeights[3] = {1.0, 0.6, 0.3};
  double g = 0.02;
  for (int i = 0; i < 3; ++i) {
    const double u = (freq - formants[i]) / kBandwidths[i];
    g += kWeights[i] / (1.0 + u * u);
  }
  return g;
}

// Applies a power-law spectral tilt |f|^-exponent to white noise.
std::vector<double> colored_noise(double exponent, std::mt19937_64& rng,
                                  std::size_t samples) {
  const std::size_t n = next_pow2(std::max<std::size_t>(samples, 2));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> white(n);
  for (double& v : white) v = normal(rng);
  RealFft fft(n);
  std::vector<std::complex<double>> spec(n / 2 + 1);
  fft.forward(white, spec);
  spec[0] = 0.0;
  for (std::size_t k = 1; k < spec.size(); ++k) {
    spec[k] *= std::pow(static_cast<double>(k), -exponent);
  }
  fft.inverse(spec, white);
  white.resize(samples);
  return white;
}

}  // namespace

std::vector<double> speech_like(std::uint64_t seed, int sample_rate,
                                std::size_t samples) {
  if (sample_rate <= 0) throw ConfigError("speech_like: bad sample rate");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
  const double fs = sample_rate;
  const double base_f0 = uniform(90.0, 240.0);

  std::vector<Syllable> syllables;
  std::size_t cursor = static_cast<std::size_t>(uniform(0.0, 0.1) * fs);
  while (cursor < samples) {
    Syllable s;
    s.start = cursor;
    s.length = static_cast<std::size_t>(uniform(0.12, 0.35) * fs);
    s.f0_begin = base_f0 * uniform(0.85, 1.15);
    s.f0_end = base_f0 * uniform(0.85, 1.15);
    s.formants[0] = uniform(300.0, 850.0);
    s.formants[1] = uniform(900.0, 2300.0);
    s.formants[2] = uniform(2400.0, 3200.0);
    s.gain = uniform(0.5, 1.0);
    syllables.push_back(s);
    cursor += s.length;
    if (unit(rng) < 0.3) cursor += static_cast<std::size_t>(uniform(0.05, 0.3) * fs);
  }

  std::vector<double> out(samples, 0.0);
  std::normal_distribution<double> breath(0.0, 0.01);
  double phase = uniform(0.0, kTwoPi);
  for (const Syllable& s : syllables) {
    const std::size_t end = std::min(samples, s.start + s.length);
    const std::size_t ramp = std::max<std::size_t>(1, s.length / 5);
    for (std::size_t n = s.start; n < end; ++n) {
      const double pos = static_cast<double>(n - s.start) / s.length;
      const double f0 = s.f0_begin + (s.f0_end - s.f0_begin) * pos;
      phase = std::fmod(phase + kTwoPi * f0 / fs, kTwoPi);
      const std::size_t from_start = n - s.start;
      const std::size_t to_end = s.start + s.length - n;
      double env = 1.0;
      if (from_start < ramp) env = 0.5 - 0.5 * std::cos(std::numbers::pi * from_start / ramp);
      if (to_end < ramp) env = std::min(env, 0.5 - 0.5 * std::cos(std::numbers::pi * to_end / ramp));
      const int harmonics = static_cast<int>(0.45 * fs / f0);
      double v = 0.0;
      for (int h = 1; h <= harmonics; ++h) {
        v += formant_gain(h * f0, s.formants) / std::sqrt(static_cast<double>(h)) *
             std::sin(h * phase);
      }
      out[n] = s.gain * env * (v + breath(rng));
    }
  }
  return out;
}

const std::vector<std::string>& ambient_presets() {
  static const std::vector<std::string> presets = {"pink", "brown", "hum", "babble"};
  return presets;
}

std::vector<double> ambient_noise(const std::string& preset, std::uint64_t seed,
                                  int sample_rate, std::size_t samples) {
  std::mt19937_64 rng(seed);
  if (preset == "pink") return colored_noise(0.5, rng, samples);
  if (preset == "brown") return colored_noise(1.0, rng, samples);
  if (preset == "hum") {
    // Engine-like: low harmonics of a drifting fundamental over rumble.
    std::vector<double> out = colored_noise(1.0, rng, samples);
    normalize_rms(out, 0.5);
    std::uniform_real_distribution<double> f(40.0, 70.0);
    const double f0 = f(rng);
    for (std::size_t n = 0; n < samples; ++n) {
      const double t = static_cast<double>(n) / sample_rate;
      const double drift = 1.0 + 0.02 * std::sin(kTwoPi * 0.3 * t);
      for (int h = 1; h <= 6; ++h) {
        out[n] += std::sin(kTwoPi * h * f0 * drift * t) / h;
      }
    }
    return out;
  }
  if (preset == "babble") {
    std::vector<double> out(samples, 0.0);
    for (int talker = 0; talker < 6; ++talker) {
      auto voice = speech_like(rng(), sample_rate, samples);
      normalize_rms(voice, 1.0);
      for (std::size_t n = 0; n < samples; ++n) out[n] += voice[n];
    }
    return out;
  }
  throw ConfigError("unknown ambient preset '" + preset + "'");
}

std::vector<double> tone_mix(std::span<const double> frequencies,
                             int sample_rate, std::size_t samples) {
  std::vector<double> out(samples, 0.0);
  for (double freq : frequencies) {
    for (std::size_t n = 0; n < samples; ++n) {
      out[n] += std::cos(kTwoPi * freq * static_cast<double>(n) / sample_rate);
    }
  }
  return out;
}

double rms(std::span<const double> x) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return std::sqrt(acc / static_cast<double>(x.size()));
}

void normalize_rms(std::vector<double>& x, double target) {
  const double r = rms(x);
  if (r <= 0.0) return;
  const double g = target / r;
  for (double& v : x) v *= g;
}

}  // namespace tensorscene
