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

#include "tensorscene/stft.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "tensorscene/errors.hpp"
#include "tensorscene/fft.hpp"

namespace tensorscene {
namespace {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

void check_options(const StftOptions& o) {
  if (!is_pow2(o.fft_size)) {
    throw ConfigError("fft_size must be a power of two, got " +
                      std::to_string(o.fft_size));
  }
  if (o.hop <= 0 || o.hop > o.fft_size) {
    throw ConfigError("hop must be in (0, fft_size], got " +
                      std::to_string(o.hop));
  }
}

// Sum of squared windows at each offset within a hop; must be constant for
// exact weighted overlap-add.
void check_cola(const std::vector<double>& window, int hop) {
  const std::size_t n = window.size();
  std::vector<double> sums(hop, 0.0);
  for (std::size_t i = 0; i < n; ++i) sums[i % hop] += window[i] * window[i];
  double lo = sums[0], hi = sums[0];
  for (double s : sums) {
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  if (!(lo > 0.0) || (hi - lo) > 1e-9 * hi) {
    throw ConfigError("window/hop pair violates the constant overlap-add "
                      "condition (hop " + std::to_string(hop) + ")");
  }
}

double wrap_phase(double p) {
  return p <= -std::numbers::pi ? std::numbers::pi : p;
}

// Shared overlap-add core. `bins(t, spectrum)` fills frame t's spectrum.
template <typename FillFrame>
std::vector<double> overlap_add(std::size_t frames, const StftOptions& options,
                                std::size_t length, FillFrame fill) {
  check_options(options);
  const auto n_fft = static_cast<std::size_t>(options.fft_size);
  const auto hop = static_cast<std::size_t>(options.hop);
  const auto window = make_window(options.window, n_fft);
  check_cola(window, options.hop);

  const std::size_t full = frames == 0 ? 0 : (frames - 1) * hop + n_fft;
  std::vector<double> out(full, 0.0), norm(full, 0.0);
  RealFft fft(n_fft);
  std::vector<std::complex<double>> spectrum(n_fft / 2 + 1);
  std::vector<double> frame(n_fft);
  for (std::size_t t = 0; t < frames; ++t) {
    fill(t, spectrum);
    fft.inverse(spectrum, frame);
    const std::size_t start = t * hop;
    for (std::size_t i = 0; i < n_fft; ++i) {
      out[start + i] += window[i] * frame[i];
      norm[start + i] += window[i] * window[i];
    }
  }
  double peak_norm = 0.0;
  for (double v : norm) peak_norm = std::max(peak_norm, v);
  for (std::size_t i = 0; i < full; ++i) {
    out[i] = norm[i] > 1e-12 * peak_norm ? out[i] / norm[i] : 0.0;
  }
  if (length != 0) out.resize(length, 0.0);
  return out;
}

}  // namespace

std::vector<double> make_window(WindowType type, std::size_t n) {
  std::vector<double> w(n, 1.0);
  if (type == WindowType::kHann) {
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / n);
    }
  }
  return w;
}

std::size_t frame_count(std::size_t samples, int fft_size, int hop) {
  const auto n_fft = static_cast<std::size_t>(fft_size);
  const auto h = static_cast<std::size_t>(hop);
  if (samples < n_fft) return 0;
  return 1 + (samples - n_fft + h - 1) / h;
}

SceneTensor stft(const AudioClip& audio, const StftOptions& options) {
  check_options(options);
  validate(audio);
  const auto n_fft = static_cast<std::size_t>(options.fft_size);
  const std::size_t samples = audio.length();
  if (samples < n_fft) {
    throw InputError("audio has " + std::to_string(samples) +
                     " samples, shorter than one " + std::to_string(n_fft) +
                     "-sample frame");
  }
  const std::size_t frames = frame_count(samples, options.fft_size, options.hop);
  const std::size_t bins = n_fft / 2 + 1;
  const auto window = make_window(options.window, n_fft);

  SceneTensor scene;
  scene.magnitudes = Tensor3(audio.channels(), bins, frames);
  scene.phases = Tensor3(audio.channels(), bins, frames);
  scene.sample_rate = audio.sample_rate;
  scene.fft_size = options.fft_size;
  scene.hop = options.hop;
  scene.num_samples = samples;

  RealFft fft(n_fft);
  std::vector<double> frame(n_fft);
  std::vector<std::complex<double>> spectrum(bins);
  for (std::size_t c = 0; c < audio.channels(); ++c) {
    for (std::size_t t = 0; t < frames; ++t) {
      const std::size_t start = t * options.hop;
      for (std::size_t i = 0; i < n_fft; ++i) {
        const std::size_t n = start + i;
        frame[i] = n < samples ? window[i] * audio.samples(c, n) : 0.0;
      }
      fft.forward(frame, spectrum);
      for (std::size_t f = 0; f < bins; ++f) {
        const double mag = std::abs(spectrum[f]);
        scene.magnitudes(c, f, t) = options.power ? mag * mag : mag;
        scene.phases(c, f, t) = mag > 0.0 ? wrap_phase(std::arg(spectrum[f])) : 0.0;
      }
    }
  }
  return scene;
}

std::vector<double> istft_plane(const RowMajorMatrix& magnitudes,
                                const RowMajorMatrix& phases,
                                const StftOptions& options,
                                std::size_t length) {
  if (magnitudes.rows() != phases.rows() || magnitudes.cols() != phases.cols()) {
    throw DimensionError("istft: magnitude and phase planes differ in shape");
  }
  if (magnitudes.rows() != options.fft_size / 2 + 1) {
    throw DimensionError("istft: bin count does not match fft_size");
  }
  return overlap_add(
      magnitudes.cols(), options, length,
      [&](std::size_t t, std::vector<std::complex<double>>& spec) {
        for (std::size_t f = 0; f < spec.size(); ++f) {
          double mag = magnitudes(f, t);
          if (options.power) mag = std::sqrt(std::max(mag, 0.0));
          spec[f] = std::polar(mag, phases(f, t));
        }
      });
}

std::vector<double> istft_complex(const RowMajorMatrix& real,
                                  const RowMajorMatrix& imag,
                                  const StftOptions& options,
                                  std::size_t length) {
  if (real.rows() != imag.rows() || real.cols() != imag.cols()) {
    throw DimensionError("istft: real and imaginary planes differ in shape");
  }
  if (real.rows() != options.fft_size / 2 + 1) {
    throw DimensionError("istft: bin count does not match fft_size");
  }
  return overlap_add(real.cols(), options, length,
                     [&](std::size_t t, std::vector<std::complex<double>>& spec) {
                       for (std::size_t f = 0; f < spec.size(); ++f) {
                         spec[f] = {real(f, t), imag(f, t)};
                       }
                     });
}

AudioClip istft(const Tensor3& magnitudes, const Tensor3& phases,
                int sample_rate, const StftOptions& options,
                std::size_t length) {
  if (!magnitudes.same_shape(phases)) {
    throw DimensionError("istft: magnitude and phase tensors differ in shape");
  }
  AudioClip clip;
  clip.sample_rate = sample_rate;
  for (std::size_t c = 0; c < magnitudes.channels(); ++c) {
    const auto y = istft_plane(magnitudes.plane(c), phases.plane(c), options,
                               length);
    if (c == 0) clip.samples.resize(magnitudes.channels(), y.size());
    for (std::size_t n = 0; n < y.size(); ++n) clip.samples(c, n) = y[n];
  }
  return clip;
}

LoudestChannel loudest_channel_phase(const SceneTensor& x,
                                     const Tensor3& source_mags) {
  if (source_mags.channels() != x.channels() || source_mags.bins() != x.bins() ||
      source_mags.frames() != x.frames()) {
    throw DimensionError("loudest_channel_phase: shape mismatch");
  }
  LoudestChannel out;
  double best = -1.0;
  for (std::size_t c = 0; c < source_mags.channels(); ++c) {
    const double energy = source_mags.plane(c).squaredNorm();
    if (energy > best) {
      best = energy;
      out.channel = c;
    }
  }
  out.phases = x.phases.plane(out.channel);
  return out;
}

}  // namespace tensorscene
