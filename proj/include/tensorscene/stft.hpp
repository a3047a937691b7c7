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

#ifndef TENSORSCENE_STFT_HPP_
#define TENSORSCENE_STFT_HPP_

#include <cstddef>
#include <vector>

#include "tensorscene/audio.hpp"
#include "tensorscene/scene_tensor.hpp"

namespace tensorscene {

enum class WindowType { kHann, kRectangular };

struct StftOptions {
  int fft_size = 1024;
  int hop = 256;
  WindowType window = WindowType::kHann;
  // Store |X|^2 instead of |X| in the magnitude tensor.
  bool power = false;
};

// Periodic window of length n.
std::vector<double> make_window(WindowType type, std::size_t n);

// Number of frames for a signal of `samples` samples; the tail is zero
// padded so every sample is covered by at least one frame.
std::size_t frame_count(std::size_t samples, int fft_size, int hop);

// Per-channel windowed real FFT. Throws ConfigError for a non power of two
// fft_size or a hop outside (0, fft_size], InputError when the audio is
// shorter than one frame.
SceneTensor stft(const AudioClip& audio, const StftOptions& options);

// Weighted overlap-add resynthesis with squared-window normalization.
// `length` trims the output (0 keeps (T - 1) * hop + fft_size samples).
// Throws ConfigError if the window/hop pair does not overlap-add to a
// constant.
AudioClip istft(const Tensor3& magnitudes, const Tensor3& phases,
                int sample_rate, const StftOptions& options,
                std::size_t length = 0);

// Single-channel variant for F x T planes.
std::vector<double> istft_plane(const RowMajorMatrix& magnitudes,
                                const RowMajorMatrix& phases,
                                const StftOptions& options,
                                std::size_t length = 0);

// Synthesis from complex per-bin values given as real/imag planes.
std::vector<double> istft_complex(const RowMajorMatrix& real,
                                  const RowMajorMatrix& imag,
                                  const StftOptions& options,
                                  std::size_t length = 0);

struct LoudestChannel {
  std::size_t channel = 0;
  RowMajorMatrix phases;  // F x T
};

// Channel with the largest sum of squared source magnitudes (lowest index on
// ties) and that channel's observed phase plane.
LoudestChannel loudest_channel_phase(const SceneTensor& x,
                                     const Tensor3& source_mags);

}  // namespace tensorscene

#endif  // TENSORSCENE_STFT_HPP_
