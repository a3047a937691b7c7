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

#include "tensorscene/tensor3.hpp"

#include <cmath>
#include <numbers>

#include "tensorscene/errors.hpp"
#include "tensorscene/scene_tensor.hpp"

namespace tensorscene {

Matrix unfold_frames(const Tensor3& x) {
  const std::size_t channels = x.channels();
  const std::size_t bins = x.bins();
  Matrix out(x.frames(), channels * bins);
  for (std::size_t c = 0; c < channels; ++c) {
    for (std::size_t f = 0; f < bins; ++f) {
      for (std::size_t t = 0; t < x.frames(); ++t) {
        out(t, c * bins + f) = x(c, f, t);
      }
    }
  }
  return out;
}

Tensor3 fold_frames(const Matrix& x_flat, std::size_t channels) {
  if (channels == 0 || x_flat.cols() % channels != 0) {
    throw DimensionError("fold_frames: column count " +
                         std::to_string(x_flat.cols()) +
                         " is not a multiple of the channel count");
  }
  const std::size_t bins = x_flat.cols() / channels;
  Tensor3 out(channels, bins, x_flat.rows());
  for (std::size_t c = 0; c < channels; ++c) {
    for (std::size_t f = 0; f < bins; ++f) {
      for (Eigen::Index t = 0; t < x_flat.rows(); ++t) {
        out(c, f, t) = x_flat(t, c * bins + f);
      }
    }
  }
  return out;
}

void validate(const SceneTensor& scene) {
  const auto& mags = scene.magnitudes;
  if (mags.channels() < 1 || mags.frames() < 1) {
    throw InputError("scene tensor needs at least one channel and one frame");
  }
  if (scene.fft_size <= 0 ||
      mags.bins() != static_cast<std::size_t>(scene.fft_size / 2 + 1)) {
    throw InputError("scene tensor bin count must equal fft_size / 2 + 1");
  }
  if (!scene.phases.same_shape(mags)) {
    throw DimensionError("scene tensor phases and magnitudes differ in shape");
  }
  for (double v : mags.data()) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw InputError("scene tensor magnitudes must be finite and >= 0");
    }
  }
  for (double p : scene.phases.data()) {
    if (!std::isfinite(p) || p <= -std::numbers::pi - 1e-12 ||
        p > std::numbers::pi + 1e-12) {
      throw InputError("scene tensor phases must lie in (-pi, pi]");
    }
  }
}

}  // namespace tensorscene
