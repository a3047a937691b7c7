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

#ifndef TENSORSCENE_SCENE_TENSOR_HPP_
#define TENSORSCENE_SCENE_TENSOR_HPP_

#include <cstddef>

#include "tensorscene/tensor3.hpp"

namespace tensorscene {

// Magnitude STFT of a multichannel recording with the phases kept aside for
// resynthesis. magnitudes and phases are both C x F x T with
// F = fft_size / 2 + 1.
struct SceneTensor {
  Tensor3 magnitudes;
  Tensor3 phases;
  int sample_rate = 0;
  int fft_size = 0;
  int hop = 0;
  // Length of the analysed signal, used to trim resynthesized audio.
  std::size_t num_samples = 0;

  std::size_t channels() const { return magnitudes.channels(); }
  std::size_t bins() const { return magnitudes.bins(); }
  std::size_t frames() const { return magnitudes.frames(); }
};

// Throws InputError if any invariant of SceneTensor is violated.
void validate(const SceneTensor& scene);

}  // namespace tensorscene

#endif  // TENSORSCENE_SCENE_TENSOR_HPP_
