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

#ifndef TENSORSCENE_AUDIO_HPP_
#define TENSORSCENE_AUDIO_HPP_

#include <cstddef>
#include <filesystem>
#include <vector>

#include "tensorscene/tensor3.hpp"

namespace tensorscene {

// Multichannel audio, one row per channel, nominally in [-1, 1].
struct AudioClip {
  Matrix samples;  // C x N
  int sample_rate = 0;

  std::size_t channels() const { return samples.rows(); }
  std::size_t length() const { return samples.cols(); }
};

// Throws InputError on empty or non-finite audio.
void validate(const AudioClip& clip);

enum class SampleFormat { kPcm16, kFloat32 };

// RIFF/WAVE with 16-bit PCM or 32-bit IEEE float samples.
AudioClip read_wav(const std::filesystem::path& path);
void write_wav(const AudioClip& clip, const std::filesystem::path& path,
               SampleFormat format = SampleFormat::kFloat32);

// Stacks mono (or multichannel) files into one clip. All files must share
// sample rate and length.
AudioClip read_wav_channels(const std::vector<std::filesystem::path>& paths);

}  // namespace tensorscene

#endif  // TENSORSCENE_AUDIO_HPP_
