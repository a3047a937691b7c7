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

#ifndef TENSORSCENE_CHECKPOINT_HPP_
#define TENSORSCENE_CHECKPOINT_HPP_

#include <filesystem>
#include <vector>

#include "tensorscene/dntf.hpp"
#include "tensorscene/training.hpp"

namespace tensorscene {

// Analysis settings the model was trained under, so that separation can
// rebuild the same scene tensor.
struct AnalysisSettings {
  int sample_rate = 0;
  int fft_size = 1024;
  int hop = 256;
};

struct Checkpoint {
  FactorModel model;
  TrainConfig train;
  AnalysisSettings analysis;
};

// JSON container, format "tensorscene-checkpoint" version 1:
//
//   {
//     "format": "tensorscene-checkpoint", "version": 1,
//     "channels": C, "bins": F, "components": K,
//     "dictionary_activation": "softplus",
//     "activation_nonlinearity": "softplus" | "relu",
//     "seed": <uint64>,
//     "train": {batch_frames, n_batches, learning_rate, k, epsilon_floor,
//               seed, activation,
//               init: {decoder: [low, high], encoder: [low, high]}},
//     "analysis": {sample_rate, fft_size, hop},
//     "matrices": {
//       "dec_channel": {"rows": C, "cols": K, "data": [row-major doubles]},
//       "dec_freq":    {"rows": F, "cols": K, "data": [...]},
//       "enc_channel": {"rows": K, "cols": C, "data": [...]},
//       "enc_freq":    {"rows": K, "cols": F, "data": [...]}
//     }
//   }
//
// Doubles are written in shortest round-trip form, so save/load is exact.
void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

// "batch,loss" with one row per batch.
void write_loss_csv(const std::vector<double>& trace,
                    const std::filesystem::path& path);

}  // namespace tensorscene

#endif  // TENSORSCENE_CHECKPOINT_HPP_
