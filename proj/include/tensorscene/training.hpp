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

#ifndef TENSORSCENE_TRAINING_HPP_
#define TENSORSCENE_TRAINING_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "tensorscene/dntf.hpp"
#include "tensorscene/tensor3.hpp"

namespace tensorscene {

struct TrainConfig {
  std::size_t batch_frames = 15;
  std::size_t n_batches = 3000;
  double learning_rate = 1e-2;
  std::size_t k = 100;
  double epsilon_floor = 1e-8;
  std::uint64_t seed = 0;
  Nonlinearity activation = Nonlinearity::kSoftplus;
  InitRanges init;
};

// Throws ConfigError unless 1 <= batch_frames <= frames, lr > 0, eps > 0,
// k >= 1 and n_batches >= 1.
void validate(const TrainConfig& cfg, std::size_t frames);

// Draws m distinct frame indices uniformly at random.
std::vector<std::size_t> sample_frame_indices(std::size_t frames,
                                              std::size_t m,
                                              std::mt19937_64& rng);

// Rows of the frame-major unfolding for the given frames.
Matrix gather_frames(const Tensor3& x, const std::vector<std::size_t>& frames);

// sample_frame_indices followed by gather_frames. Throws ConfigError when
// m is 0 or exceeds the frame count.
Matrix sample_minibatch(const Tensor3& x, std::size_t m, std::mt19937_64& rng);

struct TrainResult {
  FactorModel model;
  std::vector<double> loss_trace;  // one entry per batch
};

// Called after every batch with (batch index, loss). Optional.
using TrainObserver = std::function<void(std::size_t, double)>;

// Stochastic minibatch training with Adam. Deterministic for a fixed seed.
// Throws NumericalError (with the batch index) if the loss stops being
// finite.
TrainResult train(const Tensor3& x, const TrainConfig& cfg,
                  const TrainObserver& observer = {});

// Mean of the first and last `window` entries of a loss trace.
double head_mean(const std::vector<double>& trace, std::size_t window);
double tail_mean(const std::vector<double>& trace, std::size_t window);

}  // namespace tensorscene

#endif  // TENSORSCENE_TRAINING_HPP_
