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

#include "tensorscene/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "tensorscene/adam.hpp"
#include "tensorscene/errors.hpp"

namespace tensorscene {

void validate(const TrainConfig& cfg, std::size_t frames) {
  if (cfg.batch_frames < 1 || cfg.batch_frames > frames) {
    throw ConfigError("batch_frames must be in [1, " + std::to_string(frames) +
                      "], got " + std::to_string(cfg.batch_frames));
  }
  if (!(cfg.learning_rate > 0.0)) {
    throw ConfigError("learning_rate must be positive");
  }
  if (!(cfg.epsilon_floor > 0.0)) {
    throw ConfigError("epsilon_floor must be positive");
  }
  if (cfg.k < 1) throw ConfigError("k must be at least 1");
  if (cfg.n_batches < 1) throw ConfigError("n_batches must be at least 1");
  validate(cfg.init);
}

std::vector<std::size_t> sample_frame_indices(std::size_t frames,
                                              std::size_t m,
                                              std::mt19937_64& rng) {
  if (m == 0 || m > frames) {
    throw ConfigError("minibatch of " + std::to_string(m) +
                      " frames requested from " + std::to_string(frames));
  }
  std::vector<std::size_t> pool(frames);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  // Partial Fisher-Yates: the first m entries are a uniform sample without
  // replacement.
  for (std::size_t i = 0; i < m; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, frames - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(m);
  return pool;
}

Matrix gather_frames(const Tensor3& x, const std::vector<std::size_t>& frames) {
  const std::size_t bins = x.bins();
  Matrix out(frames.size(), x.channels() * bins);
  for (std::size_t row = 0; row < frames.size(); ++row) {
    const std::size_t t = frames[row];
    if (t >= x.frames()) throw DimensionError("gather_frames: frame out of range");
    for (std::size_t c = 0; c < x.channels(); ++c) {
      for (std::size_t f = 0; f < bins; ++f) {
        out(row, c * bins + f) = x(c, f, t);
      }
    }
  }
  return out;
}

Matrix sample_minibatch(const Tensor3& x, std::size_t m, std::mt19937_64& rng) {
  return gather_frames(x, sample_frame_indices(x.frames(), m, rng));
}

TrainResult train(const Tensor3& x, const TrainConfig& cfg,
                  const TrainObserver& observer) {
  if (x.empty()) throw InputError("train: empty scene tensor");
  validate(cfg, x.frames());

  std::mt19937_64 rng(cfg.seed);
  TrainResult result;
  result.model = init_model(x.channels(), x.bins(), cfg.k, rng, cfg.activation,
                            cfg.init);
  AdamState state = make_adam_state(result.model);
  AdamOptions adam;
  adam.learning_rate = cfg.learning_rate;

  result.loss_trace.reserve(cfg.n_batches);
  for (std::size_t batch = 0; batch < cfg.n_batches; ++batch) {
    const Matrix x_batch = sample_minibatch(x, cfg.batch_frames, rng);
    ModelGradients grads;
    try {
      grads = compute_gradients(result.model, x_batch, cfg.epsilon_floor);
    } catch (const NumericalError& e) {
      throw NumericalError(std::string(e.what()) + " at batch " +
                           std::to_string(batch));
    }
    if (!std::isfinite(grads.loss)) {
      throw NumericalError("training diverged: loss is not finite at batch " +
                           std::to_string(batch));
    }
    result.loss_trace.push_back(grads.loss);
    if (observer) observer(batch, grads.loss);
    adam_step(result.model, grads, state, adam);
  }
  return result;
}

double head_mean(const std::vector<double>& trace, std::size_t window) {
  const std::size_t n = std::min(window, trace.size());
  if (n == 0) return 0.0;
  return std::accumulate(trace.begin(), trace.begin() + n, 0.0) / n;
}

double tail_mean(const std::vector<double>& trace, std::size_t window) {
  const std::size_t n = std::min(window, trace.size());
  if (n == 0) return 0.0;
  return std::accumulate(trace.end() - n, trace.end(), 0.0) / n;
}

}  // namespace tensorscene
