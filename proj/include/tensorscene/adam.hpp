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

#ifndef TENSORSCENE_ADAM_HPP_
#define TENSORSCENE_ADAM_HPP_

#include <cstdint>

#include "tensorscene/dntf.hpp"

namespace tensorscene {

struct AdamOptions {
  double learning_rate = 1e-2;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// First and second moment estimates for every parameter matrix.
struct AdamState {
  std::int64_t step = 0;
  Matrix m_dec_channel, v_dec_channel;
  Matrix m_dec_freq, v_dec_freq;
  Matrix m_enc_channel, v_enc_channel;
  Matrix m_enc_freq, v_enc_freq;
};

// Zero moments shaped like the model's parameters.
AdamState make_adam_state(const FactorModel& model);

// One bias-corrected Adam update of all four matrices in place.
void adam_step(FactorModel& model, const ModelGradients& grads,
               AdamState& state, const AdamOptions& options);

}  // namespace tensorscene

#endif  // TENSORSCENE_ADAM_HPP_
