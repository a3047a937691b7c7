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

#include "tensorscene/adam.hpp"

#include <cmath>

namespace tensorscene {
namespace {

void update(Matrix& param, const Matrix& grad, Matrix& m, Matrix& v,
            double step_size, double bias2, const AdamOptions& o) {
  m = o.beta1 * m + (1.0 - o.beta1) * grad;
  v = o.beta2 * v + (1.0 - o.beta2) * grad.cwiseAbs2();
  // step_size already carries lr / (1 - beta1^t).
  param.array() -=
      step_size * m.array() / ((v.array() / bias2).sqrt() + o.epsilon);
}

}  // namespace

AdamState make_adam_state(const FactorModel& model) {
  AdamState s;
  s.m_dec_channel = s.v_dec_channel = Matrix::Zero(
      model.dec_channel.rows(), model.dec_channel.cols());
  s.m_dec_freq = s.v_dec_freq =
      Matrix::Zero(model.dec_freq.rows(), model.dec_freq.cols());
  s.m_enc_channel = s.v_enc_channel = Matrix::Zero(
      model.enc_channel.rows(), model.enc_channel.cols());
  s.m_enc_freq = s.v_enc_freq =
      Matrix::Zero(model.enc_freq.rows(), model.enc_freq.cols());
  return s;
}

void adam_step(FactorModel& model, const ModelGradients& grads,
               AdamState& state, const AdamOptions& options) {
  ++state.step;
  const auto t = static_cast<double>(state.step);
  const double bias1 = 1.0 - std::pow(options.beta1, t);
  const double bias2 = 1.0 - std::pow(options.beta2, t);
  const double step_size = options.learning_rate / bias1;
  update(model.dec_channel, grads.dec_channel, state.m_dec_channel,
         state.v_dec_channel, step_size, bias2, options);
  update(model.dec_freq, grads.dec_freq, state.m_dec_freq, state.v_dec_freq,
         step_size, bias2, options);
  update(model.enc_channel, grads.enc_channel, state.m_enc_channel,
         state.v_enc_channel, step_size, bias2, options);
  update(model.enc_freq, grads.enc_freq, state.m_enc_freq, state.v_enc_freq,
         step_size, bias2, options);
}

}  // namespace tensorscene
