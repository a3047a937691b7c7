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

#ifndef TENSORSCENE_DNTF_HPP_
#define TENSORSCENE_DNTF_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>

#include "tensorscene/tensor3.hpp"

namespace tensorscene {

enum class Nonlinearity { kSoftplus, kRelu };

std::string to_string(Nonlinearity n);
Nonlinearity parse_nonlinearity(const std::string& name);

// Elementwise activation and its derivative with respect to the
// pre-activation value.
Matrix activate(const Matrix& pre, Nonlinearity n);
Matrix activate_derivative(const Matrix& pre, Nonlinearity n);

// Nonnegative tensor factorization written as an autoencoder.
//
//   encoder: H     = sigma_h(X * khatri_rao(enc_channel^T, enc_freq^T))
//   decoder: X_hat = H * khatri_rao(sigma(dec_channel), sigma(dec_freq))^T
//
// X is the frame-major unfolding (M x C*F) of the scene tensor. The decoder
// matrices are stored before activation; channel_dictionary() and
// spectral_dictionary() return the nonnegative factors D and W.
struct FactorModel {
  Matrix dec_channel;  // C x K
  Matrix dec_freq;     // F x K
  Matrix enc_channel;  // K x C
  Matrix enc_freq;     // K x F
  Nonlinearity dictionary_activation = Nonlinearity::kSoftplus;
  Nonlinearity activation_nonlinearity = Nonlinearity::kSoftplus;

  std::size_t channels() const { return dec_channel.rows(); }
  std::size_t bins() const { return dec_freq.rows(); }
  std::size_t components() const { return dec_channel.cols(); }

  Matrix channel_dictionary() const;   // D, C x K, >= 0
  Matrix spectral_dictionary() const;  // W, F x K, >= 0
};

// Shapes and finiteness. Throws DimensionError or NumericalError.
void validate(const FactorModel& model);

// Half-open uniform ranges for the pre-activation parameters. The wide
// decoder range gives each component a distinct spectral and spatial shape
// from the start; with a narrow one all columns begin nearly identical and
// early training lets one or two components absorb the whole scene.
struct InitRanges {
  std::array<double, 2> decoder{-3.0, 3.0};
  std::array<double, 2> encoder{-0.1, 0.1};
};

// Throws ConfigError unless each range is finite with low < high.
void validate(const InitRanges& ranges);

// Decoder matrices drawn i.i.d. from ranges.decoder, encoder matrices from
// ranges.encoder, in the order dec_channel, dec_freq, enc_channel, enc_freq.
FactorModel init_model(std::size_t channels, std::size_t bins,
                       std::size_t components, std::mt19937_64& rng,
                       Nonlinearity activation = Nonlinearity::kSoftplus,
                       const InitRanges& ranges = {});

// The encoder's pseudo-inverse approximation khatri_rao(enc_channel^T,
// enc_freq^T), CF x K.
Matrix encoder_basis(const FactorModel& model);
// khatri_rao(D, W), CF x K.
Matrix decoder_basis(const FactorModel& model);

// x_flat is M x CF. Returns H, M x K.
Matrix encode(const FactorModel& model, const Matrix& x_flat);
// h is M x K. Returns X_hat, M x CF.
Matrix decode(const FactorModel& model, const Matrix& h);

// Mean Itakura-Saito divergence over all elements, x / x_hat - log(x / x_hat)
// - 1, with both arguments floored at eps.
double is_divergence(const Matrix& x, const Matrix& x_hat, double eps);
double is_divergence(const Tensor3& x, const Tensor3& x_hat, double eps);

struct ModelGradients {
  double loss = 0.0;
  Matrix dec_channel;
  Matrix dec_freq;
  Matrix enc_channel;
  Matrix enc_freq;
};

// Loss and exact gradients of is_divergence(x, decode(encode(x))) with
// respect to all four parameter matrices. Throws NumericalError naming the
// first parameter whose gradient is not finite.
ModelGradients compute_gradients(const FactorModel& model,
                                 const Matrix& x_batch, double eps);

// Full-tensor reconstruction loss of a model.
double reconstruction_loss(const FactorModel& model, const Tensor3& x,
                           double eps);

}  // namespace tensorscene

#endif  // TENSORSCENE_DNTF_HPP_
