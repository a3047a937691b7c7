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

#include "tensorscene/dntf.hpp"

#include <cmath>
#include <string>

#include "tensorscene/errors.hpp"
#include "tensorscene/khatri_rao.hpp"

namespace tensorscene {
namespace {

double softplus(double x) {
  // log(1 + e^x) without overflow for large x.
  if (x > 30.0) return x;
  return std::log1p(std::exp(x));
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

void require_finite(const Matrix& m, const char* name) {
  if (!m.allFinite()) {
    throw NumericalError(std::string("non-finite gradient for ") + name);
  }
}

// Contract a CF x K gradient with respect to khatri_rao(a, b) into
// gradients with respect to a (P x K) and b (Q x K).
void split_khatri_rao_gradient(const Matrix& grad_kr, const Matrix& a,
                               const Matrix& b, Matrix& grad_a,
                               Matrix& grad_b) {
  const Eigen::Index p_rows = a.rows();
  const Eigen::Index q_rows = b.rows();
  grad_a.setZero(p_rows, a.cols());
  grad_b.setZero(q_rows, b.cols());
  for (Eigen::Index k = 0; k < a.cols(); ++k) {
    for (Eigen::Index p = 0; p < p_rows; ++p) {
      const auto block = grad_kr.col(k).segment(p * q_rows, q_rows);
      grad_a(p, k) = block.dot(b.col(k));
      grad_b.col(k) += a(p, k) * block;
    }
  }
}

}  // namespace

std::string to_string(Nonlinearity n) {
  return n == Nonlinearity::kRelu ? "relu" : "softplus";
}

Nonlinearity parse_nonlinearity(const std::string& name) {
  if (name == "softplus") return Nonlinearity::kSoftplus;
  if (name == "relu") return Nonlinearity::kRelu;
  throw ConfigError("unknown nonlinearity '" + name + "'");
}

Matrix activate(const Matrix& pre, Nonlinearity n) {
  if (n == Nonlinearity::kRelu) return pre.cwiseMax(0.0);
  return pre.unaryExpr([](double x) { return softplus(x); });
}

Matrix activate_derivative(const Matrix& pre, Nonlinearity n) {
  if (n == Nonlinearity::kRelu) {
    return pre.unaryExpr([](double x) { return x > 0.0 ? 1.0 : 0.0; });
  }
  return pre.unaryExpr([](double x) { return sigmoid(x); });
}

Matrix FactorModel::channel_dictionary() const {
  return activate(dec_channel, dictionary_activation);
}

Matrix FactorModel::spectral_dictionary() const {
  return activate(dec_freq, dictionary_activation);
}

void validate(const FactorModel& model) {
  const Eigen::Index k = model.dec_channel.cols();
  if (k < 1) throw DimensionError("factor model needs at least one component");
  if (model.dec_freq.cols() != k || model.enc_channel.rows() != k ||
      model.enc_freq.rows() != k) {
    throw DimensionError("factor model component counts disagree");
  }
  if (model.enc_channel.cols() != model.dec_channel.rows() ||
      model.enc_freq.cols() != model.dec_freq.rows()) {
    throw DimensionError("factor model encoder/decoder shapes disagree");
  }
  if (!model.dec_channel.allFinite() || !model.dec_freq.allFinite() ||
      !model.enc_channel.allFinite() || !model.enc_freq.allFinite()) {
    throw NumericalError("factor model has non-finite parameters");
  }
}

void validate(const InitRanges& ranges) {
  for (const auto& r : {ranges.decoder, ranges.encoder}) {
    if (!std::isfinite(r[0]) || !std::isfinite(r[1]) || !(r[0] < r[1])) {
      throw ConfigError("init range must be finite with low < high");
    }
  }
}

FactorModel init_model(std::size_t channels, std::size_t bins,
                       std::size_t components, std::mt19937_64& rng,
                       Nonlinearity activation, const InitRanges& ranges) {
  if (channels == 0 || bins == 0 || components == 0) {
    throw ConfigError("init_model: all dimensions must be positive");
  }
  validate(ranges);
  auto draw = [&](Eigen::Index rows, Eigen::Index cols,
                  const std::array<double, 2>& range) {
    std::uniform_real_distribution<double> uniform(range[0], range[1]);
    Matrix m(rows, cols);
    // Row-major fill so the draw order does not depend on Eigen's layout.
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = uniform(rng);
    }
    return m;
  };
  const auto c = static_cast<Eigen::Index>(channels);
  const auto f = static_cast<Eigen::Index>(bins);
  const auto k = static_cast<Eigen::Index>(components);
  FactorModel model;
  model.dec_channel = draw(c, k, ranges.decoder);
  model.dec_freq = draw(f, k, ranges.decoder);
  model.enc_channel = draw(k, c, ranges.encoder);
  model.enc_freq = draw(k, f, ranges.encoder);
  model.activation_nonlinearity = activation;
  return model;
}

Matrix encoder_basis(const FactorModel& model) {
  return khatri_rao(model.enc_channel.transpose(), model.enc_freq.transpose());
}

Matrix decoder_basis(const FactorModel& model) {
  return khatri_rao(model.channel_dictionary(), model.spectral_dictionary());
}

Matrix encode(const FactorModel& model, const Matrix& x_flat) {
  const auto width =
      static_cast<Eigen::Index>(model.channels() * model.bins());
  if (x_flat.cols() != width) {
    throw DimensionError("encode: input has " + std::to_string(x_flat.cols()) +
                         " columns, model expects C*F = " +
                         std::to_string(width));
  }
  const Matrix pre = x_flat * encoder_basis(model);
  return activate(pre, model.activation_nonlinearity);
}

Matrix decode(const FactorModel& model, const Matrix& h) {
  if (h.cols() != static_cast<Eigen::Index>(model.components())) {
    throw DimensionError("decode: activation matrix has " +
                         std::to_string(h.cols()) + " columns, model has " +
                         std::to_string(model.components()) + " components");
  }
  return h * decoder_basis(model).transpose();
}

double is_divergence(const Matrix& x, const Matrix& x_hat, double eps) {
  if (x.rows() != x_hat.rows() || x.cols() != x_hat.cols()) {
    throw DimensionError("is_divergence: shape mismatch");
  }
  if (!(eps > 0.0)) throw ConfigError("is_divergence: eps must be positive");
  if (x.size() == 0) return 0.0;
  const auto ratio = (x.array().max(eps) / x_hat.array().max(eps)).eval();
  return (ratio - ratio.log() - 1.0).mean();
}

double is_divergence(const Tensor3& x, const Tensor3& x_hat, double eps) {
  if (!x.same_shape(x_hat)) {
    throw DimensionError("is_divergence: shape mismatch");
  }
  const Eigen::Map<const Matrix> a(x.data().data(), 1, x.size());
  const Eigen::Map<const Matrix> b(x_hat.data().data(), 1, x_hat.size());
  return is_divergence(Matrix(a), Matrix(b), eps);
}

ModelGradients compute_gradients(const FactorModel& model,
                                 const Matrix& x_batch, double eps) {
  const Matrix enc_basis = encoder_basis(model);
  if (x_batch.cols() != enc_basis.rows()) {
    throw DimensionError("compute_gradients: batch width does not match C*F");
  }
  const Matrix d = model.channel_dictionary();
  const Matrix w = model.spectral_dictionary();
  const Matrix dec_basis = khatri_rao(d, w);

  const Matrix pre = x_batch * enc_basis;
  const Matrix h = activate(pre, model.activation_nonlinearity);
  const Matrix x_hat = h * dec_basis.transpose();

  ModelGradients g;
  g.loss = is_divergence(x_batch, x_hat, eps);

  // d/dy of (x/y - log(x/y) - 1) = 1/y - x/y^2, zero where y is floored.
  const double scale = 1.0 / static_cast<double>(x_batch.size());
  const auto xf = x_batch.array().max(eps);
  const auto yf = x_hat.array().max(eps);
  const Matrix grad_xhat =
      ((x_hat.array() > eps)
           .select((1.0 / yf - xf / (yf * yf)) * scale, 0.0))
          .matrix();

  const Matrix grad_h = grad_xhat * dec_basis;
  const Matrix grad_dec_basis = grad_xhat.transpose() * h;
  Matrix grad_d, grad_w;
  split_khatri_rao_gradient(grad_dec_basis, d, w, grad_d, grad_w);
  g.dec_channel = grad_d.cwiseProduct(
      activate_derivative(model.dec_channel, model.dictionary_activation));
  g.dec_freq = grad_w.cwiseProduct(
      activate_derivative(model.dec_freq, model.dictionary_activation));

  const Matrix grad_pre = grad_h.cwiseProduct(
      activate_derivative(pre, model.activation_nonlinearity));
  const Matrix grad_enc_basis = x_batch.transpose() * grad_pre;
  Matrix grad_ec, grad_ef;
  split_khatri_rao_gradient(grad_enc_basis, model.enc_channel.transpose(),
                            model.enc_freq.transpose(), grad_ec, grad_ef);
  g.enc_channel = grad_ec.transpose();
  g.enc_freq = grad_ef.transpose();

  require_finite(g.dec_channel, "dec_channel");
  require_finite(g.dec_freq, "dec_freq");
  require_finite(g.enc_channel, "enc_channel");
  require_finite(g.enc_freq, "enc_freq");
  return g;
}

double reconstruction_loss(const FactorModel& model, const Tensor3& x,
                           double eps) {
  const Matrix x_flat = unfold_frames(x);
  return is_divergence(x_flat, decode(model, encode(model, x_flat)), eps);
}

}  // namespace tensorscene
