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

#include "tensorscene/separation.hpp"

#include <cmath>
#include <string>

#include "tensorscene/errors.hpp"
#include "tensorscene/khatri_rao.hpp"

namespace tensorscene {
namespace {

StftOptions synthesis_options(const SceneTensor& x, const SeparationOptions& o) {
  StftOptions s;
  s.fft_size = x.fft_size;
  s.hop = x.hop;
  s.window = o.window;
  return s;
}

double frame_objective(const Matrix& x_t, const Matrix& centers, const Matrix& s) {
  return (x_t - centers * s).squaredNorm();
}

}  // namespace

std::string to_string(SeparationMethod m) {
  return m == SeparationMethod::kAssignment ? "assignment" : "center";
}

void normalize_components(Matrix& d, Matrix& w) {
  if (d.cols() != w.cols()) {
    throw DimensionError("normalize_components: column counts differ");
  }
  for (Eigen::Index k = 0; k < d.cols(); ++k) {
    const double norm = d.col(k).norm();
    if (norm > 0.0) {
      d.col(k) /= norm;
      w.col(k) *= norm;
    }
  }
}

Vector component_energy(const FactorModel& model, const Matrix& h) {
  if (h.cols() != static_cast<Eigen::Index>(model.components())) {
    throw DimensionError("component_energy: activation width does not match K");
  }
  const Matrix d = model.channel_dictionary();
  const Matrix w = model.spectral_dictionary();
  Vector e(h.cols());
  for (Eigen::Index k = 0; k < h.cols(); ++k) {
    const double g = h.col(k).norm() * d.col(k).norm() *
                     w.col(k).norm();
    e(k) = g * g;
  }
  return e;
}

ClusterModel cluster_components(const FactorModel& model,
                                std::size_t n_sources, std::uint64_t seed,
                                bool normalize, const KMeansOptions& options,
                                const Vector& weights) {
  Matrix d = model.channel_dictionary();
  if (normalize) {
    Matrix w = model.spectral_dictionary();
    normalize_components(d, w);
  }
  return kmeans_channels(d, n_sources, seed, options, weights);
}

std::vector<Tensor3> cluster_reconstructions(
    const FactorModel& model, const Matrix& h,
    const std::vector<std::size_t>& assignments, std::size_t n_sources) {
  if (assignments.size() != model.components() ||
      h.cols() != static_cast<Eigen::Index>(model.components())) {
    throw DimensionError("cluster_reconstructions: component count mismatch");
  }
  std::vector<Tensor3> out;
  out.reserve(n_sources);
  for (std::size_t s = 0; s < n_sources; ++s) {
    Matrix h_s = h;
    for (std::size_t k = 0; k < assignments.size(); ++k) {
      if (assignments[k] >= n_sources) {
        throw DimensionError("cluster_reconstructions: assignment out of range");
      }
      if (assignments[k] != s) h_s.col(k).setZero();
    }
    out.push_back(fold_frames(decode(model, h_s), model.channels()));
  }
  return out;
}

std::vector<Tensor3> ratio_masks(const std::vector<Tensor3>& sources, double eps) {
  if (sources.empty()) return {};
  Tensor3 total(sources[0].channels(), sources[0].bins(), sources[0].frames());
  for (const auto& s : sources) {
    if (!s.same_shape(total)) throw DimensionError("ratio_masks: shape mismatch");
    for (std::size_t i = 0; i < s.size(); ++i) total.data()[i] += s.data()[i];
  }
  std::vector<Tensor3> masks;
  masks.reserve(sources.size());
  for (const auto& s : sources) {
    Tensor3 m(s.channels(), s.bins(), s.frames());
    for (std::size_t i = 0; i < s.size(); ++i) {
      m.data()[i] = s.data()[i] / (total.data()[i] + eps);
    }
    masks.push_back(std::move(m));
  }
  return masks;
}

SeparationResult separate_by_assignment(const SceneTensor& x,
                                        const FactorModel& model,
                                        const ClusterModel& clusters,
                                        const SeparationOptions& options) {
  if (model.channels() != x.channels() || model.bins() != x.bins()) {
    throw DimensionError("separate_by_assignment: model does not match scene");
  }
  const Matrix h = encode(model, unfold_frames(x.magnitudes));
  SeparationResult result;
  result.method = SeparationMethod::kAssignment;
  result.per_source_multichannel =
      cluster_reconstructions(model, h, clusters.assignments, clusters.n_sources);
  const auto masks = ratio_masks(result.per_source_multichannel, options.eps);

  const StftOptions synth = synthesis_options(x, options);
  const double channel_scale =
      options.average_channels ? 1.0 / static_cast<double>(x.channels()) : 1.0;
  for (std::size_t s = 0; s < clusters.n_sources; ++s) {
    RowMajorMatrix re = RowMajorMatrix::Zero(x.bins(), x.frames());
    RowMajorMatrix im = RowMajorMatrix::Zero(x.bins(), x.frames());
    for (std::size_t c = 0; c < x.channels(); ++c) {
      const auto mask = masks[s].plane(c);
      const auto mag = x.magnitudes.plane(c);
      const auto phase = x.phases.plane(c);
      const RowMajorMatrix filtered = mask.cwiseProduct(mag);
      re += filtered.cwiseProduct(phase.array().cos().matrix());
      im += filtered.cwiseProduct(phase.array().sin().matrix());
    }
    re *= channel_scale;
    im *= channel_scale;
    AudioClip clip;
    clip.sample_rate = x.sample_rate;
    const auto y = istft_complex(re, im, synth, x.num_samples);
    clip.samples = Eigen::Map<const Matrix>(y.data(), 1, y.size());
    result.per_source_audio.push_back(std::move(clip));
    result.source_channels.push_back(
        loudest_channel_phase(x, result.per_source_multichannel[s]).channel);
  }
  return result;
}

Matrix solve_frame_nmf(const Matrix& x_t, const Matrix& centers,
                       std::size_t max_iterations, double tolerance,
                       double eps, const Matrix* init,
                       std::vector<double>* objective_trace) {
  if (x_t.rows() != centers.rows()) {
    throw DimensionError("solve_frame_nmf: channel counts differ");
  }
  const Matrix ctx = centers.transpose() * x_t;
  const Matrix ctc = centers.transpose() * centers;
  Matrix s;
  if (init != nullptr) {
    if (init->rows() != centers.cols() || init->cols() != x_t.cols()) {
      throw DimensionError("solve_frame_nmf: init has the wrong shape");
    }
    s = *init;
  } else {
    // Best single constant: argmin_a ||x_t - a * centers * ones||^2.
    const Vector row_sums = centers.rowwise().sum();
    const double denom = row_sums.squaredNorm() * static_cast<double>(x_t.cols());
    const double a = denom > 0.0 ? (row_sums.transpose() * x_t).sum() / denom : 0.0;
    s = Matrix::Constant(centers.cols(), x_t.cols(), std::max(a, 0.0));
  }
  double previous = frame_objective(x_t, centers, s);
  if (objective_trace != nullptr) objective_trace->push_back(previous);
  for (std::size_t iter = 0; iter < max_iterations; ++iter) {
    s = s.cwiseProduct(ctx).cwiseQuotient(
        (ctc * s).unaryExpr([eps](double v) { return v + eps; }));
    const double current = frame_objective(x_t, centers, s);
    if (objective_trace != nullptr) objective_trace->push_back(current);
    const bool settled =
        previous <= 0.0 || std::abs(previous - current) < tolerance * previous;
    previous = current;
    if (settled) break;
  }
  return s;
}

SeparationResult separate_by_centers(const SceneTensor& x,
                                     const ClusterModel& clusters,
                                     const SeparationOptions& options) {
  const Matrix& centers = clusters.centers;
  if (centers.rows() != static_cast<Eigen::Index>(x.channels())) {
    throw DimensionError("separate_by_centers: center dimension != channel count");
  }
  if (options.nmf_iterations < 1) {
    throw ConfigError("separate_by_centers: nmf_iterations must be >= 1");
  }
  for (Eigen::Index s = 0; s < centers.cols(); ++s) {
    if ((centers.col(s).array() < 0.0).any()) {
      throw ConfigError("separate_by_centers: negative cluster center");
    }
    if (centers.col(s).isZero(0.0)) {
      throw ConfigError("separate_by_centers: cluster center " +
                        std::to_string(s) + " is all zero (degenerate source)");
    }
  }
  const std::size_t n_src = centers.cols();
  std::vector<RowMajorMatrix> planes(n_src,
                                     RowMajorMatrix::Zero(x.bins(), x.frames()));
  Matrix x_t(x.channels(), x.bins());
  for (std::size_t t = 0; t < x.frames(); ++t) {
    for (std::size_t c = 0; c < x.channels(); ++c) {
      for (std::size_t f = 0; f < x.bins(); ++f) x_t(c, f) = x.magnitudes(c, f, t);
    }
    const Matrix s_t = solve_frame_nmf(x_t, centers, options.nmf_iterations,
                                       options.nmf_tolerance, options.eps);
    for (std::size_t s = 0; s < n_src; ++s) planes[s].col(t) = s_t.row(s).transpose();
  }

  SeparationResult result;
  result.method = SeparationMethod::kCenter;
  const StftOptions synth = synthesis_options(x, options);
  for (std::size_t s = 0; s < n_src; ++s) {
    Tensor3 image(x.channels(), x.bins(), x.frames());
    for (std::size_t c = 0; c < x.channels(); ++c) {
      image.plane(c) = centers(c, s) * planes[s];
    }
    const LoudestChannel loudest = loudest_channel_phase(x, image);
    const auto y = istft_plane(planes[s], loudest.phases, synth, x.num_samples);
    AudioClip clip;
    clip.sample_rate = x.sample_rate;
    clip.samples = Eigen::Map<const Matrix>(y.data(), 1, y.size());
    result.per_source_audio.push_back(std::move(clip));
    result.source_channels.push_back(loudest.channel);
    result.per_source_multichannel.push_back(std::move(image));
  }
  return result;
}

}  // namespace tensorscene
