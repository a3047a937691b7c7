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

#ifndef TENSORSCENE_SEPARATION_HPP_
#define TENSORSCENE_SEPARATION_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "tensorscene/audio.hpp"
#include "tensorscene/dntf.hpp"
#include "tensorscene/kmeans.hpp"
#include "tensorscene/scene_tensor.hpp"
#include "tensorscene/stft.hpp"

namespace tensorscene {

enum class SeparationMethod { kAssignment, kCenter };

std::string to_string(SeparationMethod m);

struct SeparationOptions {
  double eps = 1e-8;
  // Divide the cross-channel sum of masked STFTs by C.
  bool average_channels = false;
  std::size_t nmf_iterations = 500;
  double nmf_tolerance = 1e-6;
  WindowType window = WindowType::kHann;
};

struct SeparationResult {
  SeparationMethod method = SeparationMethod::kAssignment;
  // N_S tensors of shape C x F x T: per-source multichannel magnitudes.
  std::vector<Tensor3> per_source_multichannel;
  // N_S mono clips.
  std::vector<AudioClip> per_source_audio;
  // Loudest channel of each source estimate.
  std::vector<std::size_t> source_channels;
};

// Rescales every column of d to unit L2 norm and folds the inverse scale
// into the matching column of w, leaving khatri_rao(d, w) unchanged.
// Zero columns are left alone.
void normalize_components(Matrix& d, Matrix& w);

// Squared Frobenius norm of each component's rank-one share of decode(h).
Vector component_energy(const FactorModel& model, const Matrix& h);

// Clusters the model's channel dictionary into n_sources groups,
// optionally after normalize_components. Weights, when given, are passed to
// k-means as per-component masses.
ClusterModel cluster_components(const FactorModel& model,
                                std::size_t n_sources, std::uint64_t seed,
                                bool normalize = true,
                                const KMeansOptions& options = {},
                                const Vector& weights = {});

// Decodes h once per cluster with every component outside the cluster
// zeroed. Returns N_S tensors of shape C x F x M.
std::vector<Tensor3> cluster_reconstructions(
    const FactorModel& model, const Matrix& h,
    const std::vector<std::size_t>& assignments, std::size_t n_sources);

// Ratio masks S[s] / (sum_n S[n] + eps), one per source.
std::vector<Tensor3> ratio_masks(const std::vector<Tensor3>& sources,
                                 double eps);

// Cluster-assignment separation: per-source decodes used as Wiener masks on
// each observed channel, masked complex STFTs summed over channels.
SeparationResult separate_by_assignment(const SceneTensor& x,
                                        const FactorModel& model,
                                        const ClusterModel& clusters,
                                        const SeparationOptions& options = {});

// Nonnegative least squares for one frame, min ||x_t - centers * S||_F^2
// over S >= 0 by multiplicative updates. x_t is C x F, the result N_S x F.
// Starts from `init` if given, otherwise from the best constant matrix.
// When `objective_trace` is non-null it receives the objective before the
// first update and after each one.
Matrix solve_frame_nmf(const Matrix& x_t, const Matrix& centers,
                       std::size_t max_iterations, double tolerance,
                       double eps, const Matrix* init = nullptr,
                       std::vector<double>* objective_trace = nullptr);

// Cluster-center separation: solves every frame against the fixed center
// matrix and resynthesizes each source with its loudest channel's phase.
// Throws ConfigError if a center column is all zero.
SeparationResult separate_by_centers(const SceneTensor& x,
                                     const ClusterModel& clusters,
                                     const SeparationOptions& options = {});

}  // namespace tensorscene

#endif  // TENSORSCENE_SEPARATION_HPP_
