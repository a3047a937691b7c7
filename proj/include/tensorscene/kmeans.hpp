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

#ifndef TENSORSCENE_KMEANS_HPP_
#define TENSORSCENE_KMEANS_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "tensorscene/tensor3.hpp"

namespace tensorscene {

struct KMeansOptions {
  std::size_t max_iterations = 300;
  std::size_t restarts = 10;
};

// Grouping of the K dictionary components into n_sources clusters.
struct ClusterModel {
  std::vector<std::size_t> assignments;  // length K, values < n_sources
  Matrix centers;                        // C x n_sources, one center per column
  std::size_t n_sources = 0;
  double inertia = 0.0;
  // Inertia after every assignment step of the winning restart.
  std::vector<double> inertia_trace;
};

// k-means on the columns of `points` (each a C-dimensional point) with
// k-means++ seeding, Lloyd iterations and best-of-restarts by inertia (ties
// go to the earliest restart). A cluster that ends up empty is re-seeded at
// the point farthest from its current center. Optional per-point weights
// scale each point's share of seeding, center means and inertia; empty
// means all ones.
ClusterModel kmeans_channels(const Matrix& points, std::size_t n_sources,
                             std::uint64_t seed,
                             const KMeansOptions& options = {},
                             const Vector& weights = {});

// Weighted sum of squared distances of each column to its assigned center.
double inertia(const Matrix& points, const Matrix& centers,
               const std::vector<std::size_t>& assignments,
               const Vector& weights = {});

// {"n_sources", "assignments", "centers" (row-major C x N_S), "inertia"}.
void write_cluster_report(const ClusterModel& clusters,
                          const std::filesystem::path& path);

}  // namespace tensorscene

#endif  // TENSORSCENE_KMEANS_HPP_
