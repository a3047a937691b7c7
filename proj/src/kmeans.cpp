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

#include "tensorscene/kmeans.hpp"

#include <fstream>
#include <limits>
#include <random>
#include <string>

#include "json.hpp"
#include "tensorscene/errors.hpp"

namespace tensorscene {
namespace {

struct Run {
  std::vector<std::size_t> assignments;
  Matrix centers;
  double inertia = std::numeric_limits<double>::infinity();
  std::vector<double> trace;
};

// Draws an index with probability proportional to `mass`, or uniformly
// when the mass is all zero.
Eigen::Index draw(const Vector& mass, std::mt19937_64& rng) {
  const Eigen::Index count = mass.size();
  const double total = mass.sum();
  if (!(total > 0.0)) {
    return std::uniform_int_distribution<Eigen::Index>(0, count - 1)(rng);
  }
  double target = std::uniform_real_distribution<double>(0.0, total)(rng);
  for (Eigen::Index i = 0; i < count; ++i) {
    target -= mass(i);
    if (target < 0.0) return i;
  }
  return count - 1;
}

Matrix seed_plus_plus(const Matrix& points, const Vector& weights,
                      std::size_t n, std::mt19937_64& rng) {
  const Eigen::Index count = points.cols();
  Matrix centers(points.rows(), static_cast<Eigen::Index>(n));
  centers.col(0) = points.col(draw(weights, rng));
  Vector nearest(count);
  for (Eigen::Index i = 0; i < count; ++i) {
    nearest(i) = (points.col(i) - centers.col(0)).squaredNorm();
  }
  for (std::size_t j = 1; j < n; ++j) {
    centers.col(j) = points.col(draw(nearest.cwiseProduct(weights), rng));
    for (Eigen::Index i = 0; i < count; ++i) {
      nearest(i) = std::min(nearest(i), (points.col(i) - centers.col(j)).squaredNorm());
    }
  }
  return centers;
}

// Nearest center per point, ties to the lower index. Returns the inertia.
double assign(const Matrix& points, const Matrix& centers,
              std::vector<std::size_t>& assignments) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < points.cols(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_j = 0;
    for (Eigen::Index j = 0; j < centers.cols(); ++j) {
      const double d = (points.col(i) - centers.col(j)).squaredNorm();
      if (d < best) {
        best = d;
        best_j = static_cast<std::size_t>(j);
      }
    }
    assignments[i] = best_j;
    total += best;
  }
  return total;
}

// Moves the farthest point of a multi-member cluster into each empty
// cluster. Each move zeroes that point's cost, so inertia cannot grow.
void repair_empty(const Matrix& points, Matrix& centers,
                  std::vector<std::size_t>& assignments) {
  const auto n = static_cast<std::size_t>(centers.cols());
  std::vector<std::size_t> counts(n, 0);
  for (auto a : assignments) ++counts[a];
  for (std::size_t j = 0; j < n; ++j) {
    if (counts[j] != 0) continue;
    double worst = -1.0;
    Eigen::Index worst_i = -1;
    for (Eigen::Index i = 0; i < points.cols(); ++i) {
      if (counts[assignments[i]] < 2) continue;
      const double d = (points.col(i) - centers.col(assignments[i])).squaredNorm();
      if (d > worst) {
        worst = d;
        worst_i = i;
      }
    }
    if (worst_i < 0) throw ConfigError("k-means: cannot fill empty cluster");
    --counts[assignments[worst_i]];
    assignments[worst_i] = j;
    counts[j] = 1;
    centers.col(j) = points.col(worst_i);
  }
}

Run lloyd(const Matrix& points, const Vector& weights, std::size_t n,
          std::mt19937_64& rng, const KMeansOptions& options) {
  Run run;
  run.centers = seed_plus_plus(points, weights, n, rng);
  run.assignments.assign(points.cols(), 0);
  std::vector<std::size_t> previous;
  for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
    assign(points, run.centers, run.assignments);
    repair_empty(points, run.centers, run.assignments);
    run.inertia = inertia(points, run.centers, run.assignments, weights);
    run.trace.push_back(run.inertia);
    if (run.assignments == previous) break;
    previous = run.assignments;

    Matrix sums = Matrix::Zero(points.rows(), static_cast<Eigen::Index>(n));
    Vector mass = Vector::Zero(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < points.cols(); ++i) {
      sums.col(run.assignments[i]) += weights(i) * points.col(i);
      mass(run.assignments[i]) += weights(i);
    }
    // A cluster holding only weightless points keeps its center.
    for (std::size_t j = 0; j < n; ++j) {
      if (mass(j) > 0.0) run.centers.col(j) = sums.col(j) / mass(j);
    }
  }
  run.inertia = inertia(points, run.centers, run.assignments, weights);
  return run;
}

}  // namespace

double inertia(const Matrix& points, const Matrix& centers,
               const std::vector<std::size_t>& assignments,
               const Vector& weights) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < points.cols(); ++i) {
    const double w = weights.size() == 0 ? 1.0 : weights(i);
    total += w * (points.col(i) - centers.col(assignments[i])).squaredNorm();
  }
  return total;
}

ClusterModel kmeans_channels(const Matrix& points, std::size_t n_sources,
                             std::uint64_t seed, const KMeansOptions& options,
                             const Vector& weights) {
  if (n_sources < 1) throw ConfigError("k-means: need at least one cluster");
  if (n_sources > static_cast<std::size_t>(points.cols())) {
    throw ConfigError("k-means: " + std::to_string(n_sources) +
                      " clusters requested for " +
                      std::to_string(points.cols()) + " components");
  }
  if (!points.allFinite()) throw InputError("k-means: non-finite input");
  if (weights.size() != 0 &&
      (weights.size() != points.cols() || !weights.allFinite() ||
       (weights.array() < 0.0).any() || !(weights.sum() > 0.0))) {
    throw ConfigError(
        "k-means: weights must be one finite nonnegative value per point "
        "with a positive sum");
  }
  const Vector w =
      weights.size() == 0 ? Vector::Ones(points.cols()) : weights;
  if (options.restarts < 1 || options.max_iterations < 1) {
    throw ConfigError("k-means: restarts and max_iterations must be >= 1");
  }

  std::mt19937_64 rng(seed);
  Run best;
  for (std::size_t r = 0; r < options.restarts; ++r) {
    Run run = lloyd(points, w, n_sources, rng, options);
    if (run.inertia < best.inertia) best = std::move(run);
  }
  ClusterModel model;
  model.assignments = std::move(best.assignments);
  model.centers = std::move(best.centers);
  model.n_sources = n_sources;
  model.inertia = best.inertia;
  model.inertia_trace = std::move(best.trace);
  return model;
}

void write_cluster_report(const ClusterModel& clusters,
                          const std::filesystem::path& path) {
  std::vector<double> centers;
  for (Eigen::Index r = 0; r < clusters.centers.rows(); ++r) {
    for (Eigen::Index c = 0; c < clusters.centers.cols(); ++c) {
      centers.push_back(clusters.centers(r, c));
    }
  }
  const nlohmann::json j = {
      {"n_sources", clusters.n_sources},
      {"components", clusters.assignments.size()},
      {"assignments", clusters.assignments},
      {"centers", {{"rows", clusters.centers.rows()},
                   {"cols", clusters.centers.cols()},
                   {"data", centers}}},
      {"inertia", clusters.inertia}};
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(1) << '\n';
}

}  // namespace tensorscene
