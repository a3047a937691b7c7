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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "tensorscene/errors.hpp"
#include "tensorscene/metrics.hpp"

using namespace tensorscene;

namespace {

std::vector<double> noise(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  std::vector<double> v(n);
  for (double& s : v) s = g(rng);
  return v;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Removes the component of v along each of `basis` (Gram-Schmidt, in order).
std::vector<double> orthogonalize(std::vector<double> v, const std::vector<std::vector<double>>& basis) {
  std::vector<std::vector<double>> done;
  for (auto b : basis) {
    for (const auto& q : done) {
      const double c = dot(b, q) / dot(q, q);
      for (std::size_t i = 0; i < b.size(); ++i) b[i] -= c * q[i];
    }
    const double c = dot(v, b) / dot(b, b);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * b[i];
    done.push_back(b);
  }
  return v;
}

void scale_to_energy(std::vector<double>& v, double e) {
  const double k = std::sqrt(e / dot(v, v));
  for (double& x : v) x *= k;
}

}  // namespace

TEST_SUITE("bss metrics") {
  TEST_CASE("perfect estimate hits the cap") {
    std::mt19937_64 rng(1);
    const std::vector<std::vector<double>> refs{noise(rng, 4000), noise(rng, 4000)};
    const BssScore s = score(refs, refs, 64);
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(s.sdr[i] >= 90.0);
      CHECK(s.sdr[i] <= kScoreCap);
      CHECK(s.sir[i] <= kScoreCap);
      CHECK(s.sar[i] <= kScoreCap);
      CHECK(s.permutation[i] == i);
    }
  }

  TEST_CASE("a half-gain copy of a single source still hits the cap") {
    std::mt19937_64 rng(11);
    const std::vector<std::vector<double>> refs{noise(rng, 3000)};
    std::vector<double> est = refs[0];
    for (double& v : est) v *= 0.5;
    const BssScore s = score({est}, refs, 64);
    CHECK(s.sdr[0] >= 90.0);
    CHECK(s.sdr[0] <= kScoreCap);
  }

  TEST_CASE("orthogonal additive noise at -20 dB gives 20 dB SDR") {
    std::mt19937_64 rng(2);
    const auto ref = noise(rng, 3000);
    auto e = orthogonalize(noise(rng, 3000), {ref});
    scale_to_energy(e, dot(ref, ref) / 100.0);
    std::vector<double> est(ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) est[i] = ref[i] + e[i];
    const SourceRatios r = energy_ratios(decompose_projections(est, {ref}, 0, 1));
    CHECK(r.sdr == doctest::Approx(20.0).epsilon(1e-6));
    CHECK(r.sar == doctest::Approx(20.0).epsilon(1e-6));
    CHECK(r.sir == kScoreCap);

    // With the default filter the noise leaks slightly into the shifted span.
    const auto big_ref = noise(rng, 64000);
    auto big_e = noise(rng, 64000);
    scale_to_energy(big_e, dot(big_ref, big_ref) / 100.0);
    std::vector<double> big_est(big_ref.size());
    for (std::size_t i = 0; i < big_ref.size(); ++i) big_est[i] = big_ref[i] + big_e[i];
    CHECK(std::abs(score({big_est}, {big_ref}).sdr[0] - 20.0) < 0.1);
  }

  TEST_CASE("estimate of the wrong source floors SIR") {
    std::mt19937_64 rng(3);
    const auto a = noise(rng, 2000);
    const auto b = orthogonalize(noise(rng, 2000), {a});
    const SourceRatios r = energy_ratios(decompose_projections(b, {a, b}, 0, 1));
    CHECK(r.sir == -kScoreCap);
    CHECK(r.sdr == -kScoreCap);
  }

  TEST_CASE("known leakage ratio") {
    std::mt19937_64 rng(4);
    const auto a = noise(rng, 2000);
    auto b = orthogonalize(noise(rng, 2000), {a});
    scale_to_energy(b, dot(a, a));
    std::vector<double> est(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) est[i] = 0.9 * a[i] + 0.1 * b[i];
    const SourceRatios r = energy_ratios(decompose_projections(est, {a, b}, 0, 1));
    CHECK(r.sir == doctest::Approx(10.0 * std::log10(81.0)).epsilon(1e-9));  // 19.085 dB
    CHECK(r.sar == kScoreCap);
  }

  TEST_CASE("components add back to the estimate") {
    std::mt19937_64 rng(5);
    const std::vector<std::vector<double>> refs{noise(rng, 1500), noise(rng, 1500), noise(rng, 1500)};
    const auto est = noise(rng, 1500);
    const Projections p = decompose_projections(est, refs, 1, 32);
    REQUIRE(p.target.size() == 1500 + 31);
    for (std::size_t i = 0; i < p.target.size(); ++i) {
      const double e = i < est.size() ? est[i] : 0.0;
      CHECK(std::abs(p.target[i] + p.interference[i] + p.artifacts[i] - e) < 1e-9);
    }
  }

  TEST_CASE("projections agree with a dense least-squares oracle") {
    std::mt19937_64 rng(6);
    const std::vector<std::vector<double>> refs{noise(rng, 120), noise(rng, 120)};
    const auto est = noise(rng, 120);
    const std::size_t taps = 8;
    const Projections p = decompose_projections(est, refs, 0, taps);
    const auto all = oracle::project_onto_shifts(est, refs, taps);
    const auto own = oracle::project_onto_shifts(est, {refs[0]}, taps);
    for (std::size_t i = 0; i < all.size(); ++i) {
      CHECK(std::abs(p.target[i] - own[i]) < 1e-6);
      CHECK(std::abs(p.interference[i] - (all[i] - own[i])) < 1e-6);
    }
  }

  TEST_CASE("scores ignore estimate gain") {
    std::mt19937_64 rng(7);
    const std::vector<std::vector<double>> refs{noise(rng, 3000), noise(rng, 3000)};
    std::vector<std::vector<double>> est{noise(rng, 3000), noise(rng, 3000)};
    for (std::size_t i = 0; i < 3000; ++i) {
      est[0][i] += refs[0][i];
      est[1][i] += 0.5 * refs[1][i] + 0.2 * refs[0][i];
    }
    const BssScore a = score(est, refs, 64);
    for (auto& e : est)
      for (double& v : e) v *= 3.7;
    const BssScore b = score(est, refs, 64);
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(std::abs(a.sdr[i] - b.sdr[i]) < 1e-6);
      CHECK(std::abs(a.sir[i] - b.sir[i]) < 1e-6);
      CHECK(std::abs(a.sar[i] - b.sar[i]) < 1e-6);
    }
  }

  TEST_CASE("estimate order does not change the matched scores") {
    std::mt19937_64 rng(8);
    const std::vector<std::vector<double>> refs{noise(rng, 3000), noise(rng, 3000), noise(rng, 3000)};
    std::vector<std::vector<double>> est;
    for (std::size_t s = 0; s < 3; ++s) {
      auto e = noise(rng, 3000, 0.3);
      for (std::size_t i = 0; i < 3000; ++i) e[i] += refs[s][i];
      est.push_back(e);
    }
    const BssScore a = score(est, refs, 16);
    const BssScore b = score({est[2], est[0], est[1]}, refs, 16);
    CHECK(a.permutation == std::vector<std::size_t>{0, 1, 2});
    CHECK(b.permutation == std::vector<std::size_t>{2, 0, 1});
    for (std::size_t j = 0; j < 3; ++j) {
      const std::size_t ref = b.permutation[j];
      CHECK(b.sdr[j] == doctest::Approx(a.sdr[ref]).epsilon(1e-12));
      CHECK(b.sir[j] == doctest::Approx(a.sir[ref]).epsilon(1e-12));
    }
  }

  TEST_CASE("length mismatches are input errors") {
    const std::vector<std::vector<double>> refs{std::vector<double>(100, 1.0)};
    CHECK_THROWS_AS(score({std::vector<double>(99, 1.0)}, refs, 8), InputError);
    CHECK_THROWS_AS(score({std::vector<double>(100, 1.0), std::vector<double>(100, 1.0)}, refs, 8), InputError);
  }

  TEST_CASE("score tables list one row per reference") {
    std::mt19937_64 rng(9);
    const std::vector<std::vector<double>> refs{noise(rng, 500), noise(rng, 500)};
    const BssScore s = score({refs[1], refs[0]}, refs, 8);
    const auto rows = score_rows(s, "scene0", "CenterBased");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].source == 0);
    CHECK(rows[1].source == 1);
    const auto path = std::filesystem::temp_directory_path() / "tensorscene_scores.csv";
    write_scores_csv(rows, path);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "scene_id,method,source,sdr,sir,sar");
    int n = 0;
    while (std::getline(in, line)) {
      CHECK(line.rfind("scene0,CenterBased,", 0) == 0);
      ++n;
    }
    CHECK(n == 2);
    std::filesystem::remove(path);
  }
}
