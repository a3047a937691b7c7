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

#ifndef TENSORSCENE_METRICS_HPP_
#define TENSORSCENE_METRICS_HPP_

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace tensorscene {

// Scores are clamped to [-kScoreCap, kScoreCap] dB; an exact match (zero
// error energy) reports +kScoreCap.
inline constexpr double kScoreCap = 100.0;
inline constexpr std::size_t kDefaultFilterLength = 512;

// Orthogonal split of an estimate against a set of references. All three
// parts have length N + filter_len - 1 (the estimate zero padded) and sum
// to the padded estimate.
struct Projections {
  std::vector<double> target;
  std::vector<double> interference;
  std::vector<double> artifacts;
};

// target is the least-squares fit of the estimate by filter_len-tap FIR
// filtered copies of references[target_index]; interference is the fit by
// all references minus target; artifacts is what remains.
Projections decompose_projections(std::span<const double> estimate,
                                  const std::vector<std::vector<double>>& references,
                                  std::size_t target_index,
                                  std::size_t filter_len = kDefaultFilterLength);

struct SourceRatios {
  double sdr = 0.0;
  double sir = 0.0;
  double sar = 0.0;
};

// 10 log10 energy ratios of one decomposition, clamped to the score cap.
SourceRatios energy_ratios(const Projections& p);

struct BssScore {
  // Indexed by estimate; estimate j is matched to reference permutation[j].
  std::vector<double> sdr, sir, sar;
  std::vector<std::size_t> permutation;
};

// Evaluates every estimate against every reference, then picks the
// estimate-to-reference bijection with the highest mean SIR (first in
// lexicographic order on ties). Throws InputError on count or length
// mismatch.
BssScore score(const std::vector<std::vector<double>>& estimates,
               const std::vector<std::vector<double>>& references,
               std::size_t filter_len = kDefaultFilterLength);

struct ScoreRow {
  std::string scene_id;
  std::string method;
  std::size_t source = 0;  // reference index
  double sdr = 0.0, sir = 0.0, sar = 0.0;
};

// Rows ordered by reference index.
std::vector<ScoreRow> score_rows(const BssScore& s, const std::string& scene_id,
                                 const std::string& method);

// "scene_id,method,source,sdr,sir,sar".
void write_scores_csv(const std::vector<ScoreRow>& rows,
                      const std::filesystem::path& path);
void write_scores_json(const std::vector<ScoreRow>& rows,
                       const std::filesystem::path& path);

}  // namespace tensorscene

#endif  // TENSORSCENE_METRICS_HPP_
