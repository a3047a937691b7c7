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

#ifndef TENSORSCENE_EXPERIMENT_HPP_
#define TENSORSCENE_EXPERIMENT_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "tensorscene/audio.hpp"
#include "tensorscene/checkpoint.hpp"
#include "tensorscene/kmeans.hpp"
#include "tensorscene/metrics.hpp"
#include "tensorscene/roomsim.hpp"
#include "tensorscene/separation.hpp"
#include "tensorscene/stft.hpp"
#include "tensorscene/training.hpp"

namespace tensorscene {

enum class ExperimentKind { kThreePoint, kTwoPointPlusAmbient, kThreePointOneDuplicated };

// "three-point", "two-point-ambient", "three-point-duplicated".
std::string to_string(ExperimentKind kind);
ExperimentKind parse_experiment(const std::string& name);
// Number of references (and clusters) the experiment separates into.
std::size_t source_count(ExperimentKind kind);

struct SceneOptions {
  int sample_rate = 16000;
  double duration = 5.0;
  std::size_t n_mics = 4;
  Room room;
  double absorption = 0.85;
  int max_order = 2;
  std::string ambient_preset = "babble";
};

// Random scene for one experiment setup. In the duplicated setup the third
// source plays the second source's signal from its own position.
SceneConfig make_experiment_scene(ExperimentKind kind, std::uint64_t seed,
                                  const SceneOptions& options);

// Scene directory layout: scene.json, mix_ch<i>.wav, ref_s<j>_ch<i>.wav.
void write_scene_dir(const SceneConfig& cfg, const SimulatedScene& scene,
                     const std::filesystem::path& dir);
AudioClip load_mixture(const std::filesystem::path& dir);
// One multichannel clip per reference, in source order.
std::vector<AudioClip> load_references(const std::filesystem::path& dir);

// Each reference image's loudest channel as a mono signal.
std::vector<std::vector<double>> reference_signals(const std::vector<AudioClip>& images);

struct Decomposition {
  SceneTensor scene;
  Checkpoint checkpoint;
  std::vector<double> loss_trace;
};

Decomposition decompose(const AudioClip& mixture, const TrainConfig& train,
                        const StftOptions& stft);

struct SeparationRun {
  ClusterModel clusters;
  std::vector<SeparationResult> results;  // in the order requested
};

struct SeparationSettings {
  std::size_t n_sources = 2;
  bool assignment = true;
  bool center = true;
  bool normalize = true;
  // Weight each component's clustering vote by its reconstruction energy.
  bool weight_by_energy = true;
  std::uint64_t seed = 0;
  SeparationOptions options;
};

SeparationRun separate(const SceneTensor& scene, const FactorModel& model,
                       const SeparationSettings& settings);

// source_<s>.wav, one per estimate.
void write_sources(const SeparationResult& result, const std::filesystem::path& dir);
std::vector<std::vector<double>> load_sources(const std::filesystem::path& dir);

// Table-1 style method labels.
std::string method_label(SeparationMethod m);

struct PipelineOptions {
  ExperimentKind experiment = ExperimentKind::kThreePoint;
  std::size_t n_trials = 5;
  std::uint64_t seed = 7;
  SceneOptions scene;
  TrainConfig train;
  StftOptions stft;
  SeparationSettings separation;
  std::size_t filter_len = kDefaultFilterLength;
  std::size_t jobs = 1;
};

struct TrialResult {
  std::size_t trial = 0;
  std::vector<ScoreRow> rows;
  double initial_loss = 0.0;
  double final_loss = 0.0;
};

// Simulate, decompose, separate and score one trial with seed
// options.seed + trial. Writes the trial's artefacts under trial_dir when
// it is non-empty.
TrialResult run_trial(const PipelineOptions& options, std::size_t trial,
                      const std::filesystem::path& trial_dir = {});

struct SummaryRow {
  std::string experiment;
  std::string method;
  std::size_t count = 0;
  double sdr_mean = 0.0, sdr_std = 0.0;
  double sir_mean = 0.0, sir_std = 0.0;
  double sar_mean = 0.0, sar_std = 0.0;
};

// Mean and population standard deviation of every metric per method,
// AssignmentBased first.
std::vector<SummaryRow> summarize(const std::string& experiment,
                                  const std::vector<ScoreRow>& rows);

void write_summary_csv(const std::vector<SummaryRow>& rows,
                       const std::filesystem::path& path);

struct PipelineResult {
  std::vector<TrialResult> trials;
  std::vector<SummaryRow> summary;
};

// Runs all trials (up to options.jobs at a time; results do not depend on
// jobs) and writes trials.csv, summary.csv and summary.json under out_dir.
PipelineResult run_pipeline(const PipelineOptions& options,
                            const std::filesystem::path& out_dir);

}  // namespace tensorscene

#endif  // TENSORSCENE_EXPERIMENT_HPP_
