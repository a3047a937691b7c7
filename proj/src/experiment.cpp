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

#include "tensorscene/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <random>
#include <regex>
#include <sstream>
#include <thread>

#include <spdlog/spdlog.h>

#include "json.hpp"
#include "tensorscene/errors.hpp"

namespace tensorscene {
namespace {

namespace fs = std::filesystem;

// Files in dir whose names match `pattern`, keyed by the captured integers.
std::map<std::vector<int>, fs::path> indexed_files(const fs::path& dir,
                                                   const std::regex& pattern) {
  if (!fs::is_directory(dir)) throw IoError(dir.string() + " is not a directory");
  std::map<std::vector<int>, fs::path> found;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    std::smatch m;
    if (!std::regex_match(name, m, pattern)) continue;
    std::vector<int> key;
    for (std::size_t i = 1; i < m.size(); ++i) key.push_back(std::stoi(m[i].str()));
    found.emplace(std::move(key), entry.path());
  }
  return found;
}

std::vector<double> first_channel(const AudioClip& clip) {
  std::vector<double> out(clip.length());
  for (std::size_t n = 0; n < clip.length(); ++n) out[n] = clip.samples(0, n);
  return out;
}

void mean_std(const std::vector<double>& v, double& mean, double& sd) {
  mean = 0.0;
  sd = 0.0;
  if (v.empty()) return;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  for (double x : v) sd += (x - mean) * (x - mean);
  sd = std::sqrt(sd / static_cast<double>(v.size()));
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kThreePoint: return "three-point";
    case ExperimentKind::kTwoPointPlusAmbient: return "two-point-ambient";
    case ExperimentKind::kThreePointOneDuplicated: return "three-point-duplicated";
  }
  return "three-point";
}

ExperimentKind parse_experiment(const std::string& name) {
  if (name == "three-point") return ExperimentKind::kThreePoint;
  if (name == "two-point-ambient") return ExperimentKind::kTwoPointPlusAmbient;
  if (name == "three-point-duplicated") return ExperimentKind::kThreePointOneDuplicated;
  throw ConfigError("unknown experiment '" + name +
                    "' (expected three-point, two-point-ambient or "
                    "three-point-duplicated)");
}

std::size_t source_count(ExperimentKind) { return 3; }

SceneConfig make_experiment_scene(ExperimentKind kind, std::uint64_t seed,
                                  const SceneOptions& options) {
  std::mt19937_64 rng(seed);
  const bool ambient = kind == ExperimentKind::kTwoPointPlusAmbient;
  const std::size_t points = ambient ? 2 : 3;
  SceneConfig cfg = random_scene(
      rng, points, options.n_mics, options.room,
      ambient ? std::optional<std::string>(options.ambient_preset) : std::nullopt);
  cfg.sample_rate = options.sample_rate;
  cfg.duration = options.duration;
  cfg.absorption = options.absorption;
  cfg.max_order = options.max_order;
  if (kind == ExperimentKind::kThreePointOneDuplicated) {
    cfg.sources[2].signal = cfg.sources[1].signal;
  }
  validate(cfg);
  return cfg;
}

void write_scene_dir(const SceneConfig& cfg, const SimulatedScene& scene,
                     const fs::path& dir) {
  fs::create_directories(dir);
  save_scene_config(cfg, dir / "scene.json");
  for (std::size_t c = 0; c < scene.mixture.channels(); ++c) {
    AudioClip ch;
    ch.sample_rate = scene.mixture.sample_rate;
    ch.samples = scene.mixture.samples.row(c);
    write_wav(ch, dir / ("mix_ch" + std::to_string(c) + ".wav"));
  }
  for (std::size_t s = 0; s < scene.images.size(); ++s) {
    for (std::size_t c = 0; c < scene.images[s].channels(); ++c) {
      AudioClip ch;
      ch.sample_rate = scene.images[s].sample_rate;
      ch.samples = scene.images[s].samples.row(c);
      write_wav(ch, dir / ("ref_s" + std::to_string(s) + "_ch" + std::to_string(c) + ".wav"));
    }
  }
}

AudioClip load_mixture(const fs::path& dir) {
  const auto files = indexed_files(dir, std::regex(R"(mix_ch(\d+)\.wav)"));
  if (files.empty()) throw IoError("no mix_ch<i>.wav files in " + dir.string());
  std::vector<fs::path> paths;
  int expected = 0;
  for (const auto& [key, path] : files) {
    if (key[0] != expected++) throw IoError("mixture channels are not numbered 0..C-1");
    paths.push_back(path);
  }
  return read_wav_channels(paths);
}

std::vector<AudioClip> load_references(const fs::path& dir) {
  const auto files = indexed_files(dir, std::regex(R"(ref_s(\d+)_ch(\d+)\.wav)"));
  std::map<int, std::vector<fs::path>> by_source;
  for (const auto& [key, path] : files) by_source[key[0]].push_back(path);
  std::vector<AudioClip> out;
  int expected = 0;
  for (const auto& [source, paths] : by_source) {
    if (source != expected++) throw IoError("reference sources are not numbered 0..N-1");
    out.push_back(read_wav_channels(paths));
  }
  if (out.empty()) throw IoError("no ref_s<j>_ch<i>.wav files in " + dir.string());
  return out;
}

std::vector<std::vector<double>> reference_signals(const std::vector<AudioClip>& images) {
  std::vector<std::vector<double>> out;
  for (const auto& image : images) {
    Eigen::Index best = 0;
    image.samples.rowwise().squaredNorm().maxCoeff(&best);
    std::vector<double> sig(image.length());
    for (std::size_t n = 0; n < image.length(); ++n) sig[n] = image.samples(best, n);
    out.push_back(std::move(sig));
  }
  return out;
}

Decomposition decompose(const AudioClip& mixture, const TrainConfig& train_cfg,
                        const StftOptions& stft_options) {
  Decomposition d;
  d.scene = stft(mixture, stft_options);
  TrainResult trained = train(d.scene.magnitudes, train_cfg);
  d.checkpoint.model = std::move(trained.model);
  d.checkpoint.train = train_cfg;
  d.checkpoint.analysis = {mixture.sample_rate, stft_options.fft_size, stft_options.hop};
  d.loss_trace = std::move(trained.loss_trace);
  return d;
}

SeparationRun separate(const SceneTensor& scene, const FactorModel& model,
                       const SeparationSettings& settings) {
  SeparationRun run;
  const Vector weights =
      settings.weight_by_energy
          ? component_energy(model, encode(model, unfold_frames(scene.magnitudes)))
          : Vector();
  run.clusters = cluster_components(model, settings.n_sources, settings.seed,
                                    settings.normalize, {}, weights);
  if (settings.assignment) {
    run.results.push_back(separate_by_assignment(scene, model, run.clusters, settings.options));
  }
  if (settings.center) {
    run.results.push_back(separate_by_centers(scene, run.clusters, settings.options));
  }
  return run;
}

void write_sources(const SeparationResult& result, const fs::path& dir) {
  fs::create_directories(dir);
  for (std::size_t s = 0; s < result.per_source_audio.size(); ++s) {
    write_wav(result.per_source_audio[s], dir / ("source_" + std::to_string(s) + ".wav"));
  }
}

std::vector<std::vector<double>> load_sources(const fs::path& dir) {
  const auto files = indexed_files(dir, std::regex(R"(source_(\d+)\.wav)"));
  if (files.empty()) throw IoError("no source_<s>.wav files in " + dir.string());
  std::vector<std::vector<double>> out;
  for (const auto& [key, path] : files) out.push_back(first_channel(read_wav(path)));
  return out;
}

std::string method_label(SeparationMethod m) {
  return m == SeparationMethod::kAssignment ? "AssignmentBased" : "CenterBased";
}

TrialResult run_trial(const PipelineOptions& options, std::size_t trial,
                      const fs::path& trial_dir) {
  const std::uint64_t seed = options.seed + trial;
  const std::string scene_id = to_string(options.experiment) + "-" + std::to_string(trial);
  spdlog::info("trial {}: simulating {}", trial, scene_id);

  const SceneConfig cfg = make_experiment_scene(options.experiment, seed, options.scene);
  const SimulatedScene sim = simulate(cfg);
  if (!trial_dir.empty()) write_scene_dir(cfg, sim, trial_dir / "scene");

  TrainConfig train_cfg = options.train;
  train_cfg.seed = seed;
  spdlog::info("trial {}: training K={} for {} batches", trial, train_cfg.k, train_cfg.n_batches);
  const Decomposition dec = decompose(sim.mixture, train_cfg, options.stft);

  SeparationSettings sep = options.separation;
  sep.n_sources = sim.images.size();
  sep.seed = seed;
  sep.options.window = options.stft.window;
  const SeparationRun run = separate(dec.scene, dec.checkpoint.model, sep);

  const auto refs = reference_signals(sim.images);
  TrialResult result;
  result.trial = trial;
  result.initial_loss = head_mean(dec.loss_trace, 200);
  result.final_loss = tail_mean(dec.loss_trace, 200);
  for (const auto& r : run.results) {
    std::vector<std::vector<double>> estimates;
    for (const auto& clip : r.per_source_audio) estimates.push_back(first_channel(clip));
    const BssScore s = score(estimates, refs, options.filter_len);
    auto rows = score_rows(s, scene_id, method_label(r.method));
    result.rows.insert(result.rows.end(), rows.begin(), rows.end());
    if (!trial_dir.empty()) write_sources(r, trial_dir / to_string(r.method));
  }
  if (!trial_dir.empty()) {
    save_checkpoint(dec.checkpoint, trial_dir / "checkpoint.json");
    write_loss_csv(dec.loss_trace, trial_dir / "loss.csv");
    write_cluster_report(run.clusters, trial_dir / "clusters.json");
    write_scores_csv(result.rows, trial_dir / "metrics.csv");
  }
  return result;
}

std::vector<SummaryRow> summarize(const std::string& experiment,
                                  const std::vector<ScoreRow>& rows) {
  std::vector<SummaryRow> out;
  for (const char* method : {"AssignmentBased", "CenterBased"}) {
    std::vector<double> sdr, sir, sar;
    for (const auto& r : rows) {
      if (r.method != method) continue;
      sdr.push_back(r.sdr);
      sir.push_back(r.sir);
      sar.push_back(r.sar);
    }
    if (sdr.empty()) continue;
    SummaryRow row;
    row.experiment = experiment;
    row.method = method;
    row.count = sdr.size();
    mean_std(sdr, row.sdr_mean, row.sdr_std);
    mean_std(sir, row.sir_mean, row.sir_std);
    mean_std(sar, row.sar_mean, row.sar_std);
    out.push_back(row);
  }
  return out;
}

void write_summary_csv(const std::vector<SummaryRow>& rows, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "experiment,method,n,sdr_mean,sdr_std,sir_mean,sir_std,sar_mean,sar_std\n";
  out << std::fixed << std::setprecision(6);
  for (const auto& r : rows) {
    out << r.experiment << ',' << r.method << ',' << r.count << ',' << r.sdr_mean << ','
        << r.sdr_std << ',' << r.sir_mean << ',' << r.sir_std << ',' << r.sar_mean << ','
        << r.sar_std << '\n';
  }
  if (!out) throw IoError("failed writing " + path.string());
}

PipelineResult run_pipeline(const PipelineOptions& options, const fs::path& out_dir) {
  if (options.n_trials < 1) throw ConfigError("pipeline needs n_trials >= 1");
  fs::create_directories(out_dir);
  PipelineResult result;
  result.trials.resize(options.n_trials);

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  const auto worker = [&] {
    for (std::size_t t = next++; t < options.n_trials; t = next++) {
      try {
        result.trials[t] = run_trial(options, t, out_dir / ("trial_" + std::to_string(t)));
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  const std::size_t jobs = std::clamp<std::size_t>(options.jobs, 1, options.n_trials);
  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);

  std::vector<ScoreRow> rows;
  for (const auto& t : result.trials) rows.insert(rows.end(), t.rows.begin(), t.rows.end());
  const std::string experiment = to_string(options.experiment);
  result.summary = summarize(experiment, rows);
  write_scores_csv(rows, out_dir / "trials.csv");
  write_summary_csv(result.summary, out_dir / "summary.csv");

  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : result.summary) {
    j.push_back({{"experiment", r.experiment}, {"method", r.method}, {"n", r.count},
                 {"sdr", {{"mean", r.sdr_mean}, {"std", r.sdr_std}}},
                 {"sir", {{"mean", r.sir_mean}, {"std", r.sir_std}}},
                 {"sar", {{"mean", r.sar_mean}, {"std", r.sar_std}}}});
  }
  std::ofstream out(out_dir / "summary.json");
  if (!out) throw IoError("cannot write summary.json");
  out << j.dump(1) << '\n';
  return result;
}

}  // namespace tensorscene
