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

// tensorscene: scene synthesis, decomposition, separation and scoring.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#if defined(__GLIBC__)
#include <malloc.h>
#endif

#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "tensorscene/checkpoint.hpp"
#include "tensorscene/errors.hpp"
#include "tensorscene/experiment.hpp"
#include "tensorscene/kmeans.hpp"
#include "tensorscene/metrics.hpp"
#include "tensorscene/roomsim.hpp"
#include "tensorscene/stft.hpp"

namespace fs = std::filesystem;
using namespace tensorscene;

namespace {

enum ExitCode { kOk = 0, kConfig = 2, kNumerical = 3, kIo = 4 };

void configure_logging() {
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("TENSORSCENE_LOG")) {
    const auto level = spdlog::level::from_str(env);
    // from_str maps unknown names to "off"; only honor it when asked for.
    if (level != spdlog::level::off || std::string(env) == "off") spdlog::set_level(level);
  }
  spdlog::set_pattern("[%l] %v");
}

struct TrainFlags {
  TrainConfig train;
  StftOptions stft;
  std::string activation = "softplus";

  void add(CLI::App& app) {
    app.add_option("--seed", train.seed, "random seed")->capture_default_str();
    app.add_option("--k", train.k, "number of components")->capture_default_str();
    app.add_option("--batches", train.n_batches, "optimizer steps")->capture_default_str();
    app.add_option("--batch-frames", train.batch_frames, "frames per minibatch")
        ->capture_default_str();
    app.add_option("--lr", train.learning_rate, "Adam learning rate")->capture_default_str();
    app.add_option("--eps", train.epsilon_floor, "divergence floor")->capture_default_str();
    app.add_option("--init-decoder", train.init.decoder,
                   "uniform range of decoder pre-activations")
        ->capture_default_str();
    app.add_option("--init-encoder", train.init.encoder,
                   "uniform range of encoder weights")
        ->capture_default_str();
    app.add_option("--activation", activation, "encoder nonlinearity")
        ->check(CLI::IsMember({"softplus", "relu"}))
        ->capture_default_str();
    app.add_option("--fft-size", stft.fft_size, "STFT frame length")->capture_default_str();
    app.add_option("--hop", stft.hop, "STFT hop")->capture_default_str();
  }

  TrainConfig resolved() const {
    TrainConfig t = train;
    t.activation = parse_nonlinearity(activation);
    return t;
  }
};

struct MethodFlags {
  std::string method = "both";
  bool no_normalize = false;
  bool average = false;
  bool unweighted = false;

  void add(CLI::App& app) {
    app.add_option("--method", method, "separation method")
        ->check(CLI::IsMember({"assignment", "center", "both"}))
        ->capture_default_str();
    app.add_flag("--no-normalize", no_normalize,
                 "cluster raw channel dictionary columns");
    app.add_flag("--unweighted", unweighted,
                 "give every component an equal clustering vote");
    app.add_flag("--average-channels", average,
                 "average masked channels instead of summing them");
  }

  void apply(SeparationSettings& s) const {
    s.assignment = method != "center";
    s.center = method != "assignment";
    s.normalize = !no_normalize;
    s.weight_by_energy = !unweighted;
    s.options.average_channels = average;
  }
};

struct SceneFlags {
  SceneOptions scene;
  void add(CLI::App& app) {
    app.add_option("--duration", scene.duration, "scene length in seconds")
        ->capture_default_str();
    app.add_option("--mics", scene.n_mics, "microphones")->capture_default_str();
    app.add_option("--sample-rate", scene.sample_rate, "Hz")->capture_default_str();
    app.add_option("--absorption", scene.absorption, "wall absorption")->capture_default_str();
    app.add_option("--max-order", scene.max_order, "image source order")
        ->capture_default_str();
    app.add_option("--ambient", scene.ambient_preset, "ambient noise preset")
        ->capture_default_str();
  }
};

int cmd_simulate(const fs::path& config, const std::string& experiment, std::uint64_t seed,
                 const SceneOptions& scene, const fs::path& out) {
  SceneConfig cfg;
  fs::path base;
  if (!config.empty()) {
    cfg = load_scene_config(config);
    base = config.parent_path();
  } else {
    cfg = make_experiment_scene(parse_experiment(experiment), seed, scene);
  }
  const SimulatedScene sim = simulate(cfg, base);
  write_scene_dir(cfg, sim, out);
  spdlog::info("wrote {} channels, {} references to {}", sim.mixture.channels(),
               sim.images.size(), out.string());
  return kOk;
}

int cmd_decompose(const fs::path& scene_dir, const TrainFlags& flags, const fs::path& out) {
  const AudioClip mixture = load_mixture(scene_dir);
  const Decomposition dec = decompose(mixture, flags.resolved(), flags.stft);
  fs::create_directories(out);
  save_checkpoint(dec.checkpoint, out / "checkpoint.json");
  write_loss_csv(dec.loss_trace, out / "loss.csv");
  spdlog::info("loss {:.6g} -> {:.6g}", dec.loss_trace.front(), dec.loss_trace.back());
  return kOk;
}

int cmd_separate(const fs::path& scene_dir, const fs::path& checkpoint_path,
                 std::size_t n_sources, std::uint64_t seed, const MethodFlags& methods,
                 const fs::path& out) {
  const Checkpoint ck = load_checkpoint(checkpoint_path);
  StftOptions stft_opts;
  stft_opts.fft_size = ck.analysis.fft_size;
  stft_opts.hop = ck.analysis.hop;
  const SceneTensor scene = stft(load_mixture(scene_dir), stft_opts);

  SeparationSettings settings;
  settings.n_sources = n_sources;
  settings.seed = seed;
  methods.apply(settings);
  const SeparationRun run = separate(scene, ck.model, settings);
  fs::create_directories(out);
  write_cluster_report(run.clusters, out / "clusters.json");
  for (const auto& r : run.results) write_sources(r, out / to_string(r.method));
  return kOk;
}

std::vector<std::vector<double>> load_reference_dir(const fs::path& dir) {
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().filename().string().rfind("ref_s", 0) == 0) {
      return reference_signals(load_references(dir));
    }
  }
  return load_sources(dir);
}

int cmd_evaluate(const fs::path& estimates_dir, const fs::path& references_dir,
                 const std::string& scene_id, const std::string& method,
                 std::size_t filter_len, const fs::path& out) {
  if (!fs::is_directory(estimates_dir)) throw IoError("no such directory " + estimates_dir.string());
  if (!fs::is_directory(references_dir)) throw IoError("no such directory " + references_dir.string());
  const auto estimates = load_sources(estimates_dir);
  const auto references = load_reference_dir(references_dir);
  const BssScore s = score(estimates, references, filter_len);
  const auto rows = score_rows(s, scene_id, method);
  fs::create_directories(out);
  write_scores_csv(rows, out / "metrics.csv");
  write_scores_json(rows, out / "metrics.json");
  for (const auto& r : rows) {
    spdlog::info("source {}: SDR {:.2f} SIR {:.2f} SAR {:.2f}", r.source, r.sdr, r.sir, r.sar);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
#if defined(__GLIBC__)
  // Training allocates the same megabyte-sized temporaries every step; keep
  // them on the heap instead of mapping and unmapping pages each time.
  mallopt(M_MMAP_THRESHOLD, 64 << 20);
  mallopt(M_TRIM_THRESHOLD, 128 << 20);
#endif
  configure_logging();
  CLI::App app{"Multichannel source separation by nonnegative tensor factorization"};
  app.require_subcommand(1);
  app.fallthrough();
  fs::path out;
  app.add_option("--out", out, "output directory")->required();

  // simulate
  auto* sim = app.add_subcommand("simulate", "render a scene to WAV files");
  fs::path sim_config;
  std::string sim_experiment = "three-point";
  std::uint64_t sim_seed = 0;
  SceneFlags sim_scene;
  sim->add_option("--config", sim_config, "scene JSON (otherwise a random scene)");
  sim->add_option("--experiment", sim_experiment, "random scene layout")
      ->check(CLI::IsMember({"three-point", "two-point-ambient", "three-point-duplicated"}))
      ->capture_default_str();
  sim->add_option("--seed", sim_seed, "random seed")->capture_default_str();
  sim_scene.add(*sim);

  // decompose
  auto* dec = app.add_subcommand("decompose", "train the tensor model on a scene");
  fs::path dec_scene;
  TrainFlags dec_flags;
  dec->add_option("--scene", dec_scene, "scene directory")->required();
  dec_flags.add(*dec);

  // separate
  auto* sep = app.add_subcommand("separate", "cluster components and resynthesize sources");
  fs::path sep_scene, sep_checkpoint;
  std::size_t sep_sources = 2;
  std::uint64_t sep_seed = 0;
  MethodFlags sep_methods;
  sep->add_option("--scene", sep_scene, "scene directory")->required();
  sep->add_option("--checkpoint", sep_checkpoint, "trained model")->required();
  sep->add_option("--n-sources", sep_sources, "number of sources")->capture_default_str();
  sep->add_option("--seed", sep_seed, "k-means seed")->capture_default_str();
  sep_methods.add(*sep);

  // evaluate
  auto* eval = app.add_subcommand("evaluate", "score separated sources against references");
  fs::path eval_estimates, eval_references;
  std::string eval_scene_id = "scene", eval_method = "estimate";
  std::size_t eval_filter = kDefaultFilterLength;
  eval->add_option("--estimates", eval_estimates, "directory of source_<s>.wav")->required();
  eval->add_option("--references", eval_references,
                   "scene directory or directory of source_<s>.wav")
      ->required();
  eval->add_option("--scene-id", eval_scene_id, "label for the CSV")->capture_default_str();
  eval->add_option("--method", eval_method, "label for the CSV")->capture_default_str();
  eval->add_option("--filter-len", eval_filter, "distortion filter taps")->capture_default_str();

  // pipeline
  auto* pipe = app.add_subcommand("pipeline", "run seeded trials and aggregate scores");
  std::string pipe_experiment = "three-point";
  PipelineOptions pipe_opts;
  TrainFlags pipe_flags;
  SceneFlags pipe_scene;
  MethodFlags pipe_methods;
  pipe_flags.train.seed = 7;
  pipe->add_option("--experiment", pipe_experiment, "scene layout")
      ->check(CLI::IsMember({"three-point", "two-point-ambient", "three-point-duplicated"}))
      ->capture_default_str();
  pipe->add_option("--trials", pipe_opts.n_trials, "number of scenes")->capture_default_str();
  pipe->add_option("--jobs", pipe_opts.jobs, "parallel trials")->capture_default_str();
  pipe->add_option("--filter-len", pipe_opts.filter_len, "distortion filter taps")
      ->capture_default_str();
  pipe_flags.add(*pipe);
  pipe_scene.add(*pipe);
  pipe_methods.add(*pipe);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*sim) return cmd_simulate(sim_config, sim_experiment, sim_seed, sim_scene.scene, out);
    if (*dec) return cmd_decompose(dec_scene, dec_flags, out);
    if (*sep) return cmd_separate(sep_scene, sep_checkpoint, sep_sources, sep_seed, sep_methods, out);
    if (*eval) {
      return cmd_evaluate(eval_estimates, eval_references, eval_scene_id, eval_method,
                          eval_filter, out);
    }
    if (*pipe) {
      pipe_opts.experiment = parse_experiment(pipe_experiment);
      pipe_opts.seed = pipe_flags.train.seed;
      pipe_opts.train = pipe_flags.resolved();
      pipe_opts.stft = pipe_flags.stft;
      pipe_opts.scene = pipe_scene.scene;
      pipe_methods.apply(pipe_opts.separation);
      const PipelineResult r = run_pipeline(pipe_opts, out);
      for (const auto& row : r.summary) {
        std::cout << row.experiment << ' ' << row.method << " SDR " << row.sdr_mean << " SIR "
                  << row.sir_mean << " SAR " << row.sar_mean << '\n';
      }
      return kOk;
    }
  } catch (const ConfigError& e) {
    spdlog::error("configuration: {}", e.what());
    return kConfig;
  } catch (const InputError& e) {
    spdlog::error("input: {}", e.what());
    return kConfig;
  } catch (const DimensionError& e) {
    spdlog::error("shape: {}", e.what());
    return kConfig;
  } catch (const NumericalError& e) {
    spdlog::error("numerical: {}", e.what());
    return kNumerical;
  } catch (const IoError& e) {
    spdlog::error("i/o: {}", e.what());
    return kIo;
  } catch (const fs::filesystem_error& e) {
    spdlog::error("i/o: {}", e.what());
    return kIo;
  }
  return kOk;
}
