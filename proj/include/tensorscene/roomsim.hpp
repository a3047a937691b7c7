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

#ifndef TENSORSCENE_ROOMSIM_HPP_
#define TENSORSCENE_ROOMSIM_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "tensorscene/audio.hpp"

namespace tensorscene {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Point& a, const Point& b);

// Planar shoebox [0, width] x [0, depth], meters.
struct Room {
  double width = 10.0;
  double depth = 10.0;

  bool contains(const Point& p) const {
    return p.x > 0.0 && p.x < width && p.y > 0.0 && p.y < depth;
  }
};

// Where a source's dry signal comes from.
struct SignalSpec {
  // "wav", "speech", "tones", "noise" or "silence".
  std::string kind = "speech";
  std::string path;                  // wav
  std::uint64_t seed = 0;            // speech, noise
  std::vector<double> frequencies;   // tones, Hz
  std::string preset = "pink";       // noise
};

struct SourceSpec {
  Point position;
  SignalSpec signal;
};

// A background added directly to every channel. Channel m receives
// level * gains[m] times the dry signal.
struct AmbientSpec {
  SignalSpec signal;
  std::vector<double> gains;  // one per mic
  // Matches the direct-path gain of a point source heard from 1 m.
  double level = 0.0795774715459477;  // 1 / (4 pi)
};

struct SceneConfig {
  int version = 1;
  Room room;
  double absorption = 0.85;
  int max_order = 2;
  int sample_rate = 16000;
  double duration = 5.0;
  double sound_speed = 343.0;
  // Scale every dry signal (ambient included) to this RMS; <= 0 disables.
  double source_rms = 0.05;
  std::vector<SourceSpec> sources;
  std::vector<Point> mics;
  std::optional<AmbientSpec> ambient;

  std::size_t samples() const;
  // Point sources plus the ambient, if any.
  std::size_t reference_count() const;
};

// Throws ConfigError when positions leave the room, absorption is outside
// (0, 1], or there are no sources or mics.
void validate(const SceneConfig& cfg);

nlohmann::json to_json(const SceneConfig& cfg);
SceneConfig scene_config_from_json(const nlohmann::json& j);
void save_scene_config(const SceneConfig& cfg, const std::filesystem::path& path);
SceneConfig load_scene_config(const std::filesystem::path& path);

struct ImageSource {
  Point position;
  int order = 0;  // number of wall reflections
};

// Mirror images of src with at most max_order reflections, the source itself
// first. Sorted by (order, lattice index) so the result is deterministic.
std::vector<ImageSource> image_sources(const Room& room, const Point& src,
                                       int max_order);

struct RoomImpulseResponse {
  std::vector<double> taps;
  int sample_rate = 0;
};

// Half-width of the windowed-sinc fractional delay kernel (81 taps total).
inline constexpr int kFractionalDelayHalfWidth = 40;

// Each image adds (1 - absorption)^(order / 2) / (4 pi d) at delay
// d / sound_speed seconds. Taps that would fall before time zero are
// dropped. Throws InputError if an image coincides with the mic.
RoomImpulseResponse render_rir(const std::vector<ImageSource>& images,
                               const Point& mic, double absorption,
                               int sample_rate, double sound_speed);

struct SimulatedScene {
  AudioClip mixture;                // C x N
  std::vector<AudioClip> images;    // per reference (sources, then ambient)
  std::vector<std::vector<double>> dry;  // normalized dry signals
};

// Renders every source through every mic's RIR. Relative WAV paths resolve
// against base_dir.
SimulatedScene simulate(const SceneConfig& cfg,
                        const std::filesystem::path& base_dir = {});

// Loads or synthesizes one dry signal of cfg.samples() samples.
std::vector<double> render_signal(const SignalSpec& spec, const SceneConfig& cfg,
                                  const std::filesystem::path& base_dir);

struct ScenePlacement {
  std::size_t grid_cells = 4;  // per side
  double near_radius = 0.5;    // meters
  double wall_margin = 0.1;    // meters kept clear of the walls
  std::size_t max_retries = 1000;
};

// Sources at distinct grid-cell centers, one mic within near_radius of each
// source, the remaining mics uniform in the room, speech-like signals.
// An ambient preset, when given, gets per-channel gains in [0.8, 1.2].
SceneConfig random_scene(std::mt19937_64& rng, std::size_t n_point_sources,
                         std::size_t n_mics, const Room& room,
                         const std::optional<std::string>& ambient_preset = {},
                         const ScenePlacement& placement = {});

}  // namespace tensorscene

#endif  // TENSORSCENE_ROOMSIM_HPP_
