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

#include "tensorscene/roomsim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "tensorscene/errors.hpp"
#include "tensorscene/fft.hpp"
#include "tensorscene/signals.hpp"

namespace tensorscene {
namespace {

using nlohmann::json;

// Coordinate of the n-th mirror image along one axis of length `extent`.
double mirror(int n, double extent, double coord) {
  return n * extent + (n % 2 == 0 ? coord : extent - coord);
}

json point_json(const Point& p) { return json::array({p.x, p.y}); }

Point point_from(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ConfigError("position must be [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

json signal_json(const SignalSpec& s) {
  json j = {{"kind", s.kind}};
  if (s.kind == "wav") j["path"] = s.path;
  if (s.kind == "speech" || s.kind == "noise") j["seed"] = s.seed;
  if (s.kind == "tones") j["frequencies"] = s.frequencies;
  if (s.kind == "noise") j["preset"] = s.preset;
  return j;
}

SignalSpec signal_from(const json& j) {
  SignalSpec s;
  s.kind = j.at("kind").get<std::string>();
  s.path = j.value("path", std::string{});
  s.seed = j.value("seed", std::uint64_t{0});
  s.frequencies = j.value("frequencies", std::vector<double>{});
  s.preset = j.value("preset", std::string{"pink"});
  return s;
}

double fractional_delay_tap(double offset) {
  constexpr double kHalf = kFractionalDelayHalfWidth;
  if (std::abs(offset) > kHalf) return 0.0;
  const double sinc =
      offset == 0.0 ? 1.0 : std::sin(std::numbers::pi * offset) / (std::numbers::pi * offset);
  const double window = 0.5 + 0.5 * std::cos(std::numbers::pi * offset / (kHalf + 1.0));
  return sinc * window;
}

Point uniform_point(std::mt19937_64& rng, const Room& room, double margin) {
  std::uniform_real_distribution<double> ux(margin, room.width - margin);
  std::uniform_real_distribution<double> uy(margin, room.depth - margin);
  const double x = ux(rng);
  return {x, uy(rng)};
}

}  // namespace

double distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

std::size_t SceneConfig::samples() const {
  return static_cast<std::size_t>(std::llround(duration * sample_rate));
}

std::size_t SceneConfig::reference_count() const {
  return sources.size() + (ambient ? 1 : 0);
}

void validate(const SceneConfig& cfg) {
  if (cfg.version != 1) throw ConfigError("unsupported scene config version");
  if (!(cfg.room.width > 0.0) || !(cfg.room.depth > 0.0)) {
    throw ConfigError("room dimensions must be positive");
  }
  if (!(cfg.absorption > 0.0) || cfg.absorption > 1.0) {
    throw ConfigError("absorption must be in (0, 1]");
  }
  if (cfg.max_order < 0) throw ConfigError("max_order must be >= 0");
  if (cfg.sample_rate <= 0 || !(cfg.duration > 0.0) || !(cfg.sound_speed > 0.0)) {
    throw ConfigError("sample_rate, duration and sound_speed must be positive");
  }
  if (cfg.samples() == 0) throw ConfigError("scene has zero samples");
  if (cfg.sources.empty()) throw ConfigError("scene needs at least one source");
  if (cfg.mics.empty()) throw ConfigError("scene needs at least one mic");
  for (const auto& s : cfg.sources) {
    if (!cfg.room.contains(s.position)) throw ConfigError("source outside room");
  }
  for (const auto& m : cfg.mics) {
    if (!cfg.room.contains(m)) throw ConfigError("mic outside room");
  }
  if (cfg.ambient && cfg.ambient->gains.size() != cfg.mics.size()) {
    throw ConfigError("ambient needs one gain per mic");
  }
}

json to_json(const SceneConfig& cfg) {
  json sources = json::array();
  for (const auto& s : cfg.sources) {
    sources.push_back({{"position", point_json(s.position)},
                       {"signal", signal_json(s.signal)}});
  }
  json mics = json::array();
  for (const auto& m : cfg.mics) mics.push_back(point_json(m));
  json j = {{"format", "tensorscene-scene"},
            {"version", cfg.version},
            {"room", {{"width", cfg.room.width}, {"depth", cfg.room.depth}}},
            {"absorption", cfg.absorption},
            {"max_order", cfg.max_order},
            {"sample_rate", cfg.sample_rate},
            {"duration", cfg.duration},
            {"sound_speed", cfg.sound_speed},
            {"source_rms", cfg.source_rms},
            {"sources", sources},
            {"mics", mics}};
  if (cfg.ambient) {
    j["ambient"] = {{"signal", signal_json(cfg.ambient->signal)},
                    {"gains", cfg.ambient->gains},
                    {"level", cfg.ambient->level}};
  }
  return j;
}

SceneConfig scene_config_from_json(const json& j) {
  SceneConfig cfg;
  try {
    cfg.version = j.value("version", 1);
    cfg.room.width = j.at("room").at("width").get<double>();
    cfg.room.depth = j.at("room").at("depth").get<double>();
    cfg.absorption = j.value("absorption", 0.85);
    cfg.max_order = j.value("max_order", 2);
    cfg.sample_rate = j.value("sample_rate", 16000);
    cfg.duration = j.value("duration", 5.0);
    cfg.sound_speed = j.value("sound_speed", 343.0);
    cfg.source_rms = j.value("source_rms", 0.05);
    for (const auto& s : j.at("sources")) {
      cfg.sources.push_back({point_from(s.at("position")), signal_from(s.at("signal"))});
    }
    for (const auto& m : j.at("mics")) cfg.mics.push_back(point_from(m));
    if (j.contains("ambient")) {
      AmbientSpec a;
      a.signal = signal_from(j["ambient"].at("signal"));
      a.gains = j["ambient"].at("gains").get<std::vector<double>>();
      a.level = j["ambient"].value("level", a.level);
      cfg.ambient = a;
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed scene config: ") + e.what());
  }
  validate(cfg);
  return cfg;
}

void save_scene_config(const SceneConfig& cfg, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << to_json(cfg).dump(2) << '\n';
}

SceneConfig load_scene_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse " + path.string() + ": " + e.what());
  }
  return scene_config_from_json(j);
}

std::vector<ImageSource> image_sources(const Room& room, const Point& src,
                                       int max_order) {
  struct Indexed {
    ImageSource image;
    int nx, ny;
  };
  std::vector<Indexed> found;
  for (int nx = -max_order; nx <= max_order; ++nx) {
    const int rest = max_order - std::abs(nx);
    for (int ny = -rest; ny <= rest; ++ny) {
      found.push_back({{{mirror(nx, room.width, src.x), mirror(ny, room.depth, src.y)},
                        std::abs(nx) + std::abs(ny)},
                       nx,
                       ny});
    }
  }
  std::sort(found.begin(), found.end(), [](const Indexed& a, const Indexed& b) {
    if (a.image.order != b.image.order) return a.image.order < b.image.order;
    if (a.nx != b.nx) return a.nx < b.nx;
    return a.ny < b.ny;
  });
  std::vector<ImageSource> out;
  for (const auto& f : found) {
    const bool duplicate = std::any_of(out.begin(), out.end(), [&](const ImageSource& e) {
      return e.position.x == f.image.position.x && e.position.y == f.image.position.y;
    });
    if (!duplicate) out.push_back(f.image);
  }
  return out;
}

RoomImpulseResponse render_rir(const std::vector<ImageSource>& images,
                               const Point& mic, double absorption,
                               int sample_rate, double sound_speed) {
  if (images.empty()) throw InputError("render_rir: no image sources");
  const double reflect = 1.0 - absorption;
  double max_delay = 0.0;
  for (const auto& im : images) {
    const double d = distance(im.position, mic);
    if (d < 1e-9) throw InputError("render_rir: mic coincides with an image source");
    max_delay = std::max(max_delay, d / sound_speed * sample_rate);
  }
  RoomImpulseResponse rir;
  rir.sample_rate = sample_rate;
  rir.taps.assign(static_cast<std::size_t>(std::floor(max_delay)) +
                      kFractionalDelayHalfWidth + 1,
                  0.0);
  for (const auto& im : images) {
    const double d = distance(im.position, mic);
    const double amplitude =
        std::pow(reflect, 0.5 * im.order) / (4.0 * std::numbers::pi * d);
    if (amplitude == 0.0) continue;
    const double delay = d / sound_speed * sample_rate;
    const auto first = static_cast<long>(std::ceil(delay - kFractionalDelayHalfWidth));
    const auto last = static_cast<long>(std::floor(delay + kFractionalDelayHalfWidth));
    for (long n = std::max(first, 0L); n <= last; ++n) {
      rir.taps[n] += amplitude * fractional_delay_tap(n - delay);
    }
  }
  return rir;
}

std::vector<double> render_signal(const SignalSpec& spec, const SceneConfig& cfg,
                                  const std::filesystem::path& base_dir) {
  const std::size_t n = cfg.samples();
  std::vector<double> out;
  if (spec.kind == "wav") {
    std::filesystem::path p = spec.path;
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    if (!std::filesystem::exists(p)) throw IoError("missing source WAV " + p.string());
    const AudioClip clip = read_wav(p);
    if (clip.sample_rate != cfg.sample_rate) {
      throw InputError(p.string() + " has sample rate " +
                       std::to_string(clip.sample_rate) + ", scene uses " +
                       std::to_string(cfg.sample_rate));
    }
    out.assign(n, 0.0);
    const std::size_t copy = std::min<std::size_t>(n, clip.length());
    for (std::size_t i = 0; i < copy; ++i) out[i] = clip.samples.col(i).mean();
  } else if (spec.kind == "speech") {
    out = speech_like(spec.seed, cfg.sample_rate, n);
  } else if (spec.kind == "tones") {
    out = tone_mix(spec.frequencies, cfg.sample_rate, n);
  } else if (spec.kind == "noise") {
    out = ambient_noise(spec.preset, spec.seed, cfg.sample_rate, n);
  } else if (spec.kind == "silence") {
    out.assign(n, 0.0);
  } else {
    throw ConfigError("unknown signal kind '" + spec.kind + "'");
  }
  if (cfg.source_rms > 0.0) normalize_rms(out, cfg.source_rms);
  return out;
}

SimulatedScene simulate(const SceneConfig& cfg, const std::filesystem::path& base_dir) {
  validate(cfg);
  const std::size_t n = cfg.samples();
  const auto mics = static_cast<Eigen::Index>(cfg.mics.size());
  SimulatedScene scene;
  scene.mixture.sample_rate = cfg.sample_rate;
  scene.mixture.samples = Matrix::Zero(mics, static_cast<Eigen::Index>(n));

  for (const auto& src : cfg.sources) {
    scene.dry.push_back(render_signal(src.signal, cfg, base_dir));
    const auto& dry = scene.dry.back();
    const auto images = image_sources(cfg.room, src.position, cfg.max_order);
    AudioClip image;
    image.sample_rate = cfg.sample_rate;
    image.samples = Matrix::Zero(mics, static_cast<Eigen::Index>(n));
    for (Eigen::Index m = 0; m < mics; ++m) {
      const auto rir = render_rir(images, cfg.mics[m], cfg.absorption,
                                  cfg.sample_rate, cfg.sound_speed);
      const auto wet = fft_convolve(dry, rir.taps);
      for (std::size_t i = 0; i < n; ++i) image.samples(m, i) = wet[i];
    }
    scene.images.push_back(std::move(image));
  }
  if (cfg.ambient) {
    scene.dry.push_back(render_signal(cfg.ambient->signal, cfg, base_dir));
    const auto& dry = scene.dry.back();
    AudioClip image;
    image.sample_rate = cfg.sample_rate;
    image.samples = Matrix::Zero(mics, static_cast<Eigen::Index>(n));
    for (Eigen::Index m = 0; m < mics; ++m) {
      const double gain = cfg.ambient->level * cfg.ambient->gains[m];
      for (std::size_t i = 0; i < n; ++i) image.samples(m, i) = gain * dry[i];
    }
    scene.images.push_back(std::move(image));
  }
  for (const auto& image : scene.images) scene.mixture.samples += image.samples;
  return scene;
}

SceneConfig random_scene(std::mt19937_64& rng, std::size_t n_point_sources,
                         std::size_t n_mics, const Room& room,
                         const std::optional<std::string>& ambient_preset,
                         const ScenePlacement& placement) {
  if (n_point_sources < 1) throw ConfigError("random_scene: need at least one source");
  if (n_mics < n_point_sources) {
    throw ConfigError("random_scene: need at least one mic per point source");
  }
  const std::size_t cells = placement.grid_cells * placement.grid_cells;
  if (n_point_sources > cells) {
    throw ConfigError("random_scene: more sources than grid cells");
  }
  SceneConfig cfg;
  cfg.room = room;

  // Distinct grid cells via partial Fisher-Yates.
  std::vector<std::size_t> cell_ids(cells);
  for (std::size_t i = 0; i < cells; ++i) cell_ids[i] = i;
  for (std::size_t i = 0; i < n_point_sources; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, cells - 1);
    std::swap(cell_ids[i], cell_ids[pick(rng)]);
  }
  const double cell_w = room.width / placement.grid_cells;
  const double cell_d = room.depth / placement.grid_cells;
  std::uniform_int_distribution<std::uint64_t> seeds;
  for (std::size_t i = 0; i < n_point_sources; ++i) {
    const std::size_t cx = cell_ids[i] % placement.grid_cells;
    const std::size_t cy = cell_ids[i] / placement.grid_cells;
    SourceSpec s;
    s.position = {(cx + 0.5) * cell_w, (cy + 0.5) * cell_d};
    s.signal.kind = "speech";
    s.signal.seed = seeds(rng);
    cfg.sources.push_back(s);
  }

  const double m = placement.wall_margin;
  const auto inside = [&](const Point& p) {
    return p.x >= m && p.x <= room.width - m && p.y >= m && p.y <= room.depth - m;
  };
  const auto clear_of_sources = [&](const Point& p) {
    return std::all_of(cfg.sources.begin(), cfg.sources.end(), [&](const SourceSpec& s) {
      return distance(s.position, p) > 0.05;
    });
  };
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (const auto& s : cfg.sources) {
    bool placed = false;
    for (std::size_t attempt = 0; attempt < placement.max_retries && !placed; ++attempt) {
      const double r = placement.near_radius * std::sqrt(unit(rng));
      const double theta = 2.0 * std::numbers::pi * unit(rng);
      const Point p{s.position.x + r * std::cos(theta), s.position.y + r * std::sin(theta)};
      if (inside(p) && clear_of_sources(p)) {
        cfg.mics.push_back(p);
        placed = true;
      }
    }
    if (!placed) throw ConfigError("random_scene: could not place a mic near a source");
  }
  while (cfg.mics.size() < n_mics) {
    bool placed = false;
    for (std::size_t attempt = 0; attempt < placement.max_retries && !placed; ++attempt) {
      const Point p = uniform_point(rng, room, m);
      if (clear_of_sources(p)) {
        cfg.mics.push_back(p);
        placed = true;
      }
    }
    if (!placed) throw ConfigError("random_scene: could not place a free mic");
  }

  if (ambient_preset) {
    AmbientSpec a;
    a.signal.kind = "noise";
    a.signal.preset = *ambient_preset;
    a.signal.seed = seeds(rng);
    std::uniform_real_distribution<double> gain(0.8, 1.2);
    for (std::size_t i = 0; i < n_mics; ++i) a.gains.push_back(gain(rng));
    cfg.ambient = a;
  }
  validate(cfg);
  return cfg;
}

}  // namespace tensorscene
