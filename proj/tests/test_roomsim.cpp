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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "doctest.h"
#include "tensorscene/errors.hpp"
#include "tensorscene/roomsim.hpp"
#include "tensorscene/signals.hpp"

using namespace tensorscene;

namespace {

constexpr double kPi = std::numbers::pi;

double energy(const std::vector<double>& v) {
  double e = 0.0;
  for (double x : v) e += x * x;
  return e;
}

std::size_t argmax_abs(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[best])) best = i;
  return best;
}

SceneConfig two_source_scene() {
  SceneConfig cfg;
  cfg.duration = 0.25;
  cfg.sample_rate = 8000;
  SourceSpec a, b;
  a.position = {2.0, 3.0};
  a.signal.kind = "tones";
  a.signal.frequencies = {440.0};
  b.position = {7.0, 6.5};
  b.signal.kind = "speech";
  b.signal.seed = 3;
  cfg.sources = {a, b};
  cfg.mics = {{2.3, 3.1}, {6.5, 6.0}, {5.0, 5.0}};
  return cfg;
}

}  // namespace

TEST_SUITE("image sources") {
  const Room room{10.0, 8.0};
  const Point src{3.0, 2.0};

  TEST_CASE("order zero is the source itself") {
    const auto images = image_sources(room, src, 0);
    REQUIRE(images.size() == 1);
    CHECK(images[0].position.x == 3.0);
    CHECK(images[0].position.y == 2.0);
    CHECK(images[0].order == 0);
  }

  TEST_CASE("first order adds one mirror per wall") {
    const auto images = image_sources(room, src, 1);
    REQUIRE(images.size() == 5);
    std::vector<std::pair<double, double>> got;
    for (const auto& im : images) got.emplace_back(im.position.x, im.position.y);
    std::sort(got.begin(), got.end());
    const std::vector<std::pair<double, double>> want{
        {-3.0, 2.0}, {3.0, -2.0}, {3.0, 2.0}, {3.0, 14.0}, {17.0, 2.0}};
    CHECK(got == want);
    CHECK(std::count_if(images.begin(), images.end(), [](const ImageSource& i) { return i.order == 1; }) == 4);
  }

  TEST_CASE("second order has the diamond of thirteen images") {
    const auto images = image_sources(room, src, 2);
    CHECK(images.size() == 13);
    for (const auto& im : images) CHECK(im.order <= 2);
  }

  TEST_CASE("a centered source has mirror-symmetric images") {
    const auto images = image_sources(room, {5.0, 4.0}, 2);
    for (const auto& im : images) {
      const Point flipped{10.0 - im.position.x, im.position.y};
      CHECK(std::any_of(images.begin(), images.end(), [&](const ImageSource& o) {
        return std::abs(o.position.x - flipped.x) < 1e-12 && std::abs(o.position.y - flipped.y) < 1e-12 &&
               o.order == im.order;
      }));
    }
  }
}

TEST_SUITE("impulse response") {
  TEST_CASE("integer delay puts a single peak of the spherical amplitude") {
    const std::vector<ImageSource> direct{{{0.0, 0.0}, 0}};
    const auto rir = render_rir(direct, {343.0, 0.0}, 0.5, 1000, 343.0);
    REQUIRE(rir.taps.size() > 1000);
    CHECK(argmax_abs(rir.taps) == 1000);
    CHECK(rir.taps[1000] == doctest::Approx(1.0 / (4 * kPi * 343.0)).epsilon(1e-12));
    // Windowed sinc vanishes at every other integer offset.
    for (std::size_t i = 0; i < rir.taps.size(); ++i)
      if (i != 1000) CHECK(std::abs(rir.taps[i]) < 1e-15);
  }

  TEST_CASE("full absorption keeps only the direct path") {
    const Room room;
    const Point src{4.0, 4.0}, mic{5.0, 4.0};
    const auto all = render_rir(image_sources(room, src, 2), mic, 1.0, 16000, 343.0);
    const auto direct = render_rir(image_sources(room, src, 0), mic, 1.0, 16000, 343.0);
    for (std::size_t i = 0; i < direct.taps.size(); ++i) CHECK(all.taps[i] == direct.taps[i]);
    for (std::size_t i = direct.taps.size(); i < all.taps.size(); ++i) CHECK(all.taps[i] == 0.0);
  }

  TEST_CASE("amplitude follows the inverse distance law") {
    const std::vector<ImageSource> direct{{{0.0, 0.0}, 0}};
    const auto near = render_rir(direct, {3.43, 0.0}, 0.5, 1000, 343.0);   // 10 samples
    const auto far = render_rir(direct, {6.86, 0.0}, 0.5, 1000, 343.0);    // 20 samples
    CHECK(near.taps[10] / far.taps[20] == doctest::Approx(2.0).epsilon(1e-12));
  }

  TEST_CASE("fractional delays stay inside the interpolation support") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(1.0, 9.0);
    for (int trial = 0; trial < 20; ++trial) {
      const Point mic{u(rng), u(rng)};
      const std::vector<ImageSource> direct{{{5.0, 5.0}, 0}};
      if (distance(mic, {5.0, 5.0}) < 0.1) continue;
      const auto rir = render_rir(direct, mic, 0.5, 16000, 343.0);
      const double delay = distance(mic, {5.0, 5.0}) / 343.0 * 16000;
      for (std::size_t i = 0; i < rir.taps.size(); ++i)
        if (rir.taps[i] != 0.0) CHECK(std::abs(static_cast<double>(i) - delay) <= kFractionalDelayHalfWidth);
      CHECK(std::abs(static_cast<double>(argmax_abs(rir.taps)) - delay) <= 0.5 + 1e-9);
    }
  }

  TEST_CASE("more absorption never adds energy") {
    const Room room;
    const auto images = image_sources(room, {2.0, 7.0}, 2);
    double previous = 1e300;
    for (double a : {0.05, 0.2, 0.5, 0.85, 1.0}) {
      const double e = energy(render_rir(images, {6.0, 3.0}, a, 16000, 343.0).taps);
      CHECK(e <= previous);
      previous = e;
    }
  }

  TEST_CASE("coincident mic and source is rejected") {
    const std::vector<ImageSource> direct{{{1.0, 1.0}, 0}};
    CHECK_THROWS_AS(render_rir(direct, {1.0, 1.0}, 0.5, 16000, 343.0), InputError);
  }
}

TEST_SUITE("simulate") {
  TEST_CASE("mixture is exactly the sum of the source images") {
    const SceneConfig cfg = two_source_scene();
    const SimulatedScene scene = simulate(cfg);
    REQUIRE(scene.images.size() == 2);
    CHECK(scene.mixture.channels() == 3);
    CHECK(scene.mixture.length() == 2000);
    CHECK(scene.mixture.samples == scene.images[0].samples + scene.images[1].samples);
  }

  TEST_CASE("images match direct convolution with the impulse response") {
    SceneConfig cfg = two_source_scene();
    cfg.duration = 0.05;
    const SimulatedScene scene = simulate(cfg);
    const auto rir = render_rir(image_sources(cfg.room, cfg.sources[0].position, cfg.max_order),
                                cfg.mics[1], cfg.absorption, cfg.sample_rate, cfg.sound_speed);
    const auto& dry = scene.dry[0];
    for (std::size_t n = 0; n < dry.size(); ++n) {
      double acc = 0.0;
      for (std::size_t k = 0; k <= n && k < rir.taps.size(); ++k) acc += rir.taps[k] * dry[n - k];
      CHECK(std::abs(scene.images[0].samples(1, n) - acc) < 1e-12);
    }
  }

  TEST_CASE("a silent source contributes nothing") {
    SceneConfig cfg = two_source_scene();
    cfg.sources[1].signal.kind = "silence";
    const SimulatedScene scene = simulate(cfg);
    CHECK(scene.images[1].samples.isZero(0.0));
    CHECK(scene.mixture.samples == scene.images[0].samples);
  }

  TEST_CASE("dry signals are normalized to the configured level") {
    const SimulatedScene scene = simulate(two_source_scene());
    for (const auto& d : scene.dry) CHECK(rms(d) == doctest::Approx(0.05).epsilon(1e-12));
  }

  TEST_CASE("ambient noise is added to every mic with its gain") {
    SceneConfig cfg = two_source_scene();
    AmbientSpec a;
    a.signal.kind = "noise";
    a.signal.preset = "pink";
    a.gains = {1.0, 0.5, 1.2};
    cfg.ambient = a;
    const SimulatedScene scene = simulate(cfg);
    REQUIRE(scene.images.size() == 3);
    CHECK(cfg.reference_count() == 3);
    const auto& amb = scene.images[2].samples;
    CHECK(amb.row(1).isApprox(0.5 * amb.row(0)));
    CHECK(amb.row(2).isApprox(1.2 * amb.row(0)));
  }

  TEST_CASE("invalid scenes are rejected") {
    SceneConfig cfg = two_source_scene();
    cfg.absorption = 0.0;
    CHECK_THROWS_AS(simulate(cfg), ConfigError);
    cfg = two_source_scene();
    cfg.mics.push_back({11.0, 1.0});
    CHECK_THROWS_AS(simulate(cfg), ConfigError);
    cfg = two_source_scene();
    cfg.sources[0].signal.kind = "wav";
    cfg.sources[0].signal.path = "/nonexistent/source.wav";
    CHECK_THROWS_AS(simulate(cfg), IoError);
  }
}

TEST_SUITE("random scenes") {
  TEST_CASE("same seed, same scene") {
    std::mt19937_64 a(42), b(42);
    const SceneConfig x = random_scene(a, 3, 4, Room{}, std::string("babble"));
    const SceneConfig y = random_scene(b, 3, 4, Room{}, std::string("babble"));
    CHECK(to_json(x) == to_json(y));
  }

  TEST_CASE("sources are separated and each has a nearby mic") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
      const SceneConfig cfg = random_scene(rng, 3, 4, Room{});
      REQUIRE(cfg.sources.size() == 3);
      REQUIRE(cfg.mics.size() == 4);
      for (std::size_t i = 0; i < 3; ++i) {
        CHECK(distance(cfg.mics[i], cfg.sources[i].position) <= 0.5);
        for (std::size_t j = i + 1; j < 3; ++j)
          CHECK(distance(cfg.sources[i].position, cfg.sources[j].position) >= 2.5 - 1e-12);
      }
      for (const auto& m : cfg.mics) CHECK(cfg.room.contains(m));
    }
  }

  TEST_CASE("JSON round trip preserves the scene") {
    std::mt19937_64 rng(8);
    const SceneConfig cfg = random_scene(rng, 2, 3, Room{6.0, 4.0}, std::string("hum"));
    const auto path = std::filesystem::temp_directory_path() / "tensorscene_scene.json";
    save_scene_config(cfg, path);
    const SceneConfig back = load_scene_config(path);
    CHECK(to_json(back) == to_json(cfg));
    CHECK(back.sources[1].signal.seed == cfg.sources[1].signal.seed);
    CHECK(back.mics[2].x == cfg.mics[2].x);
    std::filesystem::remove(path);
  }
}

TEST_SUITE("signals") {
  TEST_CASE("generators are deterministic and finite") {
    const auto a = speech_like(5, 16000, 8000), b = speech_like(5, 16000, 8000);
    CHECK(a == b);
    CHECK(speech_like(6, 16000, 8000) != a);
    for (const auto& preset : ambient_presets()) {
      const auto n = ambient_noise(preset, 1, 16000, 4000);
      CHECK(n.size() == 4000);
      CHECK(std::all_of(n.begin(), n.end(), [](double v) { return std::isfinite(v); }));
      CHECK(rms(n) > 0.0);
    }
    CHECK_THROWS_AS(ambient_noise("static", 1, 16000, 10), ConfigError);
  }

  TEST_CASE("rms normalization") {
    const std::vector<double> freqs{100.0, 250.0};
    auto v = tone_mix(freqs, 8000, 8000);
    normalize_rms(v, 0.1);
    CHECK(rms(v) == doctest::Approx(0.1));
  }
}
