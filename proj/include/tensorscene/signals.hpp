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

#ifndef TENSORSCENE_SIGNALS_HPP_
#define TENSORSCENE_SIGNALS_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace tensorscene {

// Voiced, syllabic test signal: a harmonic series on a gliding pitch
// contour, shaped by per-syllable formant resonances, with pauses between
// syllables. Each seed gives a different "speaker".
std::vector<double> speech_like(std::uint64_t seed, int sample_rate,
                                std::size_t samples);

// Diffuse background presets: "pink", "brown", "hum", "babble".
std::vector<double> ambient_noise(const std::string& preset,
                                  std::uint64_t seed, int sample_rate,
                                  std::size_t samples);
const std::vector<std::string>& ambient_presets();

// Sum of unit-amplitude cosines at the given frequencies (Hz).
std::vector<double> tone_mix(std::span<const double> frequencies,
                             int sample_rate, std::size_t samples);

double rms(std::span<const double> x);
// Scales x in place to the target RMS; silent input is left alone.
void normalize_rms(std::vector<double>& x, double target);

}  // namespace tensorscene

#endif  // TENSORSCENE_SIGNALS_HPP_
