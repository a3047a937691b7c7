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
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "tensorscene/audio.hpp"
#include "tensorscene/errors.hpp"

namespace tensorscene {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

template <typename T>
T read_le(const std::uint8_t* p) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  return v;
}

template <typename T>
void put_le(std::string& out, T v) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, &v, sizeof(T));
  out.append(bytes, sizeof(T));
}

}  // namespace

void validate(const AudioClip& clip) {
  if (clip.channels() < 1 || clip.length() < 1) {
    throw InputError("audio clip needs at least one channel and one sample");
  }
  if (!clip.samples.allFinite()) {
    throw InputError("audio clip contains non-finite samples");
  }
  if (clip.sample_rate <= 0) throw InputError("audio sample rate must be positive");
}

AudioClip read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  const auto fail = [&](const std::string& why) {
    return IoError(path.string() + ": " + why);
  };
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw fail("not a RIFF/WAVE file");
  }

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const std::uint8_t* data = nullptr;
  std::size_t data_size = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* chunk = bytes.data() + pos;
    const std::uint32_t size = read_le<std::uint32_t>(chunk + 4);
    const std::size_t body = pos + 8;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || body + size > bytes.size()) throw fail("bad fmt chunk");
      format = read_le<std::uint16_t>(bytes.data() + body);
      channels = read_le<std::uint16_t>(bytes.data() + body + 2);
      rate = read_le<std::uint32_t>(bytes.data() + body + 4);
      bits = read_le<std::uint16_t>(bytes.data() + body + 14);
      if (format == kFormatExtensible && size >= 40) {
        format = read_le<std::uint16_t>(bytes.data() + body + 24);
      }
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      data_size = std::min<std::size_t>(size, bytes.size() - body);
    }
    pos = body + size + (size & 1u);
  }
  if (channels == 0 || rate == 0) throw fail("missing fmt chunk");
  if (data == nullptr) throw fail("missing data chunk");
  const bool pcm16 = format == kFormatPcm && bits == 16;
  const bool f32 = format == kFormatFloat && bits == 32;
  if (!pcm16 && !f32) {
    throw fail("unsupported sample format (need 16-bit PCM or 32-bit float)");
  }

  const std::size_t frame_bytes = channels * (bits / 8);
  const std::size_t frames = data_size / frame_bytes;
  AudioClip clip;
  clip.sample_rate = static_cast<int>(rate);
  clip.samples.resize(channels, static_cast<Eigen::Index>(frames));
  for (std::size_t n = 0; n < frames; ++n) {
    for (std::size_t c = 0; c < channels; ++c) {
      const std::uint8_t* p = data + n * frame_bytes + c * (bits / 8);
      clip.samples(c, n) = pcm16 ? read_le<std::int16_t>(p) / 32768.0
                                 : static_cast<double>(read_le<float>(p));
    }
  }
  return clip;
}

void write_wav(const AudioClip& clip, const std::filesystem::path& path,
               SampleFormat format) {
  validate(clip);
  const bool f32 = format == SampleFormat::kFloat32;
  const std::uint16_t channels = static_cast<std::uint16_t>(clip.channels());
  const std::uint16_t bits = f32 ? 32 : 16;
  const std::uint32_t block = channels * (bits / 8);
  const std::uint32_t data_size =
      static_cast<std::uint32_t>(clip.length() * block);

  std::string out;
  out.reserve(44 + data_size);
  out.append("RIFF");
  put_le<std::uint32_t>(out, 36 + data_size);
  out.append("WAVEfmt ");
  put_le<std::uint32_t>(out, 16);
  put_le<std::uint16_t>(out, f32 ? kFormatFloat : kFormatPcm);
  put_le<std::uint16_t>(out, channels);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(clip.sample_rate));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(clip.sample_rate) * block);
  put_le<std::uint16_t>(out, static_cast<std::uint16_t>(block));
  put_le<std::uint16_t>(out, bits);
  out.append("data");
  put_le<std::uint32_t>(out, data_size);
  for (std::size_t n = 0; n < clip.length(); ++n) {
    for (std::size_t c = 0; c < channels; ++c) {
      const double v = clip.samples(c, n);
      if (f32) {
        put_le<float>(out, static_cast<float>(v));
      } else {
        const double scaled = std::round(std::clamp(v, -1.0, 1.0) * 32768.0);
        put_le<std::int16_t>(
            out, static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0)));
      }
    }
  }

  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot write " + path.string());
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw IoError("failed writing " + path.string());
}

AudioClip read_wav_channels(const std::vector<std::filesystem::path>& paths) {
  if (paths.empty()) throw InputError("no WAV files given");
  std::vector<AudioClip> clips;
  std::size_t total = 0;
  for (const auto& p : paths) {
    clips.push_back(read_wav(p));
    if (clips.back().sample_rate != clips.front().sample_rate) {
      throw InputError("WAV files differ in sample rate (" + p.string() + ")");
    }
    if (clips.back().length() != clips.front().length()) {
      throw InputError("WAV files differ in length (" + p.string() + ")");
    }
    total += clips.back().channels();
  }
  AudioClip out;
  out.sample_rate = clips.front().sample_rate;
  out.samples.resize(static_cast<Eigen::Index>(total), clips.front().samples.cols());
  Eigen::Index row = 0;
  for (const auto& c : clips) {
    out.samples.middleRows(row, c.samples.rows()) = c.samples;
    row += c.samples.rows();
  }
  return out;
}

}  // namespace tensorscene
