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

#include "tensorscene/checkpoint.hpp"

#include <fstream>
#include <string>

#include "json.hpp"

#include "tensorscene/errors.hpp"

namespace tensorscene {
namespace {

using nlohmann::json;

constexpr const char* kFormat = "tensorscene-checkpoint";
constexpr int kVersion = 1;

json matrix_to_json(const Matrix& m) {
  std::vector<double> data;
  data.reserve(m.size());
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

Matrix matrix_from_json(const json& j, const char* name) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto data = j.at("data").get<std::vector<double>>();
  if (rows < 0 || cols < 0 ||
      data.size() != static_cast<std::size_t>(rows * cols)) {
    throw IoError(std::string("checkpoint matrix '") + name +
                  "' has inconsistent shape");
  }
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data[r * cols + c];
  }
  return m;
}

json train_to_json(const TrainConfig& cfg) {
  return {{"batch_frames", cfg.batch_frames},
          {"n_batches", cfg.n_batches},
          {"learning_rate", cfg.learning_rate},
          {"k", cfg.k},
          {"epsilon_floor", cfg.epsilon_floor},
          {"seed", cfg.seed},
          {"activation", to_string(cfg.activation)},
          {"init", {{"decoder", cfg.init.decoder}, {"encoder", cfg.init.encoder}}}};
}

TrainConfig train_from_json(const json& j) {
  TrainConfig cfg;
  cfg.batch_frames = j.at("batch_frames").get<std::size_t>();
  cfg.n_batches = j.at("n_batches").get<std::size_t>();
  cfg.learning_rate = j.at("learning_rate").get<double>();
  cfg.k = j.at("k").get<std::size_t>();
  cfg.epsilon_floor = j.at("epsilon_floor").get<double>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  cfg.activation = parse_nonlinearity(j.at("activation").get<std::string>());
  cfg.init.decoder = j.at("init").at("decoder").get<std::array<double, 2>>();
  cfg.init.encoder = j.at("init").at("encoder").get<std::array<double, 2>>();
  return cfg;
}

}  // namespace

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  validate(ckpt.model);
  const FactorModel& m = ckpt.model;
  json j;
  j["format"] = kFormat;
  j["version"] = kVersion;
  j["channels"] = m.channels();
  j["bins"] = m.bins();
  j["components"] = m.components();
  j["dictionary_activation"] = to_string(m.dictionary_activation);
  j["activation_nonlinearity"] = to_string(m.activation_nonlinearity);
  j["seed"] = ckpt.train.seed;
  j["train"] = train_to_json(ckpt.train);
  j["analysis"] = {{"sample_rate", ckpt.analysis.sample_rate},
                   {"fft_size", ckpt.analysis.fft_size},
                   {"hop", ckpt.analysis.hop}};
  j["matrices"] = {{"dec_channel", matrix_to_json(m.dec_channel)},
                   {"dec_freq", matrix_to_json(m.dec_freq)},
                   {"enc_channel", matrix_to_json(m.enc_channel)},
                   {"enc_freq", matrix_to_json(m.enc_freq)}};
  std::ofstream out(path);
  if (!out) throw IoError("cannot write checkpoint " + path.string());
  out << j.dump(1) << '\n';
  if (!out) throw IoError("failed writing checkpoint " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open checkpoint " + path.string());
  Checkpoint ckpt;
  try {
    const json j = json::parse(in);
    if (j.at("format").get<std::string>() != kFormat) {
      throw IoError(path.string() + " is not a tensorscene checkpoint");
    }
    if (j.at("version").get<int>() != kVersion) {
      throw IoError("unsupported checkpoint version in " + path.string());
    }
    const json& mats = j.at("matrices");
    ckpt.model.dec_channel = matrix_from_json(mats.at("dec_channel"), "dec_channel");
    ckpt.model.dec_freq = matrix_from_json(mats.at("dec_freq"), "dec_freq");
    ckpt.model.enc_channel = matrix_from_json(mats.at("enc_channel"), "enc_channel");
    ckpt.model.enc_freq = matrix_from_json(mats.at("enc_freq"), "enc_freq");
    ckpt.model.dictionary_activation =
        parse_nonlinearity(j.at("dictionary_activation").get<std::string>());
    ckpt.model.activation_nonlinearity =
        parse_nonlinearity(j.at("activation_nonlinearity").get<std::string>());
    ckpt.train = train_from_json(j.at("train"));
    const json& a = j.at("analysis");
    ckpt.analysis.sample_rate = a.at("sample_rate").get<int>();
    ckpt.analysis.fft_size = a.at("fft_size").get<int>();
    ckpt.analysis.hop = a.at("hop").get<int>();
  } catch (const json::exception& e) {
    throw IoError("malformed checkpoint " + path.string() + ": " + e.what());
  } catch (const ConfigError& e) {
    throw IoError("malformed checkpoint " + path.string() + ": " + e.what());
  }
  try {
    validate(ckpt.model);
  } catch (const Error& e) {
    throw IoError("malformed checkpoint " + path.string() + ": " + e.what());
  }
  return ckpt;
}

void write_loss_csv(const std::vector<double>& trace,
                    const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "batch,loss\n";
  out.precision(17);
  for (std::size_t i = 0; i < trace.size(); ++i) {
    out << i << ',' << trace[i] << '\n';
  }
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace tensorscene
