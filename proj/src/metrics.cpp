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

#include "tensorscene/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include <Eigen/Dense>
#include <spdlog/spdlog.h>

#include "json.hpp"
#include "tensorscene/errors.hpp"
#include "tensorscene/fft.hpp"

namespace tensorscene {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kRidge = 1e-10;

// Normal equations for projecting onto the span of filter_len delayed
// copies of a group of references.
class ShiftSpan {
 public:
  ShiftSpan(const std::vector<std::vector<double>>& refs,
            std::vector<std::size_t> members, std::size_t filter_len)
      : refs_(refs), members_(std::move(members)), len_(filter_len) {
    const auto dim = static_cast<Eigen::Index>(members_.size() * len_);
    MatrixXd gram(dim, dim);
    const std::size_t max_lag = len_ - 1;
    for (std::size_t bi = 0; bi < members_.size(); ++bi) {
      for (std::size_t bj = bi; bj < members_.size(); ++bj) {
        const auto& ri = refs_[members_[bi]];
        const auto& rj = refs_[members_[bj]];
        // pos[tau] = sum_m ri[m] rj[m + tau], neg[tau] = sum_m ri[m + tau] rj[m]
        const auto pos = cross_correlation(rj, ri, max_lag);
        const auto neg = cross_correlation(ri, rj, max_lag);
        for (std::size_t a = 0; a < len_; ++a) {
          for (std::size_t b = 0; b < len_; ++b) {
            const double v = a >= b ? pos[a - b] : neg[b - a];
            gram(bi * len_ + a, bj * len_ + b) = v;
            gram(bj * len_ + b, bi * len_ + a) = v;
          }
        }
      }
    }
    const double mean_diag = dim > 0 ? gram.diagonal().mean() : 0.0;
    double ridge = kRidge * (mean_diag > 0.0 ? mean_diag : 1.0);
    gram.diagonal().array() += ridge;
    llt_.compute(gram);
    if (llt_.info() != Eigen::Success) {
      spdlog::warn("bss projection: singular reference system, using a "
                   "stronger ridge");
      gram.diagonal().array() += 1e4 * ridge;
      llt_.compute(gram);
    }
  }

  // Projection of `estimate` (unpadded) as a length N + L - 1 signal.
  std::vector<double> project(std::span<const double> estimate) const {
    const auto dim = static_cast<Eigen::Index>(members_.size() * len_);
    VectorXd rhs(dim);
    for (std::size_t bi = 0; bi < members_.size(); ++bi) {
      const auto xc = cross_correlation(estimate, refs_[members_[bi]], len_ - 1);
      for (std::size_t a = 0; a < len_; ++a) rhs(bi * len_ + a) = xc[a];
    }
    const VectorXd coef = llt_.solve(rhs);
    std::vector<double> out(estimate.size() + len_ - 1, 0.0);
    for (std::size_t bi = 0; bi < members_.size(); ++bi) {
      const std::vector<double> taps(coef.data() + bi * len_,
                                     coef.data() + (bi + 1) * len_);
      const auto part = fft_convolve(refs_[members_[bi]], taps);
      for (std::size_t n = 0; n < out.size() && n < part.size(); ++n) out[n] += part[n];
    }
    return out;
  }

 private:
  const std::vector<std::vector<double>>& refs_;
  std::vector<std::size_t> members_;
  std::size_t len_;
  Eigen::LLT<MatrixXd> llt_;
};

void check_inputs(std::size_t length,
                  const std::vector<std::vector<double>>& references,
                  std::size_t filter_len) {
  if (references.empty()) throw InputError("bss: no reference signals");
  if (filter_len < 1) throw ConfigError("bss: filter length must be >= 1");
  for (const auto& r : references) {
    if (r.size() != length) {
      throw InputError("bss: estimate and reference lengths differ (" +
                       std::to_string(length) + " vs " + std::to_string(r.size()) + ")");
    }
  }
  if (length < filter_len) throw InputError("bss: signals shorter than the filter");
}

Projections split(std::span<const double> estimate, const std::vector<double>& all,
                  std::vector<double> target) {
  Projections p;
  const std::size_t n = all.size();
  p.interference.resize(n);
  p.artifacts.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double e = i < estimate.size() ? estimate[i] : 0.0;
    p.interference[i] = all[i] - target[i];
    p.artifacts[i] = e - all[i];
  }
  p.target = std::move(target);
  return p;
}

double ratio_db(double num, double den) {
  if (den <= 0.0) return kScoreCap;
  if (num <= 0.0) return -kScoreCap;
  return std::clamp(10.0 * std::log10(num / den), -kScoreCap, kScoreCap);
}

double energy(const std::vector<double>& x) {
  return std::inner_product(x.begin(), x.end(), x.begin(), 0.0);
}

}  // namespace

Projections decompose_projections(std::span<const double> estimate,
                                  const std::vector<std::vector<double>>& references,
                                  std::size_t target_index, std::size_t filter_len) {
  check_inputs(estimate.size(), references, filter_len);
  if (target_index >= references.size()) {
    throw InputError("bss: target index out of range");
  }
  std::vector<std::size_t> everyone(references.size());
  std::iota(everyone.begin(), everyone.end(), std::size_t{0});
  const ShiftSpan all(references, everyone, filter_len);
  const ShiftSpan own(references, {target_index}, filter_len);
  return split(estimate, all.project(estimate), own.project(estimate));
}

SourceRatios energy_ratios(const Projections& p) {
  std::vector<double> distortion(p.target.size()), signal(p.target.size());
  for (std::size_t i = 0; i < p.target.size(); ++i) {
    distortion[i] = p.interference[i] + p.artifacts[i];
    signal[i] = p.target[i] + p.interference[i];
  }
  const double target = energy(p.target);
  SourceRatios r;
  r.sdr = ratio_db(target, energy(distortion));
  r.sir = ratio_db(target, energy(p.interference));
  r.sar = ratio_db(energy(signal), energy(p.artifacts));
  return r;
}

BssScore score(const std::vector<std::vector<double>>& estimates,
               const std::vector<std::vector<double>>& references,
               std::size_t filter_len) {
  if (estimates.size() != references.size()) {
    throw InputError("bss: " + std::to_string(estimates.size()) + " estimates for " +
                     std::to_string(references.size()) + " references");
  }
  for (const auto& e : estimates) check_inputs(e.size(), references, filter_len);
  const std::size_t n = references.size();
  if (n > 8) spdlog::warn("bss: scoring {} sources tries {}! permutations", n, n);

  std::vector<std::size_t> everyone(n);
  std::iota(everyone.begin(), everyone.end(), std::size_t{0});
  const ShiftSpan all(references, everyone, filter_len);
  std::vector<ShiftSpan> own;
  own.reserve(n);
  for (std::size_t i = 0; i < n; ++i) own.emplace_back(references, std::vector<std::size_t>{i}, filter_len);

  // ratios[j][i]: estimate j against reference i.
  std::vector<std::vector<SourceRatios>> ratios(n, std::vector<SourceRatios>(n));
  for (std::size_t j = 0; j < n; ++j) {
    const auto projected = all.project(estimates[j]);
    for (std::size_t i = 0; i < n; ++i) {
      ratios[j][i] = energy_ratios(split(estimates[j], projected, own[i].project(estimates[j])));
    }
  }

  std::vector<std::size_t> perm = everyone, best = everyone;
  double best_sir = -std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) total += ratios[j][perm[j]].sir;
    if (total > best_sir) {
      best_sir = total;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  BssScore out;
  out.permutation = best;
  for (std::size_t j = 0; j < n; ++j) {
    const SourceRatios& r = ratios[j][best[j]];
    out.sdr.push_back(r.sdr);
    out.sir.push_back(r.sir);
    out.sar.push_back(r.sar);
  }
  return out;
}

std::vector<ScoreRow> score_rows(const BssScore& s, const std::string& scene_id,
                                 const std::string& method) {
  std::vector<ScoreRow> rows(s.permutation.size());
  for (std::size_t j = 0; j < s.permutation.size(); ++j) {
    ScoreRow& row = rows[s.permutation[j]];
    row.scene_id = scene_id;
    row.method = method;
    row.source = s.permutation[j];
    row.sdr = s.sdr[j];
    row.sir = s.sir[j];
    row.sar = s.sar[j];
  }
  return rows;
}

void write_scores_csv(const std::vector<ScoreRow>& rows,
                      const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "scene_id,method,source,sdr,sir,sar\n";
  out.precision(10);
  for (const auto& r : rows) {
    out << r.scene_id << ',' << r.method << ',' << r.source << ',' << r.sdr << ','
        << r.sir << ',' << r.sar << '\n';
  }
  if (!out) throw IoError("failed writing " + path.string());
}

void write_scores_json(const std::vector<ScoreRow>& rows,
                       const std::filesystem::path& path) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : rows) {
    j.push_back({{"scene_id", r.scene_id},
                 {"method", r.method},
                 {"source", r.source},
                 {"sdr", r.sdr},
                 {"sir", r.sir},
                 {"sar", r.sar}});
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(1) << '\n';
}

}  // namespace tensorscene
