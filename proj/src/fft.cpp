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

#include "tensorscene/fft.hpp"

#include <algorithm>
#include <mutex>

#include <fftw3.h>

#include "tensorscene/errors.hpp"

namespace tensorscene {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

RealFft::RealFft(std::size_t size) : size_(size) {
  if (size == 0) throw ConfigError("RealFft: size must be positive");
  std::vector<double> real(size);
  std::vector<std::complex<double>> spec(size / 2 + 1);
  auto* spec_ptr = reinterpret_cast<fftw_complex*>(spec.data());
  const int n = static_cast<int>(size);
  std::lock_guard<std::mutex> lock(planner_mutex());
  forward_plan_ = fftw_plan_dft_r2c_1d(n, real.data(), spec_ptr,
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
  inverse_plan_ = fftw_plan_dft_c2r_1d(n, spec_ptr, real.data(),
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
}

RealFft::~RealFft() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

void RealFft::forward(std::span<const double> in,
                      std::span<std::complex<double>> out) const {
  if (in.size() != size_ || out.size() != size_ / 2 + 1) {
    throw DimensionError("RealFft::forward: buffer size mismatch");
  }
  // r2c leaves its input untouched with FFTW_ESTIMATE, but the API is not
  // const-qualified.
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_),
                       const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void RealFft::inverse(std::span<const std::complex<double>> in,
                      std::span<double> out) const {
  if (in.size() != size_ / 2 + 1 || out.size() != size_) {
    throw DimensionError("RealFft::inverse: buffer size mismatch");
  }
  // c2r overwrites its input.
  std::vector<std::complex<double>> scratch(in.begin(), in.end());
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_),
                       reinterpret_cast<fftw_complex*>(scratch.data()),
                       out.data());
  const double scale = 1.0 / static_cast<double>(size_);
  for (double& v : out) v *= scale;
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::vector<double> fft_convolve(std::span<const double> a,
                                 std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t out_len = a.size() + b.size() - 1;
  const std::size_t n = next_pow2(out_len);
  RealFft fft(n);
  std::vector<double> buf(n, 0.0);
  std::vector<std::complex<double>> fa(n / 2 + 1), fb(n / 2 + 1);
  std::copy(a.begin(), a.end(), buf.begin());
  fft.forward(buf, fa);
  std::fill(buf.begin(), buf.end(), 0.0);
  std::copy(b.begin(), b.end(), buf.begin());
  fft.forward(buf, fb);
  for (std::size_t i = 0; i < fa.size(); ++i) fa[i] *= fb[i];
  fft.inverse(fa, buf);
  buf.resize(out_len);
  return buf;
}

std::vector<double> cross_correlation(std::span<const double> a,
                                      std::span<const double> b,
                                      std::size_t max_lag) {
  const std::size_t n = next_pow2(a.size() + b.size() + max_lag);
  RealFft fft(n);
  std::vector<double> buf(n, 0.0);
  std::vector<std::complex<double>> fa(n / 2 + 1), fb(n / 2 + 1);
  std::copy(a.begin(), a.end(), buf.begin());
  fft.forward(buf, fa);
  std::fill(buf.begin(), buf.end(), 0.0);
  std::copy(b.begin(), b.end(), buf.begin());
  fft.forward(buf, fb);
  for (std::size_t i = 0; i < fa.size(); ++i) fa[i] *= std::conj(fb[i]);
  fft.inverse(fa, buf);
  buf.resize(max_lag + 1);
  return buf;
}

}  // namespace tensorscene
