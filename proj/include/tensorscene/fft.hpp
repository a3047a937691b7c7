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

#ifndef TENSORSCENE_FFT_HPP_
#define TENSORSCENE_FFT_HPP_

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace tensorscene {

// Real-input FFT of a fixed size backed by FFTW. Plans are created under a
// global lock; transform() itself is safe to call concurrently.
class RealFft {
 public:
  explicit RealFft(std::size_t size);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const { return size_; }

  // size() real samples -> size()/2 + 1 complex bins (unnormalized).
  void forward(std::span<const double> in,
               std::span<std::complex<double>> out) const;
  // size()/2 + 1 bins -> size() real samples, scaled by 1/size() so that
  // inverse(forward(x)) == x.
  void inverse(std::span<const std::complex<double>> in,
               std::span<double> out) const;

 private:
  std::size_t size_;
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
};

// Smallest power of two >= n.
std::size_t next_pow2(std::size_t n);

// Full linear convolution of a and b via FFT (length a + b - 1).
std::vector<double> fft_convolve(std::span<const double> a,
                                 std::span<const double> b);

// Linear cross-correlation r[lag] = sum_n a[n + lag] * b[n] for
// lag in [0, max_lag].
std::vector<double> cross_correlation(std::span<const double> a,
                                      std::span<const double> b,
                                      std::size_t max_lag);

}  // namespace tensorscene

#endif  // TENSORSCENE_FFT_HPP_
