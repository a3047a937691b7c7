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

#ifndef TENSORSCENE_TENSOR3_HPP_
#define TENSORSCENE_TENSOR3_HPP_

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace tensorscene {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowMajorMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Dense order-3 tensor indexed (channel, frequency, frame). Storage is
// channel-major then frequency then frame, so each channel is a contiguous
// row-major F x T plane.
class Tensor3 {
 public:
  Tensor3() = default;
  Tensor3(std::size_t channels, std::size_t bins, std::size_t frames,
          double fill = 0.0)
      : channels_(channels),
        bins_(bins),
        frames_(frames),
        data_(channels * bins * frames, fill) {}

  std::size_t channels() const { return channels_; }
  std::size_t bins() const { return bins_; }
  std::size_t frames() const { return frames_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t c, std::size_t f, std::size_t t) {
    return data_[(c * bins_ + f) * frames_ + t];
  }
  double operator()(std::size_t c, std::size_t f, std::size_t t) const {
    return data_[(c * bins_ + f) * frames_ + t];
  }

  Eigen::Map<RowMajorMatrix> plane(std::size_t c) {
    return {data_.data() + c * bins_ * frames_,
            static_cast<Eigen::Index>(bins_),
            static_cast<Eigen::Index>(frames_)};
  }
  Eigen::Map<const RowMajorMatrix> plane(std::size_t c) const {
    return {data_.data() + c * bins_ * frames_,
            static_cast<Eigen::Index>(bins_),
            static_cast<Eigen::Index>(frames_)};
  }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool same_shape(const Tensor3& other) const {
    return channels_ == other.channels_ && bins_ == other.bins_ &&
           frames_ == other.frames_;
  }

 private:
  std::size_t channels_ = 0;
  std::size_t bins_ = 0;
  std::size_t frames_ = 0;
  std::vector<double> data_;
};

// Frame-major matricization: row t holds the tensor's frame t with column
// index c * F + f. Matches the row ordering of khatri_rao(D, W).
Matrix unfold_frames(const Tensor3& x);

// Inverse of unfold_frames for a given channel count.
Tensor3 fold_frames(const Matrix& x_flat, std::size_t channels);

}  // namespace tensorscene

#endif  // TENSORSCENE_TENSOR3_HPP_
