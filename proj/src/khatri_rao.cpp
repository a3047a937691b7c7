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

#include "tensorscene/khatri_rao.hpp"

#include <string>

#include "tensorscene/errors.hpp"

namespace tensorscene {

Matrix khatri_rao(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) {
    throw DimensionError("khatri_rao: column counts differ (" +
                         std::to_string(a.cols()) + " vs " +
                         std::to_string(b.cols()) + ")");
  }
  const Eigen::Index p_rows = a.rows();
  const Eigen::Index q_rows = b.rows();
  Matrix out(p_rows * q_rows, a.cols());
  for (Eigen::Index k = 0; k < a.cols(); ++k) {
    for (Eigen::Index p = 0; p < p_rows; ++p) {
      out.col(k).segment(p * q_rows, q_rows) = a(p, k) * b.col(k);
    }
  }
  return out;
}

Tensor3 parafac_tensor(const Matrix& d, const Matrix& w, const Matrix& h) {
  if (d.cols() != w.cols() || d.cols() != h.cols()) {
    throw DimensionError("parafac_tensor: factor column counts differ");
  }
  Tensor3 out(d.rows(), w.rows(), h.rows());
  for (Eigen::Index c = 0; c < d.rows(); ++c) {
    for (Eigen::Index f = 0; f < w.rows(); ++f) {
      for (Eigen::Index t = 0; t < h.rows(); ++t) {
        double acc = 0.0;
        for (Eigen::Index k = 0; k < d.cols(); ++k) {
          acc += d(c, k) * w(f, k) * h(t, k);
        }
        out(c, f, t) = acc;
      }
    }
  }
  return out;
}

}  // namespace tensorscene
