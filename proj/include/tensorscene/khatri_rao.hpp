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

#ifndef TENSORSCENE_KHATRI_RAO_HPP_
#define TENSORSCENE_KHATRI_RAO_HPP_

#include "tensorscene/tensor3.hpp"

namespace tensorscene {

// Column-wise Kronecker product of a (P x K) and b (Q x K). Row p * Q + q of
// the result holds a(p, k) * b(q, k). Throws DimensionError when the column
// counts differ.
Matrix khatri_rao(const Matrix& a, const Matrix& b);

// Evaluates the PARAFAC sum x[c, f, t] = sum_k d(c, k) w(f, k) h(t, k)
// directly, without going through the matricized form.
Tensor3 parafac_tensor(const Matrix& d, const Matrix& w, const Matrix& h);

}  // namespace tensorscene

#endif  // TENSORSCENE_KHATRI_RAO_HPP_
