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

// Independent reference computations used as test oracles. Nothing here calls
// into the code paths being checked.

#ifndef TENSORSCENE_TESTS_ORACLES_HPP_
#define TENSORSCENE_TESTS_ORACLES_HPP_

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Matrix = Eigen::MatrixXd;

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index rows,
                            Eigen::Index cols, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = u(rng);
  }
  return m;
}

// Entry (p * Q + q, k) = a(p, k) * b(q, k), one scalar at a time.
inline Matrix khatri_rao(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols());
  for (Eigen::Index k = 0; k < a.cols(); ++k)
    for (Eigen::Index p = 0; p < a.rows(); ++p)
      for (Eigen::Index q = 0; q < b.rows(); ++q)
        out(p * b.rows() + q, k) = a(p, k) * b(q, k);
  return out;
}

inline double softplus(double x) { return std::log(1.0 + std::exp(x)); }

// H[m, k] = act(sum_{c,f} x[m, c*F + f] * enc_c(k, c) * enc_f(k, f)).
inline Matrix encode_loops(const Matrix& x, const Matrix& enc_c,
                           const Matrix& enc_f, bool relu) {
  const Eigen::Index channels = enc_c.cols(), bins = enc_f.cols();
  Matrix h(x.rows(), enc_c.rows());
  for (Eigen::Index m = 0; m < x.rows(); ++m) {
    for (Eigen::Index k = 0; k < enc_c.rows(); ++k) {
      double z = 0.0;
      for (Eigen::Index c = 0; c < channels; ++c)
        for (Eigen::Index f = 0; f < bins; ++f)
          z += x(m, c * bins + f) * enc_c(k, c) * enc_f(k, f);
      h(m, k) = relu ? std::max(z, 0.0) : softplus(z);
    }
  }
  return h;
}

// x[c, f, t] = sum_k d(c, k) w(f, k) h(t, k), returned as t x (c*F + f).
inline Matrix parafac_flat(const Matrix& d, const Matrix& w, const Matrix& h) {
  Matrix out(h.rows(), d.rows() * w.rows());
  for (Eigen::Index t = 0; t < h.rows(); ++t)
    for (Eigen::Index c = 0; c < d.rows(); ++c)
      for (Eigen::Index f = 0; f < w.rows(); ++f) {
        double acc = 0.0;
        for (Eigen::Index k = 0; k < d.cols(); ++k) acc += d(c, k) * w(f, k) * h(t, k);
        out(t, c * w.rows() + f) = acc;
      }
  return out;
}

inline double is_elementwise(double x, double y) { return x / y - std::log(x / y) - 1.0; }

// Central difference of f with respect to every entry of param.
inline Matrix finite_difference(Matrix& param, const std::function<double()>& f,
                                double step) {
  Matrix g(param.rows(), param.cols());
  for (Eigen::Index r = 0; r < param.rows(); ++r) {
    for (Eigen::Index c = 0; c < param.cols(); ++c) {
      const double saved = param(r, c);
      param(r, c) = saved + step;
      const double up = f();
      param(r, c) = saved - step;
      const double down = f();
      param(r, c) = saved;
      g(r, c) = (up - down) / (2.0 * step);
    }
  }
  return g;
}

// O(N^2) DFT of a real frame, bins 0..N/2.
inline std::vector<std::complex<double>> dft(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n / 2 + 1);
  for (std::size_t k = 0; k <= n / 2; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += x[i] * std::polar(1.0, -2.0 * std::numbers::pi * k * i / n);
    }
    out[k] = acc;
  }
  return out;
}

inline std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

// Least-squares projection of the zero-padded estimate onto the columns of
// an explicit design matrix of delayed references (dense QR). Small sizes only.
inline std::vector<double> project_onto_shifts(const std::vector<double>& estimate,
                                               const std::vector<std::vector<double>>& refs,
                                               std::size_t taps) {
  const std::size_t n = estimate.size() + taps - 1;
  Matrix design = Matrix::Zero(n, refs.size() * taps);
  for (std::size_t r = 0; r < refs.size(); ++r)
    for (std::size_t a = 0; a < taps; ++a)
      for (std::size_t i = 0; i < refs[r].size(); ++i) design(i + a, r * taps + a) = refs[r][i];
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
  for (std::size_t i = 0; i < estimate.size(); ++i) y(i) = estimate[i];
  const Eigen::VectorXd coef = design.colPivHouseholderQr().solve(y);
  const Eigen::VectorXd fit = design * coef;
  return {fit.data(), fit.data() + fit.size()};
}

}  // namespace oracle

#endif  // TENSORSCENE_TESTS_ORACLES_HPP_
