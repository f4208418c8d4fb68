// Copyright 2026 The Kinoplan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef KINOPLAN_POLYNOMIAL_HPP
#define KINOPLAN_POLYNOMIAL_HPP

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

namespace kinoplan {

namespace detail {

// Eigenvalues of the companion matrix of `coeffs` in the variable x / scale.
template <typename Matrix>
void companion_eigenvalues(const std::vector<double>& coeffs, double scale,
                           std::vector<std::complex<double>>& out) {
  const int n = static_cast<int>(coeffs.size()) - 1;
  Matrix companion = Matrix::Zero(n, n);
  double sk = 1.0;
  for (int k = 1; k <= n; ++k) {
    sk *= scale;
    companion(0, k - 1) = -coeffs[k] / (coeffs[0] * sk);
  }
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  Eigen::EigenSolver<Matrix> solver(companion, false);
  out.clear();
  if (solver.info() != Eigen::Success) return;
  for (int i = 0; i < n; ++i) out.push_back(solver.eigenvalues()[i]);
}

}  // namespace detail

/// Horner evaluation; `c` holds coefficients from the highest degree down.
inline double polyval(std::span<const double> c, double x) {
  double y = 0.0;
  for (double ck : c) y = y * x + ck;
  return y;
}

inline double polyder_val(std::span<const double> c, double x) {
  double y = 0.0;
  const auto n = static_cast<int>(c.size()) - 1;
  for (int k = 0; k < n; ++k) y = y * x + c[k] * static_cast<double>(n - k);
  return y;
}

/// Strictly positive real roots of the polynomial with coefficients `c`
/// (highest degree first), ascending. Eigenvalues of a scaled companion
/// matrix, then Newton-polished.
inline std::vector<double> positive_real_roots(std::span<const double> c) {
  std::vector<double> coeffs(c.begin(), c.end());
  // leading zeros lower the degree; trailing zeros are roots at 0
  while (!coeffs.empty() && coeffs.front() == 0.0) coeffs.erase(coeffs.begin());
  while (!coeffs.empty() && coeffs.back() == 0.0) coeffs.pop_back();
  const int n = static_cast<int>(coeffs.size()) - 1;
  std::vector<double> roots;
  if (n < 1) return roots;
  std::vector<std::complex<double>> ev;

  // Fujiwara bound, used to scale the variable so roots sit near the unit circle
  double scale = 0.0;
  for (int k = 1; k <= n; ++k)
    scale = std::max(scale, std::pow(std::abs(coeffs[k] / coeffs[0]), 1.0 / k));
  if (!(scale > 0.0) || !std::isfinite(scale)) scale = 1.0;

  // the heuristic calls this per node with degree <= 6; keep that allocation-free
  if (n <= 8) {
    detail::companion_eigenvalues<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 8, 8>>(
        coeffs, scale, ev);
  } else {
    detail::companion_eigenvalues<Eigen::MatrixXd>(coeffs, scale, ev);
  }
  for (int i = 0; i < static_cast<int>(ev.size()); ++i) {
    const double re = ev[i].real();
    const double im = ev[i].imag();
    if (std::abs(im) > 1e-6 * std::max(1.0, std::abs(ev[i]))) continue;
    double x = re * scale;
    if (!(x > 0.0)) continue;
    for (int it = 0; it < 8; ++it) {
      const double d = polyder_val(coeffs, x);
      if (d == 0.0) break;
      const double step = polyval(coeffs, x) / d;
      const double next = x - step;
      if (!(next > 0.0) || !std::isfinite(next)) break;
      x = next;
      if (std::abs(step) <= 1e-15 * x) break;
    }
    roots.push_back(x);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace kinoplan

#endif  // KINOPLAN_POLYNOMIAL_HPP
