// Copyright 2026 The phasebell Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Discrete Fourier machinery shared by the position/momentum conversions,
// the Wigner transform and the spectral kinetic operator.
//
// Conventions. A grid of n points x_j = x_min + j*dx has the dual momentum
// grid p_k = (k - c)*dp, c = n/2 (integer division), dp = 2*pi*hbar/(n*dx),
// so p spans [-pi*hbar/dx, pi*hbar/dx). The physical transform is
//
//   phi(p_k) = dx / sqrt(2*pi*hbar) * sum_j psi(x_j) exp(-i p_k x_j / hbar)
//
// which is unitary in the sense sum |phi|^2 dp == sum |psi|^2 dx.

#pragma once

#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

namespace phasebell::fourier {

using cplx = std::complex<double>;

inline Eigen::Index centre_index(Eigen::Index n) { return n / 2; }

inline double momentum_step(Eigen::Index n, double dx, double hbar) {
  return 2.0 * std::numbers::pi * hbar / (static_cast<double>(n) * dx);
}

namespace detail {

inline std::vector<cplx> to_std(const Eigen::Ref<const Eigen::VectorXcd>& v) {
  return {v.data(), v.data() + v.size()};
}

inline Eigen::VectorXcd from_std(const std::vector<cplx>& v) {
  return Eigen::Map<const Eigen::VectorXcd>(v.data(),
                                            static_cast<Eigen::Index>(v.size()));
}

}  // namespace detail

/// Raw forward DFT: X_k = sum_j x_j exp(-2 pi i jk/n).
inline Eigen::VectorXcd fft(const Eigen::Ref<const Eigen::VectorXcd>& in) {
  Eigen::FFT<double> engine;
  std::vector<cplx> src = detail::to_std(in);
  std::vector<cplx> dst;
  engine.fwd(dst, src);
  return detail::from_std(dst);
}

/// Raw inverse DFT including the 1/n factor.
inline Eigen::VectorXcd ifft(const Eigen::Ref<const Eigen::VectorXcd>& in) {
  Eigen::FFT<double> engine;
  std::vector<cplx> src = detail::to_std(in);
  std::vector<cplx> dst;
  engine.inv(dst, src);
  return detail::from_std(dst);
}

/// Position samples -> momentum amplitudes on the dual grid.
inline Eigen::VectorXcd to_momentum(const Eigen::Ref<const Eigen::VectorXcd>& psi,
                                    double x_min, double dx, double hbar) {
  const Eigen::Index n = psi.size();
  const Eigen::Index c = centre_index(n);
  const double dp = momentum_step(n, dx, hbar);
  const double two_pi = 2.0 * std::numbers::pi;

  Eigen::VectorXcd modulated(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double angle = two_pi * static_cast<double>(c * j % n) / static_cast<double>(n);
    modulated[j] = psi[j] * std::polar(1.0, angle);
  }
  Eigen::VectorXcd spectrum = fft(modulated);
  const double scale = dx / std::sqrt(two_pi * hbar);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double p = static_cast<double>(k - c) * dp;
    spectrum[k] *= scale * std::polar(1.0, -p * x_min / hbar);
  }
  return spectrum;
}

/// Inverse of `to_momentum`.
inline Eigen::VectorXcd to_position(const Eigen::Ref<const Eigen::VectorXcd>& phi,
                                    double x_min, double dx, double hbar) {
  const Eigen::Index n = phi.size();
  const Eigen::Index c = centre_index(n);
  const double dp = momentum_step(n, dx, hbar);
  const double two_pi = 2.0 * std::numbers::pi;

  Eigen::VectorXcd shifted(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double p = static_cast<double>(k - c) * dp;
    shifted[k] = phi[k] * std::polar(1.0, p * x_min / hbar);
  }
  Eigen::VectorXcd out = ifft(shifted);
  const double scale = static_cast<double>(n) * dp / std::sqrt(two_pi * hbar);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double angle = two_pi * static_cast<double>(c * j % n) / static_cast<double>(n);
    out[j] *= scale * std::polar(1.0, -angle);
  }
  return out;
}

/// Band-limited interpolation onto the half-step grid: returns 2n samples at
/// x_min + m*dx/2. The signal is treated as n-periodic, so samples are
/// expected to vanish at the grid edges.
inline Eigen::VectorXcd upsample2(const Eigen::Ref<const Eigen::VectorXcd>& v) {
  const Eigen::Index n = v.size();
  Eigen::VectorXcd spec = fft(v);
  Eigen::VectorXcd padded = Eigen::VectorXcd::Zero(2 * n);
  const Eigen::Index half = n / 2;
  if (n % 2 == 0) {
    for (Eigen::Index k = 0; k < half; ++k) padded[k] = spec[k];
    for (Eigen::Index k = half + 1; k < n; ++k) padded[k + n] = spec[k];
    padded[half] = 0.5 * spec[half];
    padded[half + n] = 0.5 * spec[half];
  } else {
    for (Eigen::Index k = 0; k <= half; ++k) padded[k] = spec[k];
    for (Eigen::Index k = half + 1; k < n; ++k) padded[k + n] = spec[k];
  }
  return 2.0 * ifft(padded);
}

/// Two-dimensional version of `upsample2`, applied along both indices.
inline Eigen::MatrixXcd upsample2_2d(const Eigen::MatrixXcd& m) {
  const Eigen::Index rows = m.rows();
  const Eigen::Index cols = m.cols();
  Eigen::MatrixXcd tall(2 * rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) tall.col(c) = upsample2(Eigen::VectorXcd(m.col(c)));
  Eigen::MatrixXcd out(2 * rows, 2 * cols);
  for (Eigen::Index r = 0; r < 2 * rows; ++r) {
    Eigen::VectorXcd row = tall.row(r).transpose();
    out.row(r) = upsample2(row).transpose();
  }
  return out;
}

}  // namespace phasebell::fourier
