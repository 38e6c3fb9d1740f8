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

// Uniform-grid wavefunctions and kernels.
//
// Integrals over x are sums with weight dx. Amplitudes are taken to vanish
// outside [x_min, x_max] (hard truncation), and callers keep wavepackets
// well inside the grid, so the trapezoid end corrections are zero and the
// quadrature reduces to the plain weighted sum.

#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "phasebell/errors.hpp"
#include "phasebell/fourier.hpp"

namespace phasebell {

using cplx = std::complex<double>;

struct PhysParams {
  double hbar = 1.0;
  double mass = 1.0;

  void validate() const {
    detail::require(std::isfinite(hbar) && hbar > 0.0, "PhysParams: hbar must be > 0");
    detail::require(std::isfinite(mass) && mass > 0.0, "PhysParams: mass must be > 0");
  }

  friend bool operator==(const PhysParams&, const PhysParams&) = default;
};

class Grid1D {
 public:
  static constexpr Eigen::Index kMinPoints = 8;

  Grid1D(double x_min, double x_max, Eigen::Index n_points)
      : x_min_(x_min), x_max_(x_max), n_(n_points) {
    detail::require(std::isfinite(x_min) && std::isfinite(x_max) && x_max > x_min,
                    "Grid1D: require x_max > x_min");
    detail::require(n_points >= kMinPoints, "Grid1D: n_points must be >= 8");
  }

  /// Symmetric grid [-half_width, half_width].
  static Grid1D symmetric(double half_width, Eigen::Index n_points) {
    return {-half_width, half_width, n_points};
  }

  /// Periodic-style grid [-half_width, half_width) with x = 0 at index n/2,
  /// so that the origin is a sample point in both x and its dual p grid.
  static Grid1D centred(double half_width, Eigen::Index n_points) {
    detail::require(n_points >= kMinPoints && n_points % 2 == 0,
                    "Grid1D::centred: n_points must be even and >= 8");
    return {-half_width, half_width - 2.0 * half_width / static_cast<double>(n_points), n_points};
  }

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  Eigen::Index size() const { return n_; }
  double dx() const { return (x_max_ - x_min_) / static_cast<double>(n_ - 1); }
  double x(Eigen::Index j) const { return x_min_ + static_cast<double>(j) * dx(); }
  double extent() const { return x_max_ - x_min_; }

  Eigen::VectorXd points() const {
    Eigen::VectorXd out(n_);
    for (Eigen::Index j = 0; j < n_; ++j) out[j] = x(j);
    return out;
  }

  /// The momentum grid paired with this grid by the discrete transform.
  Grid1D dual(double hbar) const {
    const double dp = fourier::momentum_step(n_, dx(), hbar);
    const auto c = static_cast<double>(fourier::centre_index(n_));
    return {-c * dp, (static_cast<double>(n_ - 1) - c) * dp, n_};
  }

  bool same_as(const Grid1D& other) const {
    const double tol = 1e-12 * std::max(1.0, std::abs(x_max_ - x_min_));
    return n_ == other.n_ && std::abs(x_min_ - other.x_min_) <= tol &&
           std::abs(x_max_ - other.x_max_) <= tol;
  }

 private:
  double x_min_;
  double x_max_;
  Eigen::Index n_;
};

inline void require_same_grid(const Grid1D& a, const Grid1D& b, const char* where) {
  if (!a.same_as(b)) throw InvalidArgument(std::string(where) + ": grid mismatch");
}

class WaveFunction {
 public:
  WaveFunction(Grid1D grid, Eigen::VectorXcd amplitudes, PhysParams params = {})
      : grid_(grid), amplitudes_(std::move(amplitudes)), params_(params) {
    params_.validate();
    detail::require(amplitudes_.size() == grid_.size(),
                    "WaveFunction: amplitude count must equal grid size");
    detail::require(amplitudes_.allFinite(), "WaveFunction: non-finite amplitude");
  }

  /// Samples f(x) on the grid.
  static WaveFunction sample(Grid1D grid, const std::function<cplx(double)>& f,
                             PhysParams params = {}) {
    Eigen::VectorXcd amps(grid.size());
    for (Eigen::Index j = 0; j < grid.size(); ++j) amps[j] = f(grid.x(j));
    return {grid, std::move(amps), params};
  }

  const Grid1D& grid() const { return grid_; }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  const PhysParams& params() const { return params_; }
  Eigen::Index size() const { return amplitudes_.size(); }
  cplx operator[](Eigen::Index j) const { return amplitudes_[j]; }

  double norm_squared() const { return amplitudes_.squaredNorm() * grid_.dx(); }

  WaveFunction normalized() const {
    const double n2 = norm_squared();
    detail::require(n2 > 0.0, "WaveFunction: cannot normalize a zero state");
    return {grid_, amplitudes_ / std::sqrt(n2), params_};
  }

  bool is_normalized(double tol = 1e-8) const { return std::abs(norm_squared() - 1.0) <= tol; }

 private:
  Grid1D grid_;
  Eigen::VectorXcd amplitudes_;
  PhysParams params_;
};

enum class Regime { Minkowski, Euclidean };

inline const char* to_string(Regime r) {
  return r == Regime::Minkowski ? "minkowski" : "euclidean";
}

/// Dense matrix representation of K(x_f, T; x_i, 0); rows index x_f.
class Kernel {
 public:
  Kernel(Grid1D grid, Eigen::MatrixXcd entries, double time_extent, Regime regime)
      : grid_(grid), entries_(std::move(entries)), time_extent_(time_extent), regime_(regime) {
    detail::require(entries_.rows() == grid_.size() && entries_.cols() == grid_.size(),
                    "Kernel: entries must be n_points x n_points");
    detail::require(entries_.allFinite(), "Kernel: non-finite entry");
    if (regime_ == Regime::Euclidean) {
      const bool real_non_negative = (entries_.array().imag() == 0.0).all() &&
                                     (entries_.array().real() >= 0.0).all();
      detail::require(real_non_negative, "Kernel: Euclidean entries must be real and >= 0");
    }
  }

  /// Kronecker delta over dx: the identity under `apply_kernel`.
  static Kernel identity(Grid1D grid, Regime regime = Regime::Minkowski) {
    const auto n = grid.size();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(n, n) / grid.dx();
    return {grid, std::move(m), 0.0, regime};
  }

  const Grid1D& grid() const { return grid_; }
  const Eigen::MatrixXcd& entries() const { return entries_; }
  double time_extent() const { return time_extent_; }
  Regime regime() const { return regime_; }
  cplx operator()(Eigen::Index f, Eigen::Index i) const { return entries_(f, i); }

 private:
  Grid1D grid_;
  Eigen::MatrixXcd entries_;
  double time_extent_;
  Regime regime_;
};

/// psi'(x_f) = sum_i K(x_f, x_i) psi(x_i) dx.
inline WaveFunction apply_kernel(const Kernel& k, const WaveFunction& psi) {
  require_same_grid(k.grid(), psi.grid(), "apply_kernel");
  Eigen::VectorXcd out = (k.entries() * psi.amplitudes()) * psi.grid().dx();
  return {psi.grid(), std::move(out), psi.params()};
}

/// <phi|psi> = sum conj(phi_j) psi_j dx.
inline cplx inner_product(const WaveFunction& phi, const WaveFunction& psi) {
  require_same_grid(phi.grid(), psi.grid(), "inner_product");
  return phi.amplitudes().dot(psi.amplitudes()) * phi.grid().dx();
}

/// Unitary transform onto the dual momentum grid. The returned WaveFunction
/// is indexed by p; its grid spacing is dp.
inline WaveFunction momentum_representation(const WaveFunction& psi) {
  const auto& g = psi.grid();
  const double hbar = psi.params().hbar;
  return {g.dual(hbar), fourier::to_momentum(psi.amplitudes(), g.x_min(), g.dx(), hbar),
          psi.params()};
}

/// Inverse of `momentum_representation`, given the position grid to land on.
inline WaveFunction position_representation(const WaveFunction& phi, const Grid1D& x_grid) {
  const double hbar = phi.params().hbar;
  require_same_grid(phi.grid(), x_grid.dual(hbar), "position_representation");
  return {x_grid, fourier::to_position(phi.amplitudes(), x_grid.x_min(), x_grid.dx(), hbar),
          phi.params()};
}

// Common states. `width` is sigma in psi ~ exp(-(x - x0)^2 / (2 sigma^2)),
// i.e. |psi|^2 has standard deviation sigma / sqrt(2).

inline WaveFunction gaussian_packet(const Grid1D& grid, double centre, double width,
                                    double momentum = 0.0, PhysParams params = {}) {
  detail::require(width > 0.0, "gaussian_packet: width must be > 0");
  const double norm = std::pow(std::numbers::pi * width * width, -0.25);
  const double hbar = params.hbar;
  return WaveFunction::sample(
      grid,
      [=](double x) {
        const double u = (x - centre) / width;
        return norm * std::exp(-0.5 * u * u) * std::polar(1.0, momentum * x / hbar);
      },
      params);
}

/// exp(-(x-a)^2/2w^2) + sign * exp(-(x+a)^2/2w^2), normalized on the grid.
inline WaveFunction cat_state(const Grid1D& grid, double separation, double width, int sign,
                              PhysParams params = {}) {
  detail::require(width > 0.0, "cat_state: width must be > 0");
  detail::require(sign == 1 || sign == -1, "cat_state: sign must be +1 or -1");
  return WaveFunction::sample(
                grid,
                [=](double x) {
                  const double l = (x - separation) / width;
                  const double r = (x + separation) / width;
                  return cplx(std::exp(-0.5 * l * l) + sign * std::exp(-0.5 * r * r), 0.0);
                },
                params)
      .normalized();
}

}  // namespace phasebell
