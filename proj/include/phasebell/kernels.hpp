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

// Transition kernels in real (Minkowski) and imaginary (Euclidean) time.
//
// The free-particle kernels are evaluated in closed form. Kernels for a
// general potential are built by time slicing: N identical short-time
// factors, each the exact free kernel for step eps = T/N times the
// midpoint-rule potential weight, chained with dx-weighted matrix products.

#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <string>
#include <utility>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "phasebell/errors.hpp"
#include "phasebell/grid.hpp"

namespace phasebell {

struct Potential {
  std::function<double(double)> value;
  std::string label;

  double operator()(double x) const { return value(x); }

  static Potential free() {
    return {[](double) { return 0.0; }, "free"};
  }

  static Potential harmonic(double mass, double omega) {
    return {[=](double x) { return 0.5 * mass * omega * omega * x * x; }, "harmonic"};
  }
};

struct SlicingPlan {
  int n_slices = 2;
  double total_time = 1.0;
  Regime regime = Regime::Euclidean;

  double step() const { return total_time / n_slices; }

  /// A single slice is accepted here (it is the closed-form short-time
  /// kernel); operations that need interior slices ask for more.
  void validate(int min_slices = 1) const {
    detail::require(n_slices >= min_slices,
                    "SlicingPlan: n_slices must be >= " + std::to_string(min_slices));
    detail::require(std::isfinite(total_time) && total_time > 0.0,
                    "SlicingPlan: total_time must be > 0");
  }
};

namespace detail {

inline Eigen::MatrixXd displacement_squared(const Grid1D& g) {
  const auto n = g.size();
  Eigen::MatrixXd d2(n, n);
  for (Eigen::Index f = 0; f < n; ++f) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d = g.x(f) - g.x(i);
      d2(f, i) = d * d;
    }
  }
  return d2;
}

template <typename Matrix>
Matrix matrix_power(Matrix base, int exponent) {
  Matrix result = Matrix::Identity(base.rows(), base.cols());
  while (exponent > 0) {
    if (exponent & 1) result = result * base;
    exponent >>= 1;
    if (exponent > 0) base = base * base;
  }
  return result;
}

}  // namespace detail

/// sqrt(m / 2 pi i hbar T) exp(i m (x_f - x_i)^2 / 2 hbar T), principal
/// branch: sqrt(1/i) = exp(-i pi/4).
inline Kernel free_kernel_minkowski(const Grid1D& grid, double T, const PhysParams& params = {}) {
  params.validate();
  detail::require(std::isfinite(T) && T > 0.0, "free_kernel_minkowski: T must be > 0");
  const double m = params.mass;
  const double hbar = params.hbar;
  const cplx prefactor =
      std::sqrt(m / (2.0 * std::numbers::pi * hbar * T)) * std::polar(1.0, -std::numbers::pi / 4);
  const Eigen::MatrixXd d2 = detail::displacement_squared(grid);
  Eigen::MatrixXcd k = d2.unaryExpr([&](double s) {
    return prefactor * std::polar(1.0, m * s / (2.0 * hbar * T));
  });
  return {grid, std::move(k), T, Regime::Minkowski};
}

/// sqrt(m / 2 pi hbar T) exp(-m (x_f - x_i)^2 / 2 hbar T).
inline Kernel free_kernel_euclidean(const Grid1D& grid, double T, const PhysParams& params = {}) {
  params.validate();
  detail::require(std::isfinite(T) && T > 0.0, "free_kernel_euclidean: T must be > 0");
  const double m = params.mass;
  const double hbar = params.hbar;
  const double prefactor = std::sqrt(m / (2.0 * std::numbers::pi * hbar * T));
  const Eigen::MatrixXd d2 = detail::displacement_squared(grid);
  Eigen::MatrixXd k = (d2.array() * (-m / (2.0 * hbar * T))).exp() * prefactor;
  return {grid, k.cast<cplx>(), T, Regime::Euclidean};
}

inline Kernel free_kernel(const Grid1D& grid, double T, Regime regime,
                          const PhysParams& params = {}) {
  return regime == Regime::Minkowski ? free_kernel_minkowski(grid, T, params)
                                     : free_kernel_euclidean(grid, T, params);
}

/// K1 after K2: (K1 o K2)(x_f, x_i) = sum_y K1(x_f, y) K2(y, x_i) dy.
inline Kernel compose(const Kernel& later, const Kernel& earlier) {
  require_same_grid(later.grid(), earlier.grid(), "compose");
  detail::require(later.regime() == earlier.regime(), "compose: regime mismatch");
  Eigen::MatrixXcd m = later.entries() * earlier.entries() * later.grid().dx();
  if (later.regime() == Regime::Euclidean) {
    // Products of non-negative reals stay non-negative; drop rounding noise.
    m = m.real().cwiseMax(0.0).cast<cplx>();
  }
  return {later.grid(), std::move(m), later.time_extent() + earlier.time_extent(),
          later.regime()};
}

namespace detail {

/// One short-time factor including the dx quadrature weight:
///   dx sqrt(m/2 pi (i) hbar eps) exp(+-(1/hbar)[m dx^2/2eps -+ eps V(xbar)])
/// with xbar the midpoint of the step. Euclidean factors are real.
inline Eigen::MatrixXcd short_time_step(const Grid1D& grid, const Potential& v, const SlicingPlan& plan,
                                        const PhysParams& params) {
  params.validate();
  plan.validate();
  const double m = params.mass;
  const double hbar = params.hbar;
  const double eps = plan.step();
  const double dx = grid.dx();
  const auto n = grid.size();
  if (plan.regime == Regime::Minkowski) {
    // Below this step the sampled chirp aliases and the product of steps
    // grows without bound.
    const double limit = m * grid.extent() * dx / (2.0 * std::numbers::pi * hbar);
    require(eps >= limit, "sliced_kernel: Minkowski step " + std::to_string(eps) +
                              " is below the grid resolution limit m*extent*dx/(2*pi*hbar) = " +
                              std::to_string(limit));
  }

  Eigen::MatrixXd action(n, n);
  for (Eigen::Index f = 0; f < n; ++f) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d = grid.x(f) - grid.x(i);
      const double pot = eps * v(0.5 * (grid.x(f) + grid.x(i)));
      require(std::isfinite(pot), "sliced_kernel: potential is not finite on the grid");
      action(f, i) = plan.regime == Regime::Euclidean ? m * d * d / (2.0 * eps) + pot
                                                      : m * d * d / (2.0 * eps) - pot;
    }
  }
  const double modulus = std::sqrt(m / (2.0 * std::numbers::pi * hbar * eps)) * dx;
  if (plan.regime == Regime::Euclidean) {
    return ((action.array() * (-1.0 / hbar)).exp() * modulus).matrix().cast<cplx>();
  }
  const cplx prefactor = modulus * std::polar(1.0, -std::numbers::pi / 4);
  return action.unaryExpr([&](double s) { return prefactor * std::polar(1.0, s / hbar); });
}

}  // namespace detail

/// Time-sliced kernel: the N-fold dx-weighted product of the short-time
/// factor, divided by dx so that it is comparable to a closed-form kernel.
/// In real time the step must satisfy eps >= m (x_max - x_min) dx / (2 pi hbar).
inline Kernel sliced_kernel(const Grid1D& grid, const Potential& v, const SlicingPlan& plan,
                            const PhysParams& params = {}) {
  const Eigen::MatrixXcd step = detail::short_time_step(grid, v, plan, params);
  const double dx = grid.dx();
  if (plan.regime == Regime::Euclidean) {
    Eigen::MatrixXd total = detail::matrix_power(Eigen::MatrixXd(step.real()), plan.n_slices) / dx;
    total = total.cwiseMax(0.0);
    return {grid, total.cast<cplx>(), plan.total_time, Regime::Euclidean};
  }
  Eigen::MatrixXcd total = detail::matrix_power(step, plan.n_slices) / dx;
  return {grid, std::move(total), plan.total_time, Regime::Minkowski};
}

/// Same operator as apply_kernel(sliced_kernel(...), psi), applied one slice
/// at a time: N matrix-vector products instead of matrix products.
inline WaveFunction sliced_propagate(const WaveFunction& psi, const Potential& v, const SlicingPlan& plan) {
  const Eigen::MatrixXcd step = detail::short_time_step(psi.grid(), v, plan, psi.params());
  Eigen::VectorXcd amps = psi.amplitudes();
  for (int k = 0; k < plan.n_slices; ++k) amps = step * amps;
  return {psi.grid(), std::move(amps), psi.params()};
}

struct TransferSpectrum {
  double ground_energy;  // -hbar ln(lambda_0) / T
  double gap;            // hbar ln(lambda_0 / lambda_1) / T
};

/// Reads the two lowest energies off the dominant eigenvalues of the
/// Euclidean transfer matrix dx * K(T), lambda_k = exp(-E_k T / hbar).
inline TransferSpectrum transfer_spectrum(const Kernel& k, const PhysParams& params = {}) {
  detail::require(k.regime() == Regime::Euclidean,
                  "transfer_spectrum: needs a Euclidean kernel");
  detail::require(k.time_extent() > 0.0, "transfer_spectrum: kernel has no time extent");
  Eigen::MatrixXd t = k.entries().real() * k.grid().dx();
  t = 0.5 * (t + t.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();  // ascending
  const double l0 = ev[ev.size() - 1];
  const double l1 = ev[ev.size() - 2];
  if (!(l0 > 0.0) || !(l1 > 0.0)) {
    throw NumericalGuard("transfer-underflow", "dominant eigenvalues are not positive");
  }
  const double T = k.time_extent();
  return {-params.hbar * std::log(l0) / T, params.hbar * std::log(l0 / l1) / T};
}

/// Gaussian wavepackets pinning both ends of the sliced path integral:
/// psi_i(x_0) at the start and conj(psi_f(x_N)) at the end.
struct BoundaryPackets {
  double initial_centre = 0.0;
  double initial_width = 1.0;
  double initial_momentum = 0.0;
  double final_centre = 0.0;
  double final_width = 1.0;
  double final_momentum = 0.0;

  static BoundaryPackets centred_on(const Grid1D& g) {
    const double c = 0.5 * (g.x_min() + g.x_max());
    const double w = g.extent() / 20.0;
    return {c, w, 0.0, c, w, 0.0};
  }
};

/// Expectation of
///   x_j m (x_j - x_{j-1})/eps - m (x_{j+1} - x_j)/eps x_j
/// over the free-particle sliced path integral x_0..x_N, eps = T/N, with the
/// boundary packets as end-point weights. The weight is Gaussian in the path
/// variables, exp(-x^T A x / 2 + b^T x), so all second moments follow from
/// A^-1 and A^-1 b (analytically continued for the oscillatory case).
inline cplx commutator_expectation(const SlicingPlan& plan, const Grid1D& grid,
                                   const PhysParams& params, int j,
                                   const BoundaryPackets& ends) {
  params.validate();
  plan.validate(2);
  detail::require(j >= 1 && j <= plan.n_slices - 1,
                  "commutator_expectation: slice index must be in [1, N-1]");
  detail::require(ends.initial_width > 0.0 && ends.final_width > 0.0,
                  "commutator_expectation: packet widths must be > 0");
  for (auto [c, w] : {std::pair{ends.initial_centre, ends.initial_width},
                      std::pair{ends.final_centre, ends.final_width}}) {
    detail::require(c - 5.0 * w >= grid.x_min() && c + 5.0 * w <= grid.x_max(),
                    "commutator_expectation: boundary packet must sit 5 widths inside the grid");
  }

  const int n = plan.n_slices;
  const double m = params.mass;
  const double hbar = params.hbar;
  const double eps = plan.step();
  const cplx kinetic = plan.regime == Regime::Minkowski ? cplx(0.0, -m / (hbar * eps))
                                                        : cplx(m / (hbar * eps), 0.0);

  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n + 1, n + 1);
  for (int k = 0; k < n; ++k) {
    a(k, k) += kinetic;
    a(k + 1, k + 1) += kinetic;
    a(k, k + 1) -= kinetic;
    a(k + 1, k) -= kinetic;
  }
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(n + 1);
  const double wi2 = ends.initial_width * ends.initial_width;
  const double wf2 = ends.final_width * ends.final_width;
  a(0, 0) += 1.0 / wi2;
  b[0] += cplx(ends.initial_centre / wi2, ends.initial_momentum / hbar);
  a(n, n) += 1.0 / wf2;
  b[n] += cplx(ends.final_centre / wf2, -ends.final_momentum / hbar);

  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
  const Eigen::MatrixXcd cov = lu.inverse();
  const Eigen::VectorXcd mean = lu.solve(b);
  if (!cov.allFinite() || !mean.allFinite()) {
    throw NumericalGuard("gaussian-moments", "path precision matrix is singular");
  }
  auto second = [&](int r, int s) { return cov(r, s) + mean[r] * mean[s]; };
  return (m / eps) * (2.0 * second(j, j) - second(j, j - 1) - second(j, j + 1));
}

inline cplx commutator_expectation(const SlicingPlan& plan, const Grid1D& grid,
                                   const PhysParams& params, int j) {
  return commutator_expectation(plan, grid, params, j, BoundaryPackets::centred_on(grid));
}

}  // namespace phasebell
