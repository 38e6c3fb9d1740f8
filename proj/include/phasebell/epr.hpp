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

// Two free particles on a shared 1-D grid, prepared perfectly correlated in
// position up to a finite width s (hence anti-correlated in momentum).

#pragma once

#include <cmath>
#include <ostream>

#include <Eigen/Dense>

#include "phasebell/csv.hpp"
#include "phasebell/errors.hpp"
#include "phasebell/fourier.hpp"
#include "phasebell/grid.hpp"
#include "phasebell/kernels.hpp"

namespace phasebell {

/// psi(x, y): rows index particle 1 (x), columns particle 2 (y).
class PairWaveFunction {
 public:
  PairWaveFunction(Grid1D grid, Eigen::MatrixXcd amplitudes, PhysParams params = {})
      : grid_(grid), amplitudes_(std::move(amplitudes)), params_(params) {
    params_.validate();
    detail::require(amplitudes_.rows() == grid_.size() && amplitudes_.cols() == grid_.size(),
                    "PairWaveFunction: amplitudes must be n_points x n_points");
    detail::require(amplitudes_.allFinite(), "PairWaveFunction: non-finite amplitude");
  }

  static PairWaveFunction product(const WaveFunction& a, const WaveFunction& b) {
    require_same_grid(a.grid(), b.grid(), "PairWaveFunction::product");
    Eigen::MatrixXcd m = a.amplitudes() * b.amplitudes().transpose();
    return {a.grid(), std::move(m), a.params()};
  }

  const Grid1D& grid() const { return grid_; }
  const Eigen::MatrixXcd& amplitudes() const { return amplitudes_; }
  const PhysParams& params() const { return params_; }

  double norm_squared() const { return amplitudes_.squaredNorm() * grid_.dx() * grid_.dx(); }

  PairWaveFunction normalized() const {
    const double n2 = norm_squared();
    detail::require(n2 > 0.0, "PairWaveFunction: cannot normalize a zero state");
    return {grid_, amplitudes_ / std::sqrt(n2), params_};
  }

 private:
  Grid1D grid_;
  Eigen::MatrixXcd amplitudes_;
  PhysParams params_;
};

/// Regularized delta(x - y) correlation:
///   psi(x, y) ~ exp(-(x - y)^2 / 4 s^2) exp(-(x + y)^2 / 16 E^2)
/// so x - y has variance s^2 and the centre of mass (x + y)/2 has variance E^2.
inline PairWaveFunction epr_initial_pair(const Grid1D& grid, double correlation_width,
                                         double envelope_width, const PhysParams& params = {}) {
  const double s = correlation_width;
  const double e = envelope_width;
  detail::require(s > 0.0 && e > 0.0, "epr_initial_pair: widths must be > 0");
  detail::require(s < e, "epr_initial_pair: correlation width must be below the envelope width");
  const auto n = grid.size();
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double d = grid.x(i) - grid.x(j);
      const double c = grid.x(i) + grid.x(j);
      m(i, j) = std::exp(-d * d / (4.0 * s * s) - c * c / (16.0 * e * e));
    }
  }
  return PairWaveFunction(grid, std::move(m), params).normalized();
}

namespace detail {

inline Eigen::MatrixXcd transform_rows_and_cols(const Eigen::MatrixXcd& in, const Grid1D& g, double hbar,
                                                bool to_momentum, bool along_x, bool along_y) {
  Eigen::MatrixXcd m = in;
  auto apply = [&](const Eigen::VectorXcd& v) -> Eigen::VectorXcd {
    return to_momentum ? fourier::to_momentum(v, g.x_min(), g.dx(), hbar)
                       : fourier::to_position(v, g.x_min(), g.dx(), hbar);
  };
  if (along_x) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m.col(c) = apply(m.col(c));
  }
  if (along_y) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) m.row(r) = apply(m.row(r).transpose()).transpose();
  }
  return m;
}

inline void guard_edges(const Eigen::MatrixXcd& m) {
  const Eigen::Index n = m.rows();
  const Eigen::Index band = std::max<Eigen::Index>(2, n / 32);
  const double total = m.squaredNorm();
  const double edge = m.topRows(band).squaredNorm() + m.bottomRows(band).squaredNorm() +
                      m.leftCols(band).squaredNorm() + m.rightCols(band).squaredNorm();
  if (edge > 1e-8 * total) {
    throw NumericalGuard("grid-escape", "pair wavefunction reaches the grid boundary");
  }
}

}  // namespace detail

/// Joint momentum amplitude phi(p_x, p_y) on the dual grid of both axes.
inline Eigen::MatrixXcd joint_momentum_amplitude(const PairWaveFunction& psi) {
  return detail::transform_rows_and_cols(psi.amplitudes(), psi.grid(), psi.params().hbar, true, true, true);
}

/// |phi(p_x, p_y)|^2; sums to one with weight dp^2 for a normalized pair.
inline Eigen::MatrixXd joint_momentum_distribution(const PairWaveFunction& psi) {
  return joint_momentum_amplitude(psi).cwiseAbs2();
}

/// Applies a single-particle kernel to one tensor slot (0: x, 1: y).
inline PairWaveFunction evolve_axis(const PairWaveFunction& psi, const Kernel& k, int axis) {
  require_same_grid(psi.grid(), k.grid(), "evolve_axis");
  detail::require(axis == 0 || axis == 1, "evolve_axis: axis must be 0 or 1");
  const double dx = psi.grid().dx();
  Eigen::MatrixXcd m = axis == 0 ? Eigen::MatrixXcd(k.entries() * psi.amplitudes() * dx)
                                 : Eigen::MatrixXcd(psi.amplitudes() * k.entries().transpose() * dx);
  return {psi.grid(), std::move(m), psi.params()};
}

/// Free propagation of both particles for time T. The path integral
/// factorizes, so the single-particle kernel acts on each slot independently.
/// Euclidean results are returned unnormalized.
inline PairWaveFunction evolve_pair(const PairWaveFunction& psi, double T, Regime regime) {
  detail::require(std::isfinite(T) && T > 0.0, "evolve_pair: T must be > 0");
  const Kernel k = free_kernel(psi.grid(), T, regime, psi.params());
  PairWaveFunction out = evolve_axis(evolve_axis(psi, k, 0), k, 1);
  detail::guard_edges(out.amplitudes());
  return out;
}

/// Pearson correlation of (p_x, p_y) under |phi|^2.
inline double momentum_anticorrelation(const PairWaveFunction& psi) {
  const Eigen::MatrixXd prob = joint_momentum_distribution(psi);
  const Grid1D pg = psi.grid().dual(psi.params().hbar);
  const double total = prob.sum();
  detail::require(total > 0.0, "momentum_anticorrelation: zero state");
  double mx = 0, my = 0;
  for (Eigen::Index i = 0; i < prob.rows(); ++i) {
    for (Eigen::Index j = 0; j < prob.cols(); ++j) {
      mx += prob(i, j) * pg.x(i);
      my += prob(i, j) * pg.x(j);
    }
  }
  mx /= total;
  my /= total;
  double vx = 0, vy = 0, cxy = 0;
  for (Eigen::Index i = 0; i < prob.rows(); ++i) {
    for (Eigen::Index j = 0; j < prob.cols(); ++j) {
      const double a = pg.x(i) - mx;
      const double b = pg.x(j) - my;
      vx += prob(i, j) * a * a;
      vy += prob(i, j) * b * b;
      cxy += prob(i, j) * a * b;
    }
  }
  if (!(vx > 0.0) || !(vy > 0.0)) {
    throw InvalidArgument("momentum_anticorrelation: degenerate momentum distribution");
  }
  return cxy / std::sqrt(vx * vy);
}

/// Keeps only the momentum components of one particle inside [p_lo, p_hi]
/// and renormalizes: the state after a momentum measurement on that slot.
inline PairWaveFunction condition_momentum(const PairWaveFunction& psi, int axis, double p_lo, double p_hi) {
  detail::require(axis == 0 || axis == 1, "condition_momentum: axis must be 0 or 1");
  detail::require(p_lo < p_hi, "condition_momentum: empty window");
  const auto& g = psi.grid();
  const double hbar = psi.params().hbar;
  const Grid1D pg = g.dual(hbar);
  Eigen::MatrixXcd m =
      detail::transform_rows_and_cols(psi.amplitudes(), g, hbar, true, axis == 0, axis == 1);
  for (Eigen::Index k = 0; k < pg.size(); ++k) {
    if (pg.x(k) >= p_lo && pg.x(k) <= p_hi) continue;
    if (axis == 0) {
      m.row(k).setZero();
    } else {
      m.col(k).setZero();
    }
  }
  m = detail::transform_rows_and_cols(m, g, hbar, false, axis == 0, axis == 1);
  PairWaveFunction out(g, std::move(m), psi.params());
  if (!(out.norm_squared() > 0.0)) {
    throw InvalidArgument("condition_momentum: window has zero probability");
  }
  return out.normalized();
}

/// Columns p_x, p_y, probability (density |phi|^2).
inline void write_joint_momentum(std::ostream& out, const PairWaveFunction& psi) {
  const Eigen::MatrixXd prob = joint_momentum_distribution(psi);
  const Grid1D pg = psi.grid().dual(psi.params().hbar);
  csv::Writer w(out);
  w.header({"p_x", "p_y", "probability"});
  for (Eigen::Index i = 0; i < prob.rows(); ++i) {
    for (Eigen::Index j = 0; j < prob.cols(); ++j) w.row(pg.x(i), pg.x(j), prob(i, j));
  }
}

}  // namespace phasebell
