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

// Density-matrix dynamics on a grid.
//
// Matrices are expressed in the orthonormal grid basis e_j = delta_j / sqrt(dx),
// so a pure state has entries psi_j conj(psi_l) dx and unit trace. All
// exponentials go through one dense Hermitian eigendecomposition of H.

#pragma once

#include <cmath>
#include <limits>
#include <ostream>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "phasebell/csv.hpp"
#include "phasebell/errors.hpp"
#include "phasebell/grid.hpp"
#include "phasebell/kernels.hpp"
#include "phasebell/phase_space.hpp"

namespace phasebell {

class DensityMatrix {
 public:
  /// Takes entries as given. The similarity-form Euclidean map produces
  /// non-Hermitian results, so the constructor only checks shape and
  /// finiteness; `validate()` checks the full density-matrix contract.
  DensityMatrix(Grid1D grid, Eigen::MatrixXcd entries, PhysParams params = {})
      : grid_(grid), entries_(std::move(entries)), params_(params) {
    params_.validate();
    detail::require(entries_.rows() == grid_.size() && entries_.cols() == grid_.size(),
                    "DensityMatrix: entries must be n_points x n_points");
    detail::require(entries_.allFinite(), "DensityMatrix: non-finite entry");
  }

  static DensityMatrix pure(const WaveFunction& psi) {
    Eigen::MatrixXcd m = psi.amplitudes() * psi.amplitudes().adjoint() * psi.grid().dx();
    return {psi.grid(), std::move(m), psi.params()};
  }

  /// sum_k w_k |psi_k><psi_k| with non-negative weights, normalized to unit trace.
  static DensityMatrix mixture(std::span<const WaveFunction> states, std::span<const double> weights) {
    detail::require(!states.empty() && states.size() == weights.size(),
                    "DensityMatrix::mixture: need one weight per state");
    const auto& g = states.front().grid();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(g.size(), g.size());
    for (std::size_t k = 0; k < states.size(); ++k) {
      require_same_grid(g, states[k].grid(), "DensityMatrix::mixture");
      detail::require(weights[k] >= 0.0, "DensityMatrix::mixture: weights must be >= 0");
      m += weights[k] * pure(states[k].normalized()).entries();
    }
    DensityMatrix out(g, std::move(m), states.front().params());
    return out.normalized();
  }

  const Grid1D& grid() const { return grid_; }
  const Eigen::MatrixXcd& entries() const { return entries_; }
  const PhysParams& params() const { return params_; }

  cplx trace() const { return entries_.trace(); }
  double purity() const { return (entries_ * entries_).trace().real(); }

  DensityMatrix normalized() const {
    const cplx t = trace();
    detail::require(std::abs(t) > 0.0, "DensityMatrix: zero trace");
    return {grid_, entries_ / t, params_};
  }

  double hermiticity_defect() const { return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff(); }

  Eigen::VectorXd eigenvalues() const {
    Eigen::MatrixXcd h = 0.5 * (entries_ + entries_.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
  }

  /// Hermitian within 1e-10, unit trace within 1e-10, spectrum >= -1e-8.
  void validate() const {
    detail::require(hermiticity_defect() <= 1e-10, "DensityMatrix: not Hermitian");
    detail::require(std::abs(trace() - 1.0) <= 1e-10, "DensityMatrix: trace is not 1");
    detail::require(eigenvalues().minCoeff() >= -1e-8, "DensityMatrix: not positive semidefinite");
  }

 private:
  Grid1D grid_;
  Eigen::MatrixXcd entries_;
  PhysParams params_;
};

class Hamiltonian {
 public:
  Hamiltonian(Grid1D grid, Eigen::MatrixXcd entries, PhysParams params = {})
      : grid_(grid), entries_(std::move(entries)), params_(params) {
    params_.validate();
    detail::require(entries_.rows() == grid_.size() && entries_.cols() == grid_.size(),
                    "Hamiltonian: entries must be n_points x n_points");
    detail::require(entries_.allFinite(), "Hamiltonian: non-finite entry");
    const double scale = std::max(1.0, entries_.cwiseAbs().maxCoeff());
    detail::require((entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * scale,
                    "Hamiltonian: not Hermitian");
  }

  /// p^2/2m applied spectrally (exact on the dual momentum grid, periodic in
  /// x) plus the diagonal potential.
  static Hamiltonian kinetic_plus(const Grid1D& grid, const Potential& v, const PhysParams& params = {}) {
    params.validate();
    const Eigen::Index n = grid.size();
    const Eigen::Index c = fourier::centre_index(n);
    const double dp = fourier::momentum_step(n, grid.dx(), params.hbar);
    const double two_pi = 2.0 * std::numbers::pi;

    // The kinetic matrix depends only on (j - l) mod n.
    Eigen::VectorXcd by_offset(n);
    for (Eigen::Index d = 0; d < n; ++d) {
      cplx acc = 0.0;
      for (Eigen::Index k = 0; k < n; ++k) {
        const double p = static_cast<double>(k - c) * dp;
        acc += p * p / (2.0 * params.mass) *
               std::polar(1.0, two_pi * static_cast<double>(((k - c) * d) % n) / static_cast<double>(n));
      }
      by_offset[d] = acc / static_cast<double>(n);
    }
    Eigen::MatrixXcd h(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index l = 0; l < n; ++l) h(j, l) = by_offset[((j - l) % n + n) % n];
    }
    h = 0.5 * (h + h.adjoint()).eval();
    for (Eigen::Index j = 0; j < n; ++j) h(j, j) += v(grid.x(j));
    return {grid, std::move(h), params};
  }

  static Hamiltonian free(const Grid1D& grid, const PhysParams& params = {}) {
    return kinetic_plus(grid, Potential::free(), params);
  }

  const Grid1D& grid() const { return grid_; }
  const Eigen::MatrixXcd& entries() const { return entries_; }
  const PhysParams& params() const { return params_; }

 private:
  Grid1D grid_;
  Eigen::MatrixXcd entries_;
  PhysParams params_;
};

/// Eigendecomposition of a Hamiltonian, reused across many evolution times.
class Spectrum {
 public:
  explicit Spectrum(const Hamiltonian& h) : grid_(h.grid()), params_(h.params()) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.entries());
    if (es.info() != Eigen::Success) {
      throw NumericalGuard("eigendecomposition", "Hermitian solver did not converge");
    }
    energies_ = es.eigenvalues();
    basis_ = es.eigenvectors();
  }

  const Grid1D& grid() const { return grid_; }
  const PhysParams& params() const { return params_; }
  const Eigen::VectorXd& energies() const { return energies_; }
  const Eigen::MatrixXcd& basis() const { return basis_; }
  double gap() const { return energies_[1] - energies_[0]; }
  Eigen::VectorXcd ground_state() const { return basis_.col(0); }

  Eigen::MatrixXcd to_eigenbasis(const Eigen::MatrixXcd& m) const { return basis_.adjoint() * m * basis_; }
  Eigen::MatrixXcd from_eigenbasis(const Eigen::MatrixXcd& m) const { return basis_ * m * basis_.adjoint(); }

 private:
  Grid1D grid_;
  PhysParams params_;
  Eigen::VectorXd energies_;
  Eigen::MatrixXcd basis_;
};

enum class EuclideanConvention {
  Similarity,  // e^{-H tau/hbar} rho e^{+H tau/hbar}, trace preserving
  Symmetric,   // e^{-H tau/hbar} rho e^{-H tau/hbar}, renormalized
};

inline const char* to_string(EuclideanConvention c) {
  return c == EuclideanConvention::Similarity ? "similarity" : "symmetric";
}

/// rho(t) = e^{-iHt/hbar} rho e^{+iHt/hbar}.
inline DensityMatrix evolve_density_minkowski(const DensityMatrix& rho, const Spectrum& h, double t) {
  require_same_grid(rho.grid(), h.grid(), "evolve_density_minkowski");
  const double hbar = h.params().hbar;
  const auto& e = h.energies();
  Eigen::MatrixXcd m = h.to_eigenbasis(rho.entries());
  for (Eigen::Index a = 0; a < m.rows(); ++a) {
    for (Eigen::Index b = 0; b < m.cols(); ++b) m(a, b) *= std::polar(1.0, -(e[a] - e[b]) * t / hbar);
  }
  return {rho.grid(), h.from_eigenbasis(m), rho.params()};
}

inline DensityMatrix evolve_density_minkowski(const DensityMatrix& rho, const Hamiltonian& h, double t) {
  return evolve_density_minkowski(rho, Spectrum(h), t);
}

struct EuclideanStep {
  DensityMatrix rho;
  double trace_raw;  // trace before renormalization (Symmetric); 1 for Similarity
};

inline EuclideanStep evolve_density_euclidean_detailed(const DensityMatrix& rho, const Spectrum& h,
                                                       double tau, EuclideanConvention convention) {
  require_same_grid(rho.grid(), h.grid(), "evolve_density_euclidean");
  const double hbar = h.params().hbar;
  const auto& e = h.energies();
  const double e0 = e[0];
  Eigen::MatrixXcd m = h.to_eigenbasis(rho.entries());

  if (convention == EuclideanConvention::Similarity) {
    for (Eigen::Index a = 0; a < m.rows(); ++a) {
      for (Eigen::Index b = 0; b < m.cols(); ++b) {
        if (m(a, b) == 0.0) continue;
        m(a, b) *= std::exp(-(e[a] - e[b]) * tau / hbar);
      }
    }
    if (!m.allFinite()) {
      throw NumericalGuard("overflow", "similarity-form Euclidean evolution overflowed");
    }
    return {DensityMatrix(rho.grid(), h.from_eigenbasis(m), rho.params()), 1.0};
  }

  // Shift by the ground energy so the weights stay in range; the raw trace is
  // restored analytically.
  Eigen::VectorXd w(e.size());
  for (Eigen::Index a = 0; a < e.size(); ++a) w[a] = std::exp(-(e[a] - e0) * tau / hbar);
  m = w.asDiagonal() * m * w.asDiagonal();
  const double shifted_trace = m.trace().real();
  if (!(shifted_trace > 1e-300)) {
    throw NumericalGuard("trace-collapse", "Euclidean evolution annihilated the state");
  }
  const double trace_raw = shifted_trace * std::exp(-2.0 * e0 * tau / hbar);
  m /= shifted_trace;
  return {DensityMatrix(rho.grid(), h.from_eigenbasis(m), rho.params()), trace_raw};
}

inline DensityMatrix evolve_density_euclidean(const DensityMatrix& rho, const Spectrum& h, double tau,
                                              EuclideanConvention convention) {
  return evolve_density_euclidean_detailed(rho, h, tau, convention).rho;
}

inline DensityMatrix evolve_density_euclidean(const DensityMatrix& rho, const Hamiltonian& h, double tau,
                                              EuclideanConvention convention) {
  return evolve_density_euclidean(rho, Spectrum(h), tau, convention);
}

/// <g|rho|g> for a normalized grid-basis vector g.
inline double fidelity(const DensityMatrix& rho, const Eigen::VectorXcd& g) {
  return (g.adjoint() * rho.entries() * g)(0, 0).real();
}

/// W(x, p) = (2 pi hbar)^-1 int dy e^{i p y/hbar} rho(x - y/2, x + y/2).
inline WignerGrid wigner_transform(const DensityMatrix& rho, double* max_imag = nullptr) {
  detail::require(std::abs(rho.trace() - 1.0) <= 1e-6, "wigner_transform: trace must be 1");
  const Eigen::MatrixXcd fine = fourier::upsample2_2d(rho.entries());
  auto raw = detail::wigner_core(rho.grid(), rho.params(),
                                 [&](Eigen::Index a, Eigen::Index b) { return fine(a, b); });
  return detail::finish_wigner(rho.grid(), rho.params(), raw, max_imag);
}

/// Free-particle flow of the Wigner function: W(x, p; t) = W(x - p t/m, p; 0),
/// by linear interpolation along x. Rejects shears that would carry more
/// than 1e-6 of the |W| mass off the grid.
inline WignerGrid free_wigner_shear(const WignerGrid& w, double t, const PhysParams& params) {
  params.validate();
  const auto& xs = w.x_axis();
  const auto& ps = w.p_axis();
  const Eigen::Index nx = xs.size();
  const double dx = xs.dx();

  const double total = w.values().cwiseAbs().sum();
  double lost = 0.0;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(nx, ps.size());
  for (Eigen::Index k = 0; k < ps.size(); ++k) {
    const double shift = ps.x(k) * t / params.mass;
    for (Eigen::Index j = 0; j < nx; ++j) {
      const double dest = xs.x(j) + shift;
      if (dest < xs.x_min() - 0.5 * dx || dest > xs.x_max() + 0.5 * dx) lost += std::abs(w(j, k));
    }
    for (Eigen::Index j = 0; j < nx; ++j) {
      const double s = (xs.x(j) - shift - xs.x_min()) / dx;
      const double fl = std::floor(s);
      const auto i0 = static_cast<Eigen::Index>(fl);
      const double frac = s - fl;
      double v = 0.0;
      if (i0 >= 0 && i0 < nx) v += (1.0 - frac) * w(i0, k);
      if (i0 + 1 >= 0 && i0 + 1 < nx) v += frac * w(i0 + 1, k);
      out(j, k) = v;
    }
  }
  if (lost > 1e-6 * total) {
    throw NumericalGuard("grid-escape", "shear carries Wigner mass outside the x grid");
  }
  return {xs, ps, std::move(out), w.params()};
}

struct TrajectoryPoint {
  double tau;
  double f;
  double purity;
  double trace_raw;
};

/// Evolves rho0 to each sample time, Wigner-transforms and records the
/// negativity ratio. For the Minkowski regime the samples are real times and
/// `convention` is ignored.
inline std::vector<TrajectoryPoint> negativity_trajectory(const DensityMatrix& rho0, const Hamiltonian& h,
                                                          std::span<const double> samples, Regime regime,
                                                          EuclideanConvention convention) {
  for (std::size_t i = 1; i < samples.size(); ++i) {
    detail::require(samples[i] > samples[i - 1], "negativity_trajectory: samples must increase");
  }
  const Spectrum spec(h);
  std::vector<TrajectoryPoint> out;
  out.reserve(samples.size());
  for (double tau : samples) {
    DensityMatrix rho = rho0;
    double trace_raw = 1.0;
    if (regime == Regime::Minkowski) {
      rho = evolve_density_minkowski(rho0, spec, tau);
    } else {
      auto step = evolve_density_euclidean_detailed(rho0, spec, tau, convention);
      rho = std::move(step.rho);
      trace_raw = step.trace_raw;
    }
    const WignerGrid w = wigner_transform(rho);
    out.push_back({tau, negativity_ratio(w), rho.purity(), trace_raw});
  }
  return out;
}

/// Columns tau, f, purity, trace_raw.
inline void write_trajectory(std::ostream& out, std::span<const TrajectoryPoint> points) {
  csv::Writer w(out);
  w.header({"tau", "f", "purity", "trace_raw"});
  for (const auto& p : points) w.row(p.tau, p.f, p.purity, p.trace_raw);
}

}  // namespace phasebell
