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

// Wigner quasi-probability on the (x, p) rectangle.
//
//   W(x, p) = (2 pi hbar)^-1 int dy conj(psi)(x + y/2) exp(i p y / hbar) psi(x - y/2)
//
// normalized so that its integral over phase space is one. The half-step
// samples psi(x +- y/2) come from band-limited (zero-padded x2) interpolation,
// so y runs in steps of dx and p covers the full dual grid
// [-pi hbar/dx, pi hbar/dx).

#pragma once

#include <cmath>
#include <functional>
#include <ostream>

#include <Eigen/Dense>

#include "phasebell/csv.hpp"
#include "phasebell/errors.hpp"
#include "phasebell/fourier.hpp"
#include "phasebell/grid.hpp"

namespace phasebell {

class WignerGrid {
 public:
  /// values(j, k) = W(x_j, p_k).
  WignerGrid(Grid1D x_axis, Grid1D p_axis, Eigen::MatrixXd values, PhysParams params)
      : x_axis_(x_axis), p_axis_(p_axis), values_(std::move(values)), params_(params) {
    detail::require(values_.rows() == x_axis_.size() && values_.cols() == p_axis_.size(),
                    "WignerGrid: values must be n_x by n_p");
    detail::require(values_.allFinite(), "WignerGrid: non-finite value");
  }

  const Grid1D& x_axis() const { return x_axis_; }
  const Grid1D& p_axis() const { return p_axis_; }
  const Eigen::MatrixXd& values() const { return values_; }
  const PhysParams& params() const { return params_; }
  double operator()(Eigen::Index j, Eigen::Index k) const { return values_(j, k); }

  double cell() const { return x_axis_.dx() * p_axis_.dx(); }
  double integral() const { return values_.sum() * cell(); }
  double abs_integral() const { return values_.cwiseAbs().sum() * cell(); }

  /// int W dp, indexed by x.
  Eigen::VectorXd position_marginal() const { return values_.rowwise().sum() * p_axis_.dx(); }
  /// int W dx, indexed by p.
  Eigen::VectorXd momentum_marginal() const {
    return values_.colwise().sum().transpose() * x_axis_.dx();
  }

  bool compatible_with(const WignerGrid& o) const {
    return x_axis_.same_as(o.x_axis_) && p_axis_.same_as(o.p_axis_);
  }

 private:
  Grid1D x_axis_;
  Grid1D p_axis_;
  Eigen::MatrixXd values_;
  PhysParams params_;
};

namespace detail {

/// Shared core: `half_step(a, b)` returns rho(x_min + a dx/2, x_min + b dx/2)
/// times dx (i.e. a matrix element in the orthonormal grid basis), for
/// a, b in [0, 2n). Returns the raw complex transform.
template <typename HalfStep>
Eigen::MatrixXcd wigner_core(const Grid1D& grid, const PhysParams& params, HalfStep&& half_step) {
  const Eigen::Index n = grid.size();
  const Eigen::Index c = fourier::centre_index(n);
  const double two_pi = 2.0 * std::numbers::pi;
  const double scale = static_cast<double>(n) / (two_pi * params.hbar);

  Eigen::MatrixXcd raw(n, n);
  Eigen::VectorXcd folded(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    folded.setZero();
    const Eigen::Index centre = 2 * j;
    const Eigen::Index reach = std::min(centre, 2 * n - 1 - centre);
    for (Eigen::Index l = -reach; l <= reach; ++l) {
      const Eigen::Index r = ((l % n) + n) % n;
      folded[r] += half_step(centre - l, centre + l);
    }
    // W_k = (1/2 pi hbar) sum_r folded_r exp(2 pi i (k - c) r / n)
    for (Eigen::Index r = 0; r < n; ++r) {
      folded[r] *= std::polar(1.0, -two_pi * static_cast<double>(c * r % n) / static_cast<double>(n));
    }
    raw.row(j) = (fourier::ifft(folded) * scale).transpose();
  }
  return raw;
}

inline WignerGrid finish_wigner(const Grid1D& grid, const PhysParams& params,
                                const Eigen::MatrixXcd& raw, double* max_imag) {
  const double residue = raw.imag().cwiseAbs().maxCoeff();
  if (max_imag != nullptr) *max_imag = residue;
  if (residue > 1e-10) {
    throw NumericalGuard("wigner-reality",
                         "imaginary residue " + std::to_string(residue) + " exceeds 1e-10");
  }
  return {grid, grid.dual(params.hbar), raw.real(), params};
}

}  // namespace detail

/// Wigner transform of a normalized pure state. `max_imag`, when given,
/// receives the largest imaginary residue discarded from the raw transform.
inline WignerGrid wigner_transform(const WaveFunction& psi, double* max_imag = nullptr) {
  detail::require(psi.is_normalized(1e-6), "wigner_transform: state must be normalized");
  const Eigen::VectorXcd fine = fourier::upsample2(psi.amplitudes());
  const double dx = psi.grid().dx();
  auto raw = detail::wigner_core(psi.grid(), psi.params(), [&](Eigen::Index a, Eigen::Index b) {
    return fine[a] * std::conj(fine[b]) * dx;
  });
  return detail::finish_wigner(psi.grid(), psi.params(), raw, max_imag);
}

struct PhaseSpaceObservable {
  std::function<double(double x, double p)> value;

  double operator()(double x, double p) const { return value(x, p); }
};

/// int int W O dx dp.
inline double expectation_phase_space(const WignerGrid& w, const PhaseSpaceObservable& o) {
  const auto& xs = w.x_axis();
  const auto& ps = w.p_axis();
  double acc = 0.0;
  for (Eigen::Index j = 0; j < xs.size(); ++j) {
    for (Eigen::Index k = 0; k < ps.size(); ++k) acc += w(j, k) * o(xs.x(j), ps.x(k));
  }
  return acc * w.cell();
}

/// Overload for callers that only have a compatible grid pair to check.
inline double expectation_phase_space(const WignerGrid& w, const WignerGrid& layout,
                                      const PhaseSpaceObservable& o) {
  detail::require(w.compatible_with(layout), "expectation_phase_space: grid mismatch");
  return expectation_phase_space(w, o);
}

/// f = int |W| / int W. Equals one exactly when W is non-negative.
inline double negativity_ratio(const WignerGrid& w) {
  const double total = w.values().sum();
  const double absolute = w.values().cwiseAbs().sum();
  if (!(std::abs(total) > 1e-12 * absolute) || total == 0.0) {
    throw InvalidArgument("negativity_ratio: integral of W vanishes");
  }
  return absolute / total;
}

/// Columns x, p, w.
inline void write_wigner(std::ostream& out, const WignerGrid& w) {
  csv::Writer writer(out);
  writer.header({"x", "p", "w"});
  for (Eigen::Index j = 0; j < w.x_axis().size(); ++j) {
    for (Eigen::Index k = 0; k < w.p_axis().size(); ++k) {
      writer.row(w.x_axis().x(j), w.p_axis().x(k), w(j, k));
    }
  }
}

/// Inverse of `write_wigner`; rows must be ordered x-major as written.
inline WignerGrid read_wigner(std::istream& in, PhysParams params = {}) {
  const auto rows = csv::read_table(in, {"x", "p", "w"});
  detail::require(!rows.empty(), "read_wigner: empty table");
  Eigen::Index n_p = 0;
  while (static_cast<std::size_t>(n_p) < rows.size() && rows[static_cast<std::size_t>(n_p)][0] == rows[0][0]) ++n_p;
  detail::require(n_p >= Grid1D::kMinPoints && rows.size() % static_cast<std::size_t>(n_p) == 0,
                  "read_wigner: table is not a full x-major rectangle");
  const auto n_x = static_cast<Eigen::Index>(rows.size()) / n_p;
  detail::require(n_x >= Grid1D::kMinPoints, "read_wigner: need at least 8 x rows");
  Grid1D xs(rows.front()[0], rows.back()[0], n_x);
  Grid1D ps(rows.front()[1], rows[static_cast<std::size_t>(n_p - 1)][1], n_p);
  Eigen::MatrixXd v(n_x, n_p);
  for (Eigen::Index j = 0; j < n_x; ++j) {
    for (Eigen::Index k = 0; k < n_p; ++k) v(j, k) = rows[static_cast<std::size_t>(j * n_p + k)][2];
  }
  return {xs, ps, std::move(v), params};
}

}  // namespace phasebell
