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

// Two-qubit correlations and the CHSH combination:
//
//   S = E(a, b) - E(a, b') + E(a', b) + E(a', b'),  E(a, b) = <(sigma.a) x (sigma.b)>.
//
// Basis order is (up up, up down, down up, down down); qubit 1 is the left
// tensor factor.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "phasebell/csv.hpp"
#include "phasebell/errors.hpp"
#include "phasebell/spin_geom.hpp"

namespace phasebell {

class TwoQubitState {
 public:
  /// Requires unit norm within 1e-12.
  explicit TwoQubitState(const Eigen::Vector4cd& amplitudes) : amps_(amplitudes) {
    detail::require(amps_.allFinite() && std::abs(amps_.squaredNorm() - 1.0) <= 1e-12,
                    "TwoQubitState: amplitudes must have unit norm");
  }

  static TwoQubitState normalized(const Eigen::Vector4cd& v) {
    const double n = v.norm();
    detail::require(std::isfinite(n) && n > 0.0, "TwoQubitState: zero vector");
    return TwoQubitState(v / n);
  }

  static TwoQubitState product(const SpinorState& first, const SpinorState& second) {
    const Eigen::Vector2cd a = first.vec();
    const Eigen::Vector2cd b = second.vec();
    return normalized({a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]});
  }

  const Eigen::Vector4cd& amplitudes() const { return amps_; }
  cplx operator[](Eigen::Index k) const { return amps_[k]; }

  Eigen::Matrix4cd density() const { return amps_ * amps_.adjoint(); }

 private:
  Eigen::Vector4cd amps_;
};

class TwoQubitDensity {
 public:
  /// Requires a Hermitian, unit-trace, positive semi-definite matrix.
  explicit TwoQubitDensity(const Eigen::Matrix4cd& rho) : rho_(rho) {
    detail::require(rho_.allFinite(), "TwoQubitDensity: non-finite entry");
    detail::require((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() <= 1e-12, "TwoQubitDensity: not Hermitian");
    detail::require(std::abs(rho_.trace() - cplx(1.0, 0.0)) <= 1e-12, "TwoQubitDensity: trace must be 1");
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho_, Eigen::EigenvaluesOnly);
    detail::require(es.eigenvalues().minCoeff() >= -1e-12, "TwoQubitDensity: not positive semi-definite");
  }

  explicit TwoQubitDensity(const TwoQubitState& psi) : TwoQubitDensity(psi.density()) {}

  static TwoQubitDensity maximally_mixed() { return TwoQubitDensity(Eigen::Matrix4cd::Identity() * 0.25); }

  const Eigen::Matrix4cd& matrix() const { return rho_; }

 private:
  Eigen::Matrix4cd rho_;
};

struct MeasurementSetting {
  UnitVector a;
};

/// (|up down> - |down up>)/sqrt(2).
inline TwoQubitState singlet() {
  const double r = 1.0 / std::numbers::sqrt2;
  return TwoQubitState(Eigen::Vector4cd(0.0, r, -r, 0.0));
}

/// Pauli matrices sigma_x, sigma_y, sigma_z.
inline std::array<Eigen::Matrix2cd, 3> pauli() {
  const cplx i(0.0, 1.0);
  Eigen::Matrix2cd sx, sy, sz;
  sx << 0, 1, 1, 0;
  sy << 0, -i, i, 0;
  sz << 1, 0, 0, -1;
  return {sx, sy, sz};
}

/// T_ij = Tr(rho sigma_i x sigma_j); E(a, b) = a^T T b.
inline Eigen::Matrix3d correlation_tensor(const Eigen::Matrix4cd& rho) {
  const auto s = pauli();
  Eigen::Matrix3d t;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      Eigen::Matrix4cd op;
      for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) op.block<2, 2>(2 * r, 2 * c) = s[i](r, c) * s[j];
      }
      t(i, j) = (rho * op).trace().real();
    }
  }
  return t;
}

inline Eigen::Matrix3d correlation_tensor(const TwoQubitState& psi) { return correlation_tensor(psi.density()); }
inline Eigen::Matrix3d correlation_tensor(const TwoQubitDensity& rho) { return correlation_tensor(rho.matrix()); }

inline double correlation(const TwoQubitState& psi, const MeasurementSetting& a, const MeasurementSetting& b) {
  return a.a.vec().dot(correlation_tensor(psi) * b.a.vec());
}

inline double correlation(const TwoQubitDensity& rho, const MeasurementSetting& a, const MeasurementSetting& b) {
  return a.a.vec().dot(correlation_tensor(rho) * b.a.vec());
}

struct ChshSettings {
  UnitVector a;
  UnitVector a_prime;
  UnitVector b;
  UnitVector b_prime;
};

inline double chsh_from_tensor(const Eigen::Matrix3d& t, const ChshSettings& s) {
  auto e = [&](const UnitVector& x, const UnitVector& y) { return x.vec().dot(t * y.vec()); };
  return e(s.a, s.b) - e(s.a, s.b_prime) + e(s.a_prime, s.b) + e(s.a_prime, s.b_prime);
}

inline double chsh_value(const TwoQubitState& psi, const MeasurementSetting& a, const MeasurementSetting& a_prime,
                         const MeasurementSetting& b, const MeasurementSetting& b_prime) {
  return chsh_from_tensor(correlation_tensor(psi), {a.a, a_prime.a, b.a, b_prime.a});
}

inline double chsh_value(const TwoQubitDensity& rho, const MeasurementSetting& a,
                         const MeasurementSetting& a_prime, const MeasurementSetting& b,
                         const MeasurementSetting& b_prime) {
  return chsh_from_tensor(correlation_tensor(rho), {a.a, a_prime.a, b.a, b_prime.a});
}

struct ChshOptimum {
  ChshSettings settings;
  double value;  // |S| at `settings`
};

/// Uniform direction from three standard normals.
inline UnitVector random_direction(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  for (;;) {
    const Eigen::Vector3d v(g(rng), g(rng), g(rng));
    if (v.norm() > 1e-8) return UnitVector::normalize(v);
  }
}

namespace detail {

inline UnitVector direction_or(const Eigen::Vector3d& v, const UnitVector& fallback) {
  return v.norm() > 1e-14 ? UnitVector::normalize(v) : fallback;
}

}  // namespace detail

/// Maximizes S over the four directions for a fixed correlation tensor.
/// Each restart draws b, b' at random and then alternates the closed-form
/// optimal (a, a') for fixed (b, b') and vice versa:
///   a = T(b - b')/|.|, a' = T(b + b')/|.|, b = T^T(a + a')/|.|, b' = T^T(a' - a)/|.|
/// The result is deterministic for a given seed.
inline ChshOptimum chsh_maximize_tensor(const Eigen::Matrix3d& t, int restarts = 16, std::uint64_t seed = 0) {
  detail::require(restarts >= 1, "chsh_maximize: restarts must be >= 1");
  std::mt19937_64 rng(seed);
  ChshOptimum best{{UnitVector::plus_z(), UnitVector::plus_z(), UnitVector::plus_z(), UnitVector::plus_z()}, -1.0};
  for (int r = 0; r < restarts; ++r) {
    UnitVector b = random_direction(rng);
    UnitVector bp = random_direction(rng);
    UnitVector a = random_direction(rng);
    UnitVector ap = random_direction(rng);
    double s = -std::numeric_limits<double>::infinity();
    for (int it = 0; it < 10000; ++it) {
      a = detail::direction_or(t * (b.vec() - bp.vec()), a);
      ap = detail::direction_or(t * (b.vec() + bp.vec()), ap);
      b = detail::direction_or(t.transpose() * (a.vec() + ap.vec()), b);
      bp = detail::direction_or(t.transpose() * (ap.vec() - a.vec()), bp);
      const double next = chsh_from_tensor(t, {a, ap, b, bp});
      const bool done = next - s <= 1e-15;
      s = std::max(s, next);
      if (done) break;
    }
    if (std::abs(s) > best.value) best = {{a, ap, b, bp}, std::abs(s)};
  }
  return best;
}

inline ChshOptimum chsh_maximize(const TwoQubitState& psi, int restarts = 16, std::uint64_t seed = 0) {
  return chsh_maximize_tensor(correlation_tensor(psi), restarts, seed);
}

inline ChshOptimum chsh_maximize(const TwoQubitDensity& rho, int restarts = 16, std::uint64_t seed = 0) {
  return chsh_maximize_tensor(correlation_tensor(rho), restarts, seed);
}

/// Controlled NOT with qubit 1 as control, flipping qubit 2 when qubit 1 is up:
/// up down <-> up up; down states untouched.
inline TwoQubitState cnot(const TwoQubitState& psi) {
  Eigen::Vector4cd v = psi.amplitudes();
  std::swap(v[0], v[1]);
  return TwoQubitState(v);
}

/// Local unitary U1 x U2 applied to a state.
inline TwoQubitState apply_local(const TwoQubitState& psi, const Eigen::Matrix2cd& u1, const Eigen::Matrix2cd& u2) {
  Eigen::Matrix4cd op;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) op.block<2, 2>(2 * r, 2 * c) = u1(r, c) * u2;
  }
  return TwoQubitState::normalized(op * psi.amplitudes());
}

struct DecayPoint {
  double tau;
  double chsh_max;
  double fidelity_to_initial;
};

struct DecayOptions {
  double hbar = 1.0;
  int restarts = 16;
  std::uint64_t seed = 0;
};

namespace detail {

inline void require_real_diagonal(const Eigen::Vector4d& energies) {
  detail::require(energies.allFinite(), "chsh decay: energies must be finite");
}

inline std::vector<DecayPoint> decay_trajectory(const TwoQubitState& psi0, const Eigen::Vector4d& energies,
                                                std::span<const double> samples, const DecayOptions& opt,
                                                bool euclidean) {
  require_real_diagonal(energies);
  detail::require(opt.hbar > 0.0, "chsh decay: hbar must be > 0");
  for (std::size_t i = 1; i < samples.size(); ++i) {
    detail::require(samples[i] > samples[i - 1], "chsh decay: samples must increase");
  }
  // Shift by the lowest occupied level so the filter cannot underflow.
  double e_min = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 4; ++k) {
    if (std::abs(psi0[k]) > 0.0) e_min = std::min(e_min, energies[k]);
  }
  std::vector<DecayPoint> out;
  out.reserve(samples.size());
  for (double tau : samples) {
    detail::require(std::isfinite(tau) && tau >= 0.0, "chsh decay: samples must be >= 0");
    Eigen::Vector4cd v;
    for (int k = 0; k < 4; ++k) {
      const double e = energies[k] - e_min;
      v[k] = psi0[k] * (euclidean ? cplx(std::exp(-e * tau / opt.hbar), 0.0)
                                  : std::polar(1.0, -energies[k] * tau / opt.hbar));
    }
    const TwoQubitState psi = TwoQubitState::normalized(v);
    const double s = chsh_maximize(psi, opt.restarts, opt.seed).value;
    const double fid = std::norm(psi0.amplitudes().dot(psi.amplitudes()));
    out.push_back({tau, s, fid});
  }
  return out;
}

}  // namespace detail

/// Filters psi0 with the entrywise non-negative diagonal map e^{-H tau/hbar},
/// renormalizes and records the maximized |S| at each tau. A state confined to
/// one energy level is left unchanged (constant trajectory).
inline std::vector<DecayPoint> euclidean_chsh_decay(const TwoQubitState& psi0, const Eigen::Vector4d& energies,
                                                    std::span<const double> taus, const DecayOptions& opt = {}) {
  return detail::decay_trajectory(psi0, energies, taus, opt, true);
}

/// Control run: the unitary e^{-iHt/hbar} with the same diagonal H.
inline std::vector<DecayPoint> minkowski_chsh_trajectory(const TwoQubitState& psi0, const Eigen::Vector4d& energies,
                                                         std::span<const double> times, const DecayOptions& opt = {}) {
  return detail::decay_trajectory(psi0, energies, times, opt, false);
}

/// Diagonal of e^{-H tau/hbar}; every entry is real and non-negative.
inline Eigen::Vector4d euclidean_filter(const Eigen::Vector4d& energies, double tau, double hbar = 1.0) {
  return (energies.array() * (-tau / hbar)).exp();
}

/// Columns tau, chsh_max, fidelity_to_initial.
inline void write_decay(std::ostream& out, std::span<const DecayPoint> points) {
  csv::Writer w(out);
  w.header({"tau", "chsh_max", "fidelity_to_initial"});
  for (const auto& p : points) w.row(p.tau, p.chsh_max, p.fidelity_to_initial);
}

/// Columns setting, theta, phi.
inline void write_settings(std::ostream& out, const ChshSettings& s) {
  csv::Writer w(out);
  w.header({"setting", "theta", "phi"});
  w.row("a", s.a.theta(), s.a.phi());
  w.row("a_prime", s.a_prime.theta(), s.a_prime.phi());
  w.row("b", s.b.theta(), s.b.phi());
  w.row("b_prime", s.b_prime.theta(), s.b_prime.phi());
}

}  // namespace phasebell
