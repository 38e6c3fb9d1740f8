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

// Spin-1/2 coherent states on the unit sphere and their geometric phases.
//
// Chart. |n> = (cos(theta/2), e^{i phi} sin(theta/2)), whose Bloch vector is
// n itself. This is exp(-i theta a.sigma/2)|up> with a = z x n / |z x n|,
// i.e. the state reached from the north pole along the shortest geodesic.
// For a general reference n0 the state is re-phased so that <n0|n> >= 0
// (the n0 geodesic gauge). In that gauge
//
//   <n_f|n_i> = sqrt((1 + n_f.n_i)/2) exp(i A(n_f, n_i, n0)/2)
//
// with A the signed area of the geodesic triangle.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <istream>
#include <iterator>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "phasebell/csv.hpp"
#include "phasebell/errors.hpp"

namespace phasebell {

using cplx = std::complex<double>;

class UnitVector {
 public:
  /// Requires |(x, y, z)| = 1 within 1e-12.
  UnitVector(double x, double y, double z) : v_(x, y, z) {
    detail::require(v_.allFinite() && std::abs(v_.norm() - 1.0) <= 1e-12,
                    "UnitVector: components must have unit norm");
  }

  explicit UnitVector(const Eigen::Vector3d& v) : UnitVector(v.x(), v.y(), v.z()) {}

  /// Scales any non-zero vector onto the sphere.
  static UnitVector normalize(const Eigen::Vector3d& v) {
    const double n = v.norm();
    detail::require(std::isfinite(n) && n > 1e-300, "UnitVector::normalize: zero vector");
    return UnitVector(v / n);
  }

  static UnitVector from_angles(double theta, double phi) {
    return normalize({std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)});
  }

  static UnitVector plus_x() { return {1, 0, 0}; }
  static UnitVector plus_y() { return {0, 1, 0}; }
  static UnitVector plus_z() { return {0, 0, 1}; }
  static UnitVector minus_z() { return {0, 0, -1}; }

  double x() const { return v_.x(); }
  double y() const { return v_.y(); }
  double z() const { return v_.z(); }
  const Eigen::Vector3d& vec() const { return v_; }

  double theta() const { return std::acos(std::clamp(v_.z(), -1.0, 1.0)); }
  double phi() const { return std::atan2(v_.y(), v_.x()); }

  double dot(const UnitVector& o) const { return v_.dot(o.v_); }
  UnitVector operator-() const { return UnitVector(-v_); }

 private:
  Eigen::Vector3d v_;
};

class SpinorState {
 public:
  SpinorState(cplx up, cplx down) : a_(up), b_(down) {
    detail::require(std::abs(std::norm(a_) + std::norm(b_) - 1.0) <= 1e-12,
                    "SpinorState: amplitudes must have unit norm");
  }

  explicit SpinorState(const Eigen::Vector2cd& v) : SpinorState(v[0], v[1]) {}

  cplx up() const { return a_; }
  cplx down() const { return b_; }
  Eigen::Vector2cd vec() const { return {a_, b_}; }

  /// <this|other>
  cplx inner(const SpinorState& other) const { return std::conj(a_) * other.a_ + std::conj(b_) * other.b_; }

  /// <sigma>; equals the label n for a coherent state.
  Eigen::Vector3d bloch() const {
    const cplx ab = std::conj(a_) * b_;
    return {2.0 * ab.real(), 2.0 * ab.imag(), std::norm(a_) - std::norm(b_)};
  }

 private:
  cplx a_;
  cplx b_;
};

/// exp(-i angle axis.sigma / 2); `axis` must be a unit vector.
inline Eigen::Matrix2cd spin_rotation(const UnitVector& axis, double angle) {
  const double c = std::cos(0.5 * angle);
  const double s = std::sin(0.5 * angle);
  const cplx i(0.0, 1.0);
  Eigen::Matrix2cd m;
  m << c - i * s * axis.z(), -i * s * cplx(axis.x(), -axis.y()),
       -i * s * cplx(axis.x(), axis.y()), c + i * s * axis.z();
  return m;
}

namespace detail {

inline SpinorState canonical_spinor(const UnitVector& n) {
  const double half = 0.5 * n.theta();
  return {cplx(std::cos(half), 0.0), std::polar(std::sin(half), n.phi())};
}

/// Axis used to rotate n0 onto -n0: +x projected orthogonal to n0, falling
/// back to +y when n0 is along x.
inline UnitVector antipode_axis(const UnitVector& n0) {
  for (const Eigen::Vector3d& e : {Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 1, 0)}) {
    const Eigen::Vector3d r = e - e.dot(n0.vec()) * n0.vec();
    if (r.norm() > 1e-6) return UnitVector::normalize(r);
  }
  return UnitVector::plus_x();
}

inline bool nearly_antipodal(const UnitVector& a, const UnitVector& b) { return 1.0 + a.dot(b) <= 1e-12; }

}  // namespace detail

/// Coherent state |n> in the geodesic gauge of `reference`. For n = -reference
/// the state is the rotation by pi about the antipode axis (+x for the
/// default reference), so -z maps to -i|down>.
inline SpinorState coherent_state(const UnitVector& n, const UnitVector& reference = UnitVector::plus_z()) {
  const SpinorState base = detail::canonical_spinor(reference);
  if (detail::nearly_antipodal(n, reference)) {
    return SpinorState(Eigen::Vector2cd(spin_rotation(detail::antipode_axis(reference), std::numbers::pi) * base.vec()));
  }
  const SpinorState s = detail::canonical_spinor(n);
  const cplx w = base.inner(s);
  const cplx phase = std::abs(w) > 0.0 ? std::conj(w) / std::abs(w) : cplx(1.0, 0.0);
  return {s.up() * phase, s.down() * phase};
}

/// Signed spherical excess of the geodesic triangle (n1, n2, n3), positive
/// when the vertices run counter-clockwise seen from outside:
///   tan(E/2) = n1.(n2 x n3) / (1 + n1.n2 + n2.n3 + n3.n1)
inline double spherical_triangle_area(const UnitVector& n1, const UnitVector& n2, const UnitVector& n3) {
  detail::require(!detail::nearly_antipodal(n1, n2) && !detail::nearly_antipodal(n2, n3) &&
                       !detail::nearly_antipodal(n3, n1),
                  "spherical_triangle_area: antipodal vertices");
  const double triple = n1.vec().dot(n2.vec().cross(n3.vec()));
  const double denom = 1.0 + n1.dot(n2) + n2.dot(n3) + n3.dot(n1);
  return 2.0 * std::atan2(triple, denom);
}

/// <n_f|n_i> from geometry alone:
///   sqrt((1 + n_f.n_i)/2) exp(i Phi/2),  Phi = spherical_triangle_area(n_f, n_i, n0).
/// Antipodal endpoints give 0. If n0 is antipodal to an endpoint the
/// triangle is undefined and the spinor product is returned instead.
inline cplx coherent_overlap(const UnitVector& n_i, const UnitVector& n_f,
                             const UnitVector& reference = UnitVector::plus_z()) {
  if (detail::nearly_antipodal(n_i, n_f)) return {0.0, 0.0};
  if (detail::nearly_antipodal(n_i, reference) || detail::nearly_antipodal(n_f, reference)) {
    return coherent_state(n_f, reference).inner(coherent_state(n_i, reference));
  }
  const double modulus = std::sqrt(std::max(0.0, 0.5 * (1.0 + n_f.dot(n_i))));
  return std::polar(modulus, 0.5 * spherical_triangle_area(n_f, n_i, reference));
}

struct SpinKernelPair {
  cplx minkowski;
  cplx euclidean;
};

/// Free spin kernel in both time signatures. The spin action has only the
/// first-order geometric term, which is unchanged by t -> -i tau, so the two
/// entries are the same overlap.
inline SpinKernelPair free_spin_kernel_pair(const UnitVector& n_i, const UnitVector& n_f,
                                            const UnitVector& reference = UnitVector::plus_z()) {
  const cplx k = coherent_overlap(n_i, n_f, reference);
  return {k, k};
}

class SphericalPath {
 public:
  SphericalPath(std::vector<UnitVector> vertices, bool closed)
      : vertices_(std::move(vertices)), closed_(closed) {
    detail::require(vertices_.size() >= 2, "SphericalPath: need at least two vertices");
    for (std::size_t k = 0; k + 1 < vertices_.size(); ++k) {
      detail::require(!detail::nearly_antipodal(vertices_[k], vertices_[k + 1]),
                      "SphericalPath: consecutive vertices are antipodal");
    }
    if (closed_) {
      detail::require(vertices_.size() >= 3, "SphericalPath: a closed path needs at least three vertices");
      detail::require(!detail::nearly_antipodal(vertices_.back(), vertices_.front()),
                      "SphericalPath: closing edge joins antipodal vertices");
    }
  }

  /// Circle of constant polar angle `theta`, traversed counter-clockwise
  /// about +z in `segments` equal steps.
  static SphericalPath latitude_loop(double theta, int segments) {
    detail::require(segments >= 3, "SphericalPath::latitude_loop: need at least 3 segments");
    std::vector<UnitVector> v;
    v.reserve(static_cast<std::size_t>(segments));
    for (int k = 0; k < segments; ++k) {
      v.push_back(UnitVector::from_angles(theta, 2.0 * std::numbers::pi * k / segments));
    }
    return {std::move(v), true};
  }

  static SphericalPath equator(int segments) { return latitude_loop(0.5 * std::numbers::pi, segments); }

  const std::vector<UnitVector>& vertices() const { return vertices_; }
  bool closed() const { return closed_; }
  std::size_t size() const { return vertices_.size(); }

  SphericalPath reversed() const {
    return {std::vector<UnitVector>(vertices_.rbegin(), vertices_.rend()), closed_};
  }

 private:
  std::vector<UnitVector> vertices_;
  bool closed_;
};

namespace detail {

/// Fan apex for a closed path: the candidate keeping every fan triangle's
/// denominator furthest from zero.
inline UnitVector fan_apex(const SphericalPath& path) {
  const auto& v = path.vertices();
  const std::array<UnitVector, 6> candidates = {UnitVector(0, 0, 1),  UnitVector(0, 0, -1), UnitVector(1, 0, 0),
                                                UnitVector(-1, 0, 0), UnitVector(0, 1, 0),  UnitVector(0, -1, 0)};
  std::size_t best = 0;
  double best_margin = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < v.size(); ++k) {
      const auto& a = v[k];
      const auto& b = v[(k + 1) % v.size()];
      const auto& o = candidates[c];
      margin = std::min(margin, 1.0 + o.dot(a) + a.dot(b) + b.dot(o));
    }
    if (margin > best_margin) {
      best_margin = margin;
      best = c;
    }
  }
  return candidates[best];
}

}  // namespace detail

/// Signed solid angle enclosed by a closed path (left-hand side), summed
/// over the geodesic fan from a fixed apex. Defined modulo 4 pi.
inline double enclosed_solid_angle(const SphericalPath& path) {
  detail::require(path.closed(), "enclosed_solid_angle: path must be closed");
  const UnitVector apex = detail::fan_apex(path);
  const auto& v = path.vertices();
  double total = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const auto& a = v[k];
    const auto& b = v[(k + 1) % v.size()];
    if (detail::nearly_antipodal(apex, a) || detail::nearly_antipodal(apex, b)) {
      throw NumericalGuard("fan-apex", "no usable fan apex for this path");
    }
    total += spherical_triangle_area(apex, a, b);
  }
  return total;
}

/// Wess-Zumino phase of a closed path: half the enclosed signed solid angle.
/// Defined modulo 2 pi.
inline double wz_phase_closed_path(const SphericalPath& path) {
  detail::require(path.closed(), "wz_phase_closed_path: path must be closed");
  return 0.5 * enclosed_solid_angle(path);
}

/// Product of overlaps <v_k|v_{k+1}> around the closed path in the gauge of
/// `reference`. Its phase equals wz_phase_closed_path modulo 2 pi.
inline cplx loop_overlap_product(const SphericalPath& path, const UnitVector& reference = UnitVector::plus_z()) {
  detail::require(path.closed(), "loop_overlap_product: path must be closed");
  const auto& v = path.vertices();
  std::vector<SpinorState> states;
  states.reserve(v.size());
  for (const auto& n : v) states.push_back(coherent_state(n, reference));
  cplx acc(1.0, 0.0);
  for (std::size_t k = 0; k < v.size(); ++k) acc *= states[k].inner(states[(k + 1) % v.size()]);
  return acc;
}

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
  const double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(a, two_pi);
  if (r <= -std::numbers::pi) r += two_pi;
  if (r > std::numbers::pi) r -= two_pi;
  return r;
}

/// Distance between two angles on the circle.
inline double angle_distance(double a, double b) { return std::abs(wrap_angle(a - b)); }

struct LabelledPath {
  long loop_id;
  SphericalPath path;
};

/// Reads closed paths from columns n_x, n_y, n_z (one loop) or
/// loop_id, n_x, n_y, n_z (several loops, rows grouped by id). Rows are
/// rescaled onto the sphere.
inline std::vector<LabelledPath> read_paths(std::istream& in) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  std::istringstream probe(text);
  std::string header;
  while (std::getline(probe, header) && header.find_first_not_of(" \t\r") == std::string::npos) {
  }
  const std::vector<std::string> with_id_cols{"loop_id", "n_x", "n_y", "n_z"};
  const std::vector<std::string> plain_cols{"n_x", "n_y", "n_z"};
  const bool with_id = csv::split(header) == with_id_cols;
  std::istringstream body(text);
  const auto rows = csv::read_table(body, with_id ? with_id_cols : plain_cols);

  std::vector<long> order;
  std::map<long, std::vector<UnitVector>> groups;
  for (const auto& r : rows) {
    const long id = with_id ? std::lround(r[0]) : 0;
    if (with_id) detail::require(static_cast<double>(id) == r[0], "read_paths: loop_id must be an integer");
    const std::size_t o = with_id ? 1 : 0;
    if (!groups.contains(id)) order.push_back(id);
    groups[id].push_back(UnitVector::normalize({r[o], r[o + 1], r[o + 2]}));
  }
  std::vector<LabelledPath> out;
  for (long id : order) out.push_back({id, SphericalPath(std::move(groups[id]), true)});
  return out;
}

/// Columns loop_id, solid_angle, wz_phase.
inline void write_phases(std::ostream& out, const std::vector<LabelledPath>& paths) {
  csv::Writer w(out);
  w.header({"loop_id", "solid_angle", "wz_phase"});
  for (const auto& p : paths) {
    const double omega = enclosed_solid_angle(p.path);
    w.row(p.loop_id, omega, 0.5 * omega);
  }
}

}  // namespace phasebell
