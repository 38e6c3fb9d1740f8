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


#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "catch_amalgamated.hpp"
#include "oracles.hpp"
#include "phasebell/phasebell.hpp"

using namespace phasebell;
using Catch::Approx;

namespace {

const double kTsirelson = 2.0 * std::sqrt(2.0);

UnitVector random_unit(std::mt19937_64& rng) { return random_direction(rng); }

MeasurementSetting random_setting(std::mt19937_64& rng) { return {random_unit(rng)}; }

TwoQubitState random_state(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Vector4cd v;
  for (int k = 0; k < 4; ++k) v[k] = {n(rng), n(rng)};
  return TwoQubitState::normalized(v);
}

SpinorState random_spinor(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Vector2cd v(cplx(n(rng), n(rng)), cplx(n(rng), n(rng)));
  v.normalize();
  return SpinorState(v);
}

Eigen::Matrix2cd random_unitary(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * oracle::pi);
  return std::polar(1.0, angle(rng)) * spin_rotation(random_unit(rng), angle(rng));
}

MeasurementSetting in_xz_plane(double degrees) {
  const double r = degrees * oracle::pi / 180.0;
  return {UnitVector::normalize({std::sin(r), 0.0, std::cos(r)})};
}

}  // namespace

TEST_CASE("singlet state", "[bell]") {
  const auto s = singlet();
  CHECK(s.amplitudes().norm() == Approx(1.0).epsilon(1e-15));
  Eigen::Vector4cd swapped = s.amplitudes();
  std::swap(swapped[1], swapped[2]);
  CHECK((swapped + s.amplitudes()).cwiseAbs().maxCoeff() == 0.0);

  std::mt19937_64 rng(1);
  for (int k = 0; k < 100; ++k) {
    const Eigen::Matrix2cd u = spin_rotation(random_unit(rng), std::uniform_real_distribution<>(0, 7)(rng));
    const auto rotated = apply_local(s, u, u);
    CHECK(std::abs(std::abs(s.amplitudes().dot(rotated.amplitudes())) - 1.0) < 1e-10);
  }
}

TEST_CASE("correlations agree with explicit 4x4 operators", "[bell]") {
  const auto s = singlet();
  const MeasurementSetting z{UnitVector::plus_z()}, x{UnitVector::plus_x()};
  CHECK(correlation(s, z, z) == Approx(-1.0).epsilon(1e-14));
  CHECK(std::abs(correlation(s, z, x)) < 1e-14);
  const auto upup = TwoQubitState(Eigen::Vector4cd(1, 0, 0, 0));
  CHECK(correlation(upup, z, z) == Approx(1.0).epsilon(1e-14));

  std::mt19937_64 rng(2);
  for (int k = 0; k < 200; ++k) {
    const auto psi = random_state(rng);
    const auto a = random_setting(rng), b = random_setting(rng);
    CHECK(correlation(psi, a, b) == Approx(oracle::correlation_4x4(psi.amplitudes(), a.a.vec(), b.a.vec())).margin(1e-12));
    CHECK(correlation(TwoQubitDensity(psi), a, b) == Approx(correlation(psi, a, b)).margin(1e-12));
    CHECK(correlation(s, a, b) == Approx(-a.a.dot(b.a)).margin(1e-12));
  }
}

TEST_CASE("CHSH values", "[bell]") {
  const auto s = singlet();
  const double v = chsh_value(s, in_xz_plane(0), in_xz_plane(90), in_xz_plane(45), in_xz_plane(135));
  CHECK(v == Approx(-kTsirelson).epsilon(1e-12));

  std::mt19937_64 rng(3);
  for (int k = 0; k < 100; ++k) {
    const auto psi = random_state(rng);
    const auto a = random_setting(rng), b = random_setting(rng);
    const double degenerate = chsh_value(psi, a, a, b, b);
    CHECK(degenerate == Approx(2.0 * correlation(psi, a, b)).margin(1e-12));
    CHECK(std::abs(degenerate) <= 2.0 + 1e-12);
  }
}

TEST_CASE("product states respect the local bound", "[bell]") {
  std::mt19937_64 rng(4);
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const auto psi = TwoQubitState::product(random_spinor(rng), random_spinor(rng));
    const double v = chsh_value(psi, random_setting(rng), random_setting(rng), random_setting(rng), random_setting(rng));
    worst = std::max(worst, std::abs(v));
  }
  CHECK(worst <= 2.0 + 1e-9);
}

TEST_CASE("no state exceeds the quantum bound", "[bell]") {
  std::mt19937_64 rng(5);
  double worst = 0.0;
  for (int k = 0; k < 100000; ++k) {
    const auto psi = random_state(rng);
    const double v = chsh_value(psi, random_setting(rng), random_setting(rng), random_setting(rng), random_setting(rng));
    worst = std::max(worst, std::abs(v));
  }
  CHECK(worst <= kTsirelson + 1e-9);
}

TEST_CASE("CHSH maximization", "[bell]") {
  CHECK(chsh_maximize(singlet()).value >= kTsirelson - 1e-6);
  CHECK(chsh_maximize(TwoQubitState(Eigen::Vector4cd(1, 0, 0, 0))).value <= 2.0 + 1e-6);
  CHECK(chsh_maximize(TwoQubitDensity::maximally_mixed()).value <= 1e-6);

  const auto opt = chsh_maximize(singlet());
  const auto& st = opt.settings;
  CHECK(std::abs(chsh_value(singlet(), {st.a}, {st.a_prime}, {st.b}, {st.b_prime})) ==
        Approx(opt.value).epsilon(1e-12));

  std::mt19937_64 rng(6);
  for (int k = 0; k < 50; ++k) {
    const auto psi = random_state(rng);
    CHECK(chsh_maximize(psi).value == Approx(oracle::horodecki_chsh(psi.density())).margin(1e-6));
  }
  // Reproducible for a fixed seed.
  const auto psi = random_state(rng);
  CHECK(chsh_maximize(psi, 8, 42).value == chsh_maximize(psi, 8, 42).value);
  CHECK_THROWS_AS(chsh_maximize(psi, 0), InvalidArgument);
}

TEST_CASE("maximized CHSH is invariant under local unitaries", "[bell]") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 30; ++k) {
    const auto psi = random_state(rng);
    const auto moved = apply_local(psi, random_unitary(rng), random_unitary(rng));
    CHECK(chsh_maximize(moved).value == Approx(chsh_maximize(psi).value).margin(1e-6));
  }
}

TEST_CASE("CNOT entangles a superposed control", "[bell]") {
  const double r = 1.0 / std::sqrt(2.0);
  const auto in = TwoQubitState::product(SpinorState(r, r), SpinorState(0.0, 1.0));
  const auto out = cnot(in);
  CHECK((out.amplitudes() - Eigen::Vector4cd(r, 0, 0, r)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(chsh_maximize(in).value <= 2.0 + 1e-6);
  CHECK(std::abs(chsh_maximize(out).value - kTsirelson) < 1e-6);

  std::mt19937_64 rng(8);
  for (int k = 0; k < 100; ++k) {
    const auto psi = random_state(rng);
    CHECK((cnot(cnot(psi)).amplitudes() - psi.amplitudes()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("imaginary-time filtering destroys the violation", "[bell][decay]") {
  const Eigen::Vector4d energies(0, 1, 2, 3);
  std::vector<double> taus;
  for (int k = 0; k <= 32; ++k) taus.push_back(0.25 * k);
  const auto traj = euclidean_chsh_decay(singlet(), energies, taus);
  CHECK(traj.front().chsh_max == Approx(kTsirelson).epsilon(1e-10));
  for (std::size_t k = 0; k < traj.size(); ++k) {
    // Amplitudes (1, e^{-tau}) on |up down>, |down up>: S* = 2 sqrt(1 + sech^2 tau).
    const double sech = 1.0 / std::cosh(traj[k].tau);
    CHECK(traj[k].chsh_max == Approx(2.0 * std::sqrt(1.0 + sech * sech)).margin(1e-9));
    if (k > 0) CHECK(traj[k].chsh_max <= traj[k - 1].chsh_max + 1e-6);
  }
  CHECK(std::abs(traj.back().chsh_max - 2.0) < 1e-4);

  for (double tau : {0.0, 0.5, 4.0}) CHECK((euclidean_filter(energies, tau).array() >= 0.0).all());
}

TEST_CASE("real-time phases leave the violation intact", "[bell][decay]") {
  const Eigen::Vector4d energies(0, 1, 2, 3);
  std::vector<double> ts;
  for (int k = 0; k <= 32; ++k) ts.push_back(0.25 * k);
  for (const auto& p : minkowski_chsh_trajectory(singlet(), energies, ts)) {
    CHECK(std::abs(p.chsh_max - kTsirelson) < 1e-9);
  }
}

TEST_CASE("decay and settings CSV", "[bell][io]") {
  const std::vector<double> taus{0.0, 1.0};
  const auto traj = euclidean_chsh_decay(singlet(), Eigen::Vector4d(0, 1, 2, 3), taus);
  std::stringstream s;
  write_decay(s, traj);
  const auto rows = csv::read_table(s, {"tau", "chsh_max", "fidelity_to_initial"});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0][2] == Approx(1.0));

  std::stringstream t;
  write_settings(t, chsh_maximize(singlet()).settings);
  CHECK(t.str().rfind("setting,theta,phi\n", 0) == 0);
}
