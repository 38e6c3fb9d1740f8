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
#include <vector>

#include "catch_amalgamated.hpp"
#include "oracles.hpp"
#include "phasebell/phasebell.hpp"

using namespace phasebell;
using Catch::Approx;

namespace {

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

double l1_distance(const WignerGrid& a, const WignerGrid& b) {
  return (a.values() - b.values()).cwiseAbs().sum() * a.cell();
}

// Time for which the free shear moves every momentum row by a whole number
// of x samples.
double commensurate_step(const Grid1D& g) { return g.dx() / g.dual(1.0).dx(); }

}  // namespace

TEST_CASE("real-time density evolution", "[evolution]") {
  const auto g = Grid1D::centred(8.0, 96);
  const Hamiltonian h = Hamiltonian::kinetic_plus(g, Potential::harmonic(1.0, 1.0));
  const Spectrum spec(h);
  const std::vector<WaveFunction> states{cat_state(g, 2.0, 1.0, -1), gaussian_packet(g, 1.0, 0.8, 0.5)};
  const std::vector<double> weights{0.7, 0.3};
  const auto rho = DensityMatrix::mixture(states, weights);

  CHECK(max_abs(evolve_density_minkowski(rho, spec, 0.0).entries() - rho.entries()) < 1e-12);

  const auto later = evolve_density_minkowski(rho, spec, 1.3);
  CHECK((later.eigenvalues() - rho.eigenvalues()).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(later.purity() == Approx(rho.purity()).epsilon(1e-10));
  CHECK(std::abs(later.trace() - 1.0) < 1e-12);

  const auto back = evolve_density_minkowski(later, spec, -1.3);
  CHECK(max_abs(back.entries() - rho.entries()) < 1e-8);

  // An eigenprojector is stationary.
  const WaveFunction eig(g, spec.basis().col(3) / std::sqrt(g.dx()));
  const auto proj = DensityMatrix::pure(eig);
  CHECK(max_abs(evolve_density_minkowski(proj, spec, 2.7).entries() - proj.entries()) < 1e-10);
}

TEST_CASE("imaginary-time density evolution", "[evolution]") {
  const auto g = Grid1D::centred(8.0, 96);
  const Hamiltonian h = Hamiltonian::kinetic_plus(g, Potential::harmonic(1.0, 1.0));
  const Spectrum spec(h);
  CHECK(spec.energies()[0] == Approx(0.5).epsilon(1e-8));
  CHECK(spec.gap() == Approx(1.0).epsilon(1e-8));

  const auto rho = DensityMatrix::pure(cat_state(g, 2.0, 1.0, 1));
  for (auto conv : {EuclideanConvention::Symmetric, EuclideanConvention::Similarity}) {
    CHECK(max_abs(evolve_density_euclidean(rho, spec, 0.0, conv).entries() - rho.entries()) < 1e-12);
  }

  // Symmetric damping projects onto the ground state once e^{-gap tau} < 1e-8.
  const double tau = 20.0;
  REQUIRE(std::exp(-spec.gap() * tau) < 1e-8);
  const auto cooled = evolve_density_euclidean(rho, spec, tau, EuclideanConvention::Symmetric);
  CHECK(fidelity(cooled, spec.ground_state()) > 1.0 - 1e-6);
  CHECK(cooled.purity() == Approx(1.0).epsilon(1e-6));

  // Similarity form leaves states commuting with H alone. The map multiplies
  // eigenbasis coherences by e^{(E_b - E_a) tau}, so roundoff left by the basis
  // change grows with the spectral width; keep that growth below e^10.
  Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(96, 96);
  diag(0, 0) = 0.5;
  diag(1, 1) = 0.3;
  diag(4, 4) = 0.2;
  const DensityMatrix commuting(g, spec.from_eigenbasis(diag));
  const double width = spec.energies()[95] - spec.energies()[0];
  const double tau_sim = 10.0 / width;
  const auto sim = evolve_density_euclidean(commuting, spec, tau_sim, EuclideanConvention::Similarity);
  CHECK(max_abs(sim.entries() - commuting.entries()) < 1e-10);
  CHECK(std::abs(sim.trace() - 1.0) < 1e-12);

  // Purity climbs toward one under symmetric damping.
  double last = commuting.purity();
  for (double t : {0.2, 0.5, 1.0, 2.0, 4.0, 8.0}) {
    const double now = evolve_density_euclidean(commuting, spec, t, EuclideanConvention::Symmetric).purity();
    CHECK(now >= last - 1e-12);
    last = now;
  }
  CHECK(last == Approx(1.0).epsilon(1e-4));
}

TEST_CASE("Wigner transform of a pure density matrix equals that of the state", "[evolution][wigner]") {
  const auto g = Grid1D::centred(10.0, 128);
  const auto psi = cat_state(g, 3.0, 1.0, -1);
  const auto a = wigner_transform(psi);
  const auto b = wigner_transform(DensityMatrix::pure(psi));
  CHECK((a.values() - b.values()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("free shear basics", "[evolution][shear]") {
  const auto g = Grid1D::centred(16.0, 256);
  const auto w = wigner_transform(cat_state(g, 3.0, 1.0, -1));
  CHECK((free_wigner_shear(w, 0.0, {}).values() - w.values()).cwiseAbs().maxCoeff() == 0.0);
  // On commensurate times the shear permutes grid values, so |W| mass is kept
  // exactly. At other times linear interpolation rounds off the zero
  // crossings of the cat's fringes; a Gaussian has none.
  for (int j = 1; j <= 3; ++j) {
    const auto s = free_wigner_shear(w, j * commensurate_step(g), {});
    CHECK(s.abs_integral() == Approx(w.abs_integral()).epsilon(1e-12));
  }
  const auto wg = wigner_transform(gaussian_packet(g, 0.0, 1.0));
  for (double t : {0.3, 1.0}) {
    CHECK(free_wigner_shear(wg, t, {}).abs_integral() == Approx(wg.abs_integral()).epsilon(1e-4));
    CHECK(free_wigner_shear(w, t, {}).abs_integral() == Approx(w.abs_integral()).epsilon(1e-3));
  }
  CHECK_THROWS_AS(free_wigner_shear(w, 20.0, {}), NumericalGuard);
}

TEST_CASE("free shear agrees with kernel evolution at commensurate times", "[evolution][shear]") {
  const auto g = Grid1D::centred(16.0, 256);
  const double step = commensurate_step(g);
  for (const auto& psi : {gaussian_packet(g, 0.0, 1.0), cat_state(g, 3.0, 1.0, -1)}) {
    const auto w = wigner_transform(psi);
    for (int j = 1; j <= 3; ++j) {
      const double t = j * step;
      const auto evolved = wigner_transform(apply_kernel(free_kernel_minkowski(g, t), psi).normalized());
      const auto sheared = free_wigner_shear(w, t, {});
      CHECK(l1_distance(evolved, sheared) < 1e-4);
      CHECK((evolved.values() - sheared.values()).cwiseAbs().maxCoeff() < 1e-4);
    }
  }
}

TEST_CASE("free shear at generic times carries linear-interpolation error", "[evolution][shear]") {
  const auto g = Grid1D::centred(16.0, 256);
  const auto psi = gaussian_packet(g, 0.0, 1.0);
  const auto w = wigner_transform(psi);
  for (double t : {0.5, 1.0}) {
    const auto evolved = wigner_transform(apply_kernel(free_kernel_minkowski(g, t), psi).normalized());
    CHECK(l1_distance(evolved, free_wigner_shear(w, t, {})) < 1e-2);
  }
}

TEST_CASE("negativity decays under symmetric imaginary-time evolution", "[evolution][trajectory]") {
  // Fringes of a separation-3 cat need dp well below their period pi/3; a
  // 32-wide box on 256 points gives ten samples per period.
  const auto g = Grid1D::centred(32.0, 256);
  const Hamiltonian h = Hamiltonian::kinetic_plus(g, Potential::harmonic(1.0, 1.0));
  const auto rho = DensityMatrix::pure(cat_state(g, 3.0, 1.0, 1));
  std::vector<double> taus;
  for (int k = 0; k < 32; ++k) taus.push_back(0.1 * k);
  const auto traj = negativity_trajectory(rho, h, taus, Regime::Euclidean, EuclideanConvention::Symmetric);
  REQUIRE(traj.size() == 32);
  CHECK(traj.front().f > 1.0);
  for (std::size_t k = 1; k < traj.size(); ++k) {
    CHECK(traj[k].f <= traj[k - 1].f + 1e-6);
    CHECK(traj[k].f >= 1.0 - 1e-12);
  }
  CHECK(traj.back().f < 1.0 + 1e-4);
}

TEST_CASE("negativity is conserved by the commensurate free flow", "[evolution][trajectory]") {
  const auto g = Grid1D::centred(16.0, 256);
  const double step = commensurate_step(g);
  const auto rho = DensityMatrix::pure(cat_state(g, 3.0, 1.0, -1));
  const std::vector<double> ts{0.0, step, 2 * step, 3 * step, 4 * step};
  const auto traj =
      negativity_trajectory(rho, Hamiltonian::free(g), ts, Regime::Minkowski, EuclideanConvention::Symmetric);
  double lo = traj.front().f, hi = traj.front().f;
  for (const auto& p : traj) {
    lo = std::min(lo, p.f);
    hi = std::max(hi, p.f);
    CHECK(p.purity == Approx(1.0).epsilon(1e-10));
  }
  CHECK(hi - lo < 1e-4);
}

TEST_CASE("a Gaussian never acquires negativity", "[evolution][trajectory]") {
  const auto g = Grid1D::centred(10.0, 128);
  const Hamiltonian h = Hamiltonian::kinetic_plus(g, Potential::harmonic(1.0, 1.0));
  const auto rho = DensityMatrix::pure(gaussian_packet(g, 1.0, 1.3));
  const std::vector<double> taus{0.0, 0.5, 1.0, 2.0, 4.0};
  for (const auto& p : negativity_trajectory(rho, h, taus, Regime::Euclidean, EuclideanConvention::Symmetric)) {
    CHECK(p.f == Approx(1.0).epsilon(1e-8));
  }
  const std::vector<double> unsorted{1.0, 0.5};
  CHECK_THROWS_AS(negativity_trajectory(rho, h, unsorted, Regime::Euclidean, EuclideanConvention::Symmetric),
                  InvalidArgument);
}
