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

// Experiment runner behind the `phasebell` executable.
//
//   phasebell list [--csv]
//   phasebell run <experiment> [--config FILE] [key=value ...]
//
// Config files hold one key=value per line; '#' starts a comment. Command
// line pairs override the file. Every experiment writes <name>.csv and
// <name>.manifest into out_dir (default: $PHASEBELL_OUT_DIR, else ".").
// Exit status: 0 ok, 1 other failure, 2 configuration error, 3 numerical guard.

#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "phasebell/phasebell.hpp"

#ifndef PHASEBELL_VERSION
#define PHASEBELL_VERSION "0.0.0"
#endif

namespace phasebell::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kConfigError = 2, kGuardError = 3 };

class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

using Values = std::map<std::string, std::string>;

/// Resolved parameters with typed, validating accessors.
class Params {
 public:
  explicit Params(Values v) : values_(std::move(v)) {}

  const Values& values() const { return values_; }

  const std::string& str(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("field '" + key + "': missing");
    return it->second;
  }

  std::string choice(const std::string& key, std::initializer_list<const char*> options) const {
    const std::string& v = str(key);
    std::string all;
    for (const char* o : options) {
      if (v == o) return v;
      all += (all.empty() ? "" : "|") + std::string(o);
    }
    throw ConfigError("field '" + key + "': expected one of " + all + ", got '" + v + "'");
  }

  double real(const std::string& key) const { return parse_real(key, str(key)); }

  double positive(const std::string& key) const {
    const double v = real(key);
    if (!(v > 0.0)) throw ConfigError("field '" + key + "': must be > 0");
    return v;
  }

  double non_negative(const std::string& key) const {
    const double v = real(key);
    if (!(v >= 0.0)) throw ConfigError("field '" + key + "': must be >= 0");
    return v;
  }

  long integer(const std::string& key, long min_value) const {
    const std::string& s = str(key);
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty()) throw ConfigError("field '" + key + "': not an integer: '" + s + "'");
    if (v < min_value) {
      throw ConfigError("field '" + key + "': must be >= " + std::to_string(min_value) + ", got " + s);
    }
    return v;
  }

  std::vector<double> reals(const std::string& key) const {
    std::vector<double> out;
    for (const auto& cell : csv::split(str(key))) out.push_back(parse_real(key, cell));
    if (out.empty()) throw ConfigError("field '" + key + "': empty list");
    return out;
  }

  /// Grid size for centred grids: even and at least Grid1D::kMinPoints.
  Eigen::Index grid_points(const std::string& key = "n_points") const {
    const long n = integer(key, Grid1D::kMinPoints);
    if (n % 2 != 0) throw ConfigError("field '" + key + "': must be even");
    return n;
  }

  PhysParams phys() const {
    PhysParams p{positive("hbar"), positive("mass")};
    return p;
  }

 private:
  static double parse_real(const std::string& key, const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty() || !std::isfinite(v)) {
      throw ConfigError("field '" + key + "': not a finite number: '" + s + "'");
    }
    return v;
  }

  Values values_;
};

/// Where an experiment writes and reports.
struct Context {
  std::filesystem::path out_dir;
  std::ostream& out;
};

struct Experiment {
  std::string name;
  std::string anchor;
  Values defaults;
  std::function<void(const Params&, Context&, std::ostream& csv)> run;
};

namespace detail {

inline Values common_defaults() { return {{"seed", "0"}, {"hbar", "1"}, {"mass", "1"}}; }

inline Values with_common(Values v) {
  for (auto& [k, d] : common_defaults()) v.emplace(k, d);
  return v;
}

inline std::string fmt(double v) { return csv::fmt(v); }

inline void run_wigner(const Params& p, Context& ctx, std::ostream& csv) {
  const PhysParams phys = p.phys();
  const Grid1D grid = Grid1D::centred(p.positive("half_width"), p.grid_points());
  const std::string state = p.choice("state", {"gaussian", "cat"});
  const double width = p.positive("width");
  const double t = p.non_negative("shear_time");
  const long sign = p.integer("cat_sign", -1);
  if (std::abs(sign) != 1) throw ConfigError("field 'cat_sign': must be +1 or -1");
  WaveFunction psi = state == "gaussian"
                         ? gaussian_packet(grid, p.real("centre"), width, p.real("momentum"), phys)
                         : cat_state(grid, p.positive("separation"), width, static_cast<int>(sign), phys);
  psi = psi.normalized();
  const WignerGrid w = wigner_transform(psi);
  const Eigen::Index c = fourier::centre_index(grid.size());
  ctx.out << "f = " << fmt(negativity_ratio(w)) << "\n";
  ctx.out << "w_origin = " << fmt(w(c, c)) << "\n";
  if (t == 0.0) {
    write_wigner(csv, w);
    return;
  }
  const WignerGrid sheared = free_wigner_shear(w, t, phys);
  const DensityMatrix evolved =
      evolve_density_minkowski(DensityMatrix::pure(psi), Hamiltonian::free(grid, phys), t);
  const WignerGrid direct = wigner_transform(evolved);
  const double l1 = (sheared.values() - direct.values()).cwiseAbs().sum() * w.cell();
  ctx.out << "commensurate_step = " << fmt(phys.mass * grid.dx() / w.p_axis().dx()) << "\n";
  ctx.out << "l1_shear_vs_evolved = " << fmt(l1) << "\n";
  csv::Writer out(csv);
  out.header({"x", "p", "w_shear", "w_evolved"});
  for (Eigen::Index j = 0; j < grid.size(); ++j) {
    for (Eigen::Index k = 0; k < grid.size(); ++k) {
      out.row(grid.x(j), w.p_axis().x(k), sheared(j, k), direct(j, k));
    }
  }
}

/// Largest |K_sliced - K_exact| over entries whose end points both lie
/// `margin` inside the grid, and over the whole matrix.
inline std::pair<double, double> kernel_deviation(const Kernel& sliced, const Kernel& exact, double margin) {
  const Grid1D& g = sliced.grid();
  double inner = 0.0;
  const Eigen::MatrixXd diff = (sliced.entries() - exact.entries()).cwiseAbs();
  for (Eigen::Index f = 0; f < g.size(); ++f) {
    if (g.x(f) < g.x_min() + margin || g.x(f) > g.x_max() - margin) continue;
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      if (g.x(i) < g.x_min() + margin || g.x(i) > g.x_max() - margin) continue;
      inner = std::max(inner, diff(f, i));
    }
  }
  return {inner, diff.maxCoeff()};
}

inline Regime parse_regime(const Params& p, const std::string& key = "regime") {
  return p.choice(key, {"euclidean", "minkowski"}) == "euclidean" ? Regime::Euclidean : Regime::Minkowski;
}

inline void run_kernel_check(const Params& p, Context& ctx, std::ostream& csv) {
  const PhysParams phys = p.phys();
  const Grid1D grid = Grid1D::symmetric(p.positive("half_width"), p.integer("n_points", Grid1D::kMinPoints));
  const double total_time = p.positive("total_time");
  const Regime regime = parse_regime(p);
  const double margin = 5.0 * std::sqrt(phys.hbar * total_time / phys.mass);
  if (2.0 * margin >= grid.extent()) throw ConfigError("field 'half_width': grid too small for the interior window");
  const Kernel exact = free_kernel(grid, total_time, regime, phys);
  csv::Writer out(csv);
  out.header({"n_slices", "max_dev_interior", "max_dev_full"});
  for (double s : p.reals("slices")) {
    if (s < 1 || s != std::floor(s)) throw ConfigError("field 'slices': entries must be positive integers");
    const SlicingPlan plan{static_cast<int>(s), total_time, regime};
    const Kernel k = sliced_kernel(grid, Potential::free(), plan, phys);
    const auto [inner, full] = kernel_deviation(k, exact, margin);
    out.row(plan.n_slices, inner, full);
    ctx.out << "N = " << plan.n_slices << "  interior = " << fmt(inner) << "  full = " << fmt(full) << "\n";
  }
}

inline void run_commutator(const Params& p, Context& ctx, std::ostream& csv) {
  const PhysParams phys = p.phys();
  const Grid1D grid = Grid1D::symmetric(p.positive("half_width"), p.integer("n_points", Grid1D::kMinPoints));
  const double total_time = p.positive("total_time");
  const Regime regime = parse_regime(p);
  const cplx expected = regime == Regime::Minkowski ? cplx(0.0, phys.hbar) : cplx(phys.hbar, 0.0);
  csv::Writer out(csv);
  out.header({"n_slices", "j", "re", "im"});
  double worst = 0.0;
  for (double s : p.reals("slices")) {
    if (s < 2 || s != std::floor(s)) throw ConfigError("field 'slices': entries must be integers >= 2");
    const SlicingPlan plan{static_cast<int>(s), total_time, regime};
    for (int j = 1; j < plan.n_slices; ++j) {
      const cplx v = commutator_expectation(plan, grid, phys, j);
      worst = std::max(worst, std::abs(v - expected));
      out.row(plan.n_slices, j, v.real(), v.imag());
    }
  }
  ctx.out << "max |<C> - expected| = " << fmt(worst) << "\n";
}

inline void run_epr(const Params& p, Context& ctx, std::ostream& csv) {
  const PhysParams phys = p.phys();
  const Grid1D grid = Grid1D::centred(p.positive("half_width"), p.grid_points());
  const PairWaveFunction pair =
      epr_initial_pair(grid, p.positive("correlation_width"), p.positive("envelope_width"), phys);
  const double t = p.non_negative("time");
  const Regime regime = parse_regime(p);
  ctx.out << "correlation_initial = " << fmt(momentum_anticorrelation(pair)) << "\n";
  if (t == 0.0) {
    write_joint_momentum(csv, pair);
    return;
  }
  const PairWaveFunction mink = evolve_pair(pair, t, Regime::Minkowski);
  const PairWaveFunction eucl = evolve_pair(pair, t, Regime::Euclidean);
  const Eigen::MatrixXd pm = joint_momentum_distribution(mink);
  const Eigen::MatrixXd pe = joint_momentum_distribution(eucl);
  const Grid1D pg = grid.dual(phys.hbar);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < pm.rows(); ++i) {
    for (Eigen::Index j = 0; j < pm.cols(); ++j) {
      if (pm(i, j) <= 1e-12 || pe(i, j) <= 1e-12) continue;
      const double expect = std::exp(-(pg.x(i) * pg.x(i) + pg.x(j) * pg.x(j)) * t / (phys.hbar * phys.mass));
      worst = std::max(worst, std::abs(pe(i, j) / pm(i, j) / expect - 1.0));
    }
  }
  const PairWaveFunction& chosen = regime == Regime::Minkowski ? mink : eucl;
  ctx.out << "correlation_final = " << fmt(momentum_anticorrelation(chosen)) << "\n";
  ctx.out << "ratio_max_rel_error = " << fmt(worst) << "\n";
  write_joint_momentum(csv, chosen);
}

inline std::vector<double> schedule(double step, long samples) {
  std::vector<double> out;
  for (long k = 0; k < samples; ++k) out.push_back(static_cast<double>(k) * step);
  return out;
}

inline void run_negativity_decay(const Params& p, Context& ctx, std::ostream& csv) {
  const PhysParams phys = p.phys();
  const Grid1D grid = Grid1D::centred(p.positive("half_width"), p.grid_points());
  const Regime regime = parse_regime(p);
  const EuclideanConvention conv = p.choice("convention", {"symmetric", "similarity"}) == "symmetric"
                                       ? EuclideanConvention::Symmetric
                                       : EuclideanConvention::Similarity;
  std::string pot = p.choice("potential", {"auto", "harmonic", "free"});
  if (pot == "auto") pot = regime == Regime::Euclidean ? "harmonic" : "free";
  const Potential v = pot == "harmonic" ? Potential::harmonic(phys.mass, p.positive("omega")) : Potential::free();

  double step = 0.0;
  if (p.str("tau_step") == "auto") {
    // Real-time default: whole multiples of m dx/dp shear the grid onto itself.
    step = regime == Regime::Euclidean ? 0.1 : phys.mass * grid.dx() / grid.dual(phys.hbar).dx();
  } else {
    step = p.positive("tau_step");
  }
  long samples = 0;
  if (p.str("samples") == "auto") {
    samples = regime == Regime::Euclidean ? 32 : 5;
  } else {
    samples = p.integer("samples", 1);
  }
  const long sign = p.integer("cat_sign", -1);
  if (std::abs(sign) != 1) throw ConfigError("field 'cat_sign': must be +1 or -1");
  const WaveFunction cat = cat_state(grid, p.positive("separation"), p.positive("width"), static_cast<int>(sign), phys);
  const auto taus = schedule(step, samples);
  const auto traj = negativity_trajectory(DensityMatrix::pure(cat), Hamiltonian::kinetic_plus(grid, v, phys), taus,
                                          regime, conv);
  write_trajectory(csv, traj);
  ctx.out << "f_first = " << fmt(traj.front().f) << "\n";
  ctx.out << "f_last = " << fmt(traj.back().f) << "\n";
}

inline UnitVector parse_direction(const Params& p, const std::string& key) {
  const auto v = p.reals(key);
  if (v.size() != 3) throw ConfigError("field '" + key + "': expected three components");
  try {
    return UnitVector::normalize({v[0], v[1], v[2]});
  } catch (const InvalidArgument&) {
    throw ConfigError("field '" + key + "': zero vector");
  }
}

inline void run_spin_phase(const Params& p, Context& ctx, std::ostream& csv) {
  const UnitVector reference = parse_direction(p, "reference");
  std::vector<LabelledPath> paths;
  const std::string& file = p.str("paths");
  if (file.empty()) {
    const long segments = p.integer("segments", 3);
    const UnitVector x = UnitVector::plus_x(), y = UnitVector::plus_y(), z = UnitVector::plus_z();
    paths.push_back({0, SphericalPath::equator(static_cast<int>(segments))});
    paths.push_back({1, SphericalPath({x, y, z}, true)});
    paths.push_back({2, SphericalPath({x, y, z}, true).reversed()});
    paths.push_back({3, SphericalPath::latitude_loop(std::numbers::pi / 3.0, static_cast<int>(segments))});
  } else {
    std::ifstream in(file);
    if (!in) throw ConfigError("field 'paths': cannot open '" + file + "'");
    paths = read_paths(in);
  }
  write_phases(csv, paths);
  for (const auto& lp : paths) {
    ctx.out << "loop " << lp.loop_id << ": wz_phase = " << fmt(wz_phase_closed_path(lp.path))
            << "  overlap_phase = " << fmt(std::arg(loop_overlap_product(lp.path, reference))) << "\n";
  }
}

inline TwoQubitState named_state(const std::string& name) {
  if (name == "singlet") return singlet();
  const SpinorState up(1.0, 0.0), down(0.0, 1.0);
  const SpinorState plus(1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2);
  if (name == "cnot") return cnot(TwoQubitState::product(plus, down));
  return TwoQubitState::product(up, up);
}

inline void run_chsh(const Params& p, Context& ctx, std::ostream& csv) {
  const std::string state = p.choice("state", {"singlet", "cnot", "product"});
  const auto restarts = static_cast<int>(p.integer("restarts", 1));
  const auto seed = static_cast<std::uint64_t>(p.integer("seed", 0));
  const ChshOptimum best = chsh_maximize(named_state(state), restarts, seed);
  write_settings(csv, best.settings);
  ctx.out << "S = " << fmt(best.value) << "\n";
}

inline void run_chsh_decay(const Params& p, Context& ctx, std::ostream& csv) {
  const Regime regime = parse_regime(p);
  const auto e = p.reals("energies");
  if (e.size() != 4) throw ConfigError("field 'energies': expected four diagonal entries");
  const DecayOptions opt{p.positive("hbar"), static_cast<int>(p.integer("restarts", 1)),
                         static_cast<std::uint64_t>(p.integer("seed", 0))};
  const auto taus = schedule(p.positive("tau_step"), p.integer("samples", 1));
  const TwoQubitState psi0 = named_state(p.choice("state", {"singlet", "cnot", "product"}));
  const Eigen::Vector4d energies(e[0], e[1], e[2], e[3]);
  const auto traj = regime == Regime::Euclidean ? euclidean_chsh_decay(psi0, energies, taus, opt)
                                                : minkowski_chsh_trajectory(psi0, energies, taus, opt);
  write_decay(csv, traj);
  ctx.out << "chsh_first = " << fmt(traj.front().chsh_max) << "\n";
  ctx.out << "chsh_last = " << fmt(traj.back().chsh_max) << "\n";
}

}  // namespace detail

inline const std::vector<Experiment>& catalog() {
  using namespace detail;
  static const std::vector<Experiment> experiments = {
      {"wigner", "Wigner function of a Gaussian or cat state; optional free shear check",
       with_common({{"state", "cat"}, {"n_points", "256"}, {"half_width", "10"}, {"width", "1"},
                    {"separation", "3"}, {"cat_sign", "-1"}, {"centre", "0"}, {"momentum", "0"},
                    {"shear_time", "0"}}),
       run_wigner},
      {"kernel-check", "time-sliced free kernel against the closed-form kernel",
       with_common({{"n_points", "512"}, {"half_width", "10"}, {"total_time", "1"}, {"regime", "euclidean"},
                    {"slices", "16,32,64,128"}}),
       run_kernel_check},
      {"commutator", "equal-time commutator from the sliced path integral",
       with_common({{"n_points", "256"}, {"half_width", "10"}, {"total_time", "1"}, {"regime", "minkowski"},
                    {"slices", "2,3,4"}}),
       run_commutator},
      {"epr", "EPR pair: momentum anti-correlation and Euclidean/Minkowski weight ratio",
       with_common({{"n_points", "256"}, {"half_width", "6"}, {"correlation_width", "0.05"},
                    {"envelope_width", "1"}, {"time", "0"}, {"regime", "minkowski"}}),
       run_epr},
      {"negativity-decay", "Wigner negativity ratio along imaginary or real time",
       with_common({{"n_points", "256"}, {"half_width", "32"}, {"regime", "euclidean"},
                    {"convention", "symmetric"}, {"potential", "auto"}, {"omega", "1"}, {"separation", "3"},
                    {"width", "1"}, {"cat_sign", "1"}, {"tau_step", "auto"}, {"samples", "auto"}}),
       run_negativity_decay},
      {"spin-phase", "spin coherent-state overlaps and Wess-Zumino loop phases",
       with_common({{"segments", "256"}, {"reference", "0,0,1"}, {"paths", ""}}), run_spin_phase},
      {"chsh", "maximal CHSH value of the singlet or the CNOT-entangled product state",
       with_common({{"state", "singlet"}, {"restarts", "16"}}), run_chsh},
      {"chsh-decay", "CHSH violation under Euclidean filtering with a unitary control",
       with_common({{"state", "singlet"}, {"regime", "euclidean"}, {"energies", "0,1,2,3"}, {"tau_step", "0.25"},
                    {"samples", "33"}, {"restarts", "16"}}),
       run_chsh_decay},
  };
  return experiments;
}

inline const Experiment* find_experiment(const std::string& name) {
  for (const auto& e : catalog()) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

inline void list_experiments(std::ostream& out, bool as_csv) {
  if (as_csv) {
    csv::Writer w(out);
    w.header({"experiment", "description"});
    for (const auto& e : catalog()) w.row(e.name, e.anchor);
    return;
  }
  for (const auto& e : catalog()) out << e.name << std::string(18 - e.name.size(), ' ') << e.anchor << "\n";
}

/// Parses key=value lines. Blank lines and '#' comments are skipped.
inline Values parse_config(std::istream& in, const std::string& source) {
  Values v;
  std::string line;
  for (int line_no = 1; std::getline(in, line); ++line_no) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    line = line.substr(b, e - b + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": expected key=value");
    }
    auto key = line.substr(0, eq);
    auto val = line.substr(eq + 1);
    key.erase(key.find_last_not_of(" \t") + 1);
    val.erase(0, val.find_first_not_of(" \t"));
    v[key] = val;
  }
  return v;
}

/// Applies file values and overrides on top of the experiment defaults,
/// rejecting unknown keys.
inline Values resolve(const Experiment& e, const Values& file_values, const std::vector<std::string>& overrides) {
  Values v = e.defaults;
  v["out_dir"] = "";
  auto apply = [&](const std::string& key, const std::string& val, const std::string& where) {
    if (!v.contains(key)) throw ConfigError(where + ": unknown key '" + key + "' for experiment " + e.name);
    v[key] = val;
  };
  for (const auto& [k, val] : file_values) apply(k, val, "config");
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("argument '" + o + "': expected key=value");
    apply(o.substr(0, eq), o.substr(eq + 1), "argument '" + o + "'");
  }
  if (v["out_dir"].empty()) {
    const char* env = std::getenv("PHASEBELL_OUT_DIR");
    v["out_dir"] = env != nullptr && *env != '\0' ? env : ".";
  }
  return v;
}

inline void write_manifest(std::ostream& out, const Experiment& e, const Values& v) {
  out << "artifact = phasebell " << PHASEBELL_VERSION << "\n";
  out << "experiment = " << e.name << "\n";
  out << "csv = " << e.name << ".csv\n";
  for (const auto& [k, val] : v) {
    if (k != "out_dir") out << k << " = " << val << "\n";
  }
}

/// Runs one experiment; returns the process exit code.
inline int run_experiment(const std::string& name, const Values& file_values,
                          const std::vector<std::string>& overrides, std::ostream& out, std::ostream& err) {
  const Experiment* e = find_experiment(name);
  if (e == nullptr) {
    err << "error: unknown experiment '" << name << "' (see `phasebell list`)\n";
    return kConfigError;
  }
  try {
    const Values v = resolve(*e, file_values, overrides);
    const Params params(v);
    const std::filesystem::path dir(v.at("out_dir"));
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
      throw ConfigError("field 'out_dir': cannot create directory '" + dir.string() + "'");
    }
    std::ostringstream table;
    Context ctx{dir, out};
    e->run(params, ctx, table);

    const auto csv_path = dir / (e->name + ".csv");
    std::ofstream csv_file(csv_path, std::ios::binary);
    csv_file << table.str();
    std::ofstream manifest(dir / (e->name + ".manifest"), std::ios::binary);
    write_manifest(manifest, *e, v);
    if (!csv_file || !manifest) throw ConfigError("field 'out_dir': cannot write into '" + dir.string() + "'");
    return kOk;
  } catch (const NumericalGuard& g) {
    err << "error: numerical guard '" << g.guard() << "' tripped: " << g.what() << "\n";
    return kGuardError;
  } catch (const InvalidArgument& ex) {
    err << "error: " << ex.what() << "\n";
    return kConfigError;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return kFailure;
  }
}

/// Full command-line entry point.
inline int main_with_args(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"phasebell: path-integral, phase-space and Bell-test experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(PHASEBELL_VERSION));

  bool list_csv = false;
  auto* list = app.add_subcommand("list", "print the experiment catalog");
  list->add_flag("--csv", list_csv, "emit the catalog as CSV");

  std::string experiment;
  std::string config_path;
  std::vector<std::string> overrides;
  auto* run = app.add_subcommand("run", "run one experiment");
  run->add_option("experiment", experiment, "experiment name")->required();
  run->add_option("--config,-c", config_path, "key=value config file");
  run->add_option("overrides", overrides, "key=value overrides");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForVersion&) {
    out << PHASEBELL_VERSION << "\n";
    return kOk;
  } catch (const CLI::ParseError& pe) {
    if (pe.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "error: " << pe.what() << "\n";
    return kConfigError;
  }

  if (list->parsed()) {
    list_experiments(out, list_csv);
    return kOk;
  }
  Values file_values;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      err << "error: cannot open config file '" << config_path << "'\n";
      return kConfigError;
    }
    try {
      file_values = parse_config(in, config_path);
    } catch (const ConfigError& ex) {
      err << "error: " << ex.what() << "\n";
      return kConfigError;
    }
  }
  return run_experiment(experiment, file_values, overrides, out, err);
}

}  // namespace phasebell::cli
