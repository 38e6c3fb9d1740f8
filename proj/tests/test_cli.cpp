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


#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "catch_amalgamated.hpp"
#include "cli.hpp"

namespace fs = std::filesystem;
using Catch::Approx;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "phasebell");
  std::ostringstream out, err;
  const int code = phasebell::cli::main_with_args(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("phasebell_test_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("catalog listing", "[cli]") {
  const auto text = run({"list"});
  CHECK(text.code == 0);
  const auto rows = lines(text.out);
  CHECK(rows.size() == 8);
  CHECK(text.out.find("CNOT") != std::string::npos);

  const auto table = run({"list", "--csv"});
  CHECK(table.code == 0);
  const auto csv_rows = lines(table.out);
  REQUIRE(csv_rows.size() == 9);
  CHECK(csv_rows[0] == "experiment,description");
  for (std::size_t k = 1; k < csv_rows.size(); ++k) CHECK(phasebell::csv::split(csv_rows[k]).size() == 2);
}

TEST_CASE("chsh prints a single S line", "[cli]") {
  const auto dir = scratch_dir("chsh");
  const auto r = run({"run", "chsh", "out_dir=" + dir.string()});
  CHECK(r.code == 0);
  const auto out = lines(r.out);
  REQUIRE(out.size() == 1);
  REQUIRE(out[0].rfind("S = 2.828427", 0) == 0);
  CHECK(std::stod(out[0].substr(4)) == Approx(2.0 * std::sqrt(2.0)).margin(1e-6));
  CHECK(fs::exists(dir / "chsh.csv"));
  const auto manifest = slurp(dir / "chsh.manifest");
  CHECK(manifest.find("experiment = chsh") != std::string::npos);
  CHECK(manifest.find("restarts = 16") != std::string::npos);
  CHECK(manifest.find("artifact = phasebell") == 0);
}

TEST_CASE("configuration errors exit with status 2", "[cli]") {
  const auto dir = scratch_dir("errors");
  const std::string od = "out_dir=" + dir.string();
  const auto small = run({"run", "wigner", "n_points=4", od});
  CHECK(small.code == 2);
  CHECK(small.err.find("n_points") != std::string::npos);
  CHECK(run({"run", "wigner", "colour=blue", od}).code == 2);
  CHECK(run({"run", "no-such-experiment", od}).code == 2);
  CHECK(run({"run", "chsh", "state=werner", od}).code == 2);
  CHECK(run({"run", "chsh", "restarts=abc", od}).code == 2);
  CHECK(run({"run", "kernel-check", "slices=16,abc", od}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({}).code == 2);

  fs::create_directories(dir);
  const auto cfg = dir / "bad.cfg";
  std::ofstream(cfg) << "# comment\nstate = singlet\nthis line has no equals\n";
  const auto bad = run({"run", "chsh", "--config", cfg.string(), od});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("bad.cfg:3") != std::string::npos);
}

TEST_CASE("config file values and overrides", "[cli]") {
  const auto dir = scratch_dir("config");
  fs::create_directories(dir);
  const auto cfg = dir / "run.cfg";
  std::ofstream(cfg) << "state = product   # unentangled\nrestarts = 4\n";
  const auto r = run({"run", "chsh", "-c", cfg.string(), "out_dir=" + dir.string()});
  CHECK(r.code == 0);
  CHECK(std::stod(lines(r.out).at(0).substr(4)) <= 2.0 + 1e-6);
  const auto manifest = slurp(dir / "chsh.manifest");
  CHECK(manifest.find("state = product") != std::string::npos);

  const auto over = run({"run", "chsh", "-c", cfg.string(), "state=cnot", "out_dir=" + dir.string()});
  CHECK(std::stod(lines(over.out).at(0).substr(4)) == Approx(2.0 * std::sqrt(2.0)).margin(1e-6));
}

TEST_CASE("numerical guards exit with status 3", "[cli]") {
  const auto dir = scratch_dir("guard");
  const auto r = run({"run", "wigner", "n_points=64", "half_width=8", "shear_time=40", "out_dir=" + dir.string()});
  CHECK(r.code == 3);
  CHECK(r.err.find("grid-escape") != std::string::npos);
}

TEST_CASE("negativity-decay default output is non-increasing", "[cli]") {
  const auto dir = scratch_dir("negativity");
  const auto r = run({"run", "negativity-decay", "n_points=128", "out_dir=" + dir.string()});
  REQUIRE(r.code == 0);
  std::ifstream in(dir / "negativity-decay.csv");
  const auto rows = phasebell::csv::read_table(in, {"tau", "f", "purity", "trace_raw"});
  REQUIRE(rows.size() == 32);
  for (std::size_t k = 1; k < rows.size(); ++k) CHECK(rows[k][1] <= rows[k - 1][1] + 1e-6);
}

TEST_CASE("repeated runs write byte-identical CSV", "[cli]") {
  const std::vector<std::vector<std::string>> cases = {
      {"wigner", "n_points=64"},
      {"kernel-check", "n_points=128", "slices=4,8"},
      {"commutator"},
      {"epr", "n_points=64", "half_width=5", "correlation_width=0.3"},
      {"spin-phase", "segments=32"},
      {"chsh", "seed=9"},
      {"chsh-decay", "samples=5"},
  };
  for (const auto& c : cases) {
    std::vector<std::string> args{"run"};
    args.insert(args.end(), c.begin(), c.end());
    const auto a = scratch_dir("det_a");
    const auto b = scratch_dir("det_b");
    auto with = [&](const fs::path& d) {
      auto v = args;
      v.push_back("out_dir=" + d.string());
      return v;
    };
    REQUIRE(run(with(a)).code == 0);
    REQUIRE(run(with(b)).code == 0);
    const std::string name = c.front();
    CHECK(slurp(a / (name + ".csv")) == slurp(b / (name + ".csv")));
    CHECK(!slurp(a / (name + ".csv")).empty());
  }
}

TEST_CASE("spin-phase reads loops from a file", "[cli]") {
  const auto dir = scratch_dir("paths");
  fs::create_directories(dir);
  const auto loops = dir / "loops.csv";
  std::ofstream(loops) << "loop_id,n_x,n_y,n_z\n5,1,0,0\n5,0,1,0\n5,0,0,1\n";
  const auto r = run({"run", "spin-phase", "paths=" + loops.string(), "out_dir=" + dir.string()});
  REQUIRE(r.code == 0);
  std::ifstream in(dir / "spin-phase.csv");
  const auto rows = phasebell::csv::read_table(in, {"loop_id", "solid_angle", "wz_phase"});
  REQUIRE(rows.size() == 1);
  CHECK(rows[0][2] == Approx(std::numbers::pi / 4));
  CHECK(run({"run", "spin-phase", "paths=" + (dir / "missing.csv").string(), "out_dir=" + dir.string()}).code == 2);
}

TEST_CASE("version and help", "[cli]") {
  const auto v = run({"--version"});
  CHECK(v.code == 0);
  CHECK(v.out.find(PHASEBELL_VERSION) != std::string::npos);
  CHECK(run({"--help"}).code == 0);
}
