// Copyright 2026 The mipt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// End-to-end checks of the command-line driver (spawned as a subprocess).

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mipt/csv.hpp"
#include "mipt/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("mipt_cli_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int run_cli(const std::string& args) {
  const std::string cmd = std::string(MIPT_CLI_PATH) + " " + args;
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("cli: invalid plan exits with the validation code") {
  TempDir tmp;
  const auto cfg = tmp.path / "bad.json";
  std::ofstream(cfg) << R"({"L": [2], "alpha": [2.0], "p": [0.5],
                            "observables": ["half_chain"]})";
  CHECK(run_cli("simulate --config " + cfg.string() + " >/dev/null 2>&1") ==
        1);
}

TEST_CASE("cli: simulate then powerfit and collapse round trip") {
  TempDir tmp;
  const auto cfg = tmp.path / "plan.json";
  std::ofstream(cfg) << R"({
    "L": [8, 16],
    "alpha": [3.5],
    "p": [0.4, 0.6],
    "observables": ["tau_p"],
    "n": 6,
    "depth": 4,
    "seed": 5
  })";
  const auto out = tmp.path / "data";
  CHECK(run_cli("simulate --config " + cfg.string() + " --out " +
                out.string() + " >/dev/null") == 0);
  CHECK(fs::exists(out / "manifest.json"));
  CHECK(fs::exists(out / "tau_p_L16_a3.5_p0.4.csv"));

  // powerfit on an exact power law.
  const auto fixture = tmp.path / "power.csv";
  {
    mipt::CsvTable t;
    t.columns = {"L", "value"};
    t.tags["units"] = "bits";
    for (double l : {8.0, 16.0, 32.0, 64.0})
      t.rows.push_back({l, 3.0 * std::sqrt(l)});
    mipt::write_csv(fixture.string(), t);
  }
  const auto fit_path = tmp.path / "power.json";
  CHECK(run_cli("powerfit --in " + fixture.string() + " --out " +
                fit_path.string() + " >/dev/null") == 0);
  const json fit = json::parse(slurp(fit_path));
  CHECK(fit["mu"].get<double>() == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(fit["amplitude"].get<double>() == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("cli: collapse on a synthetic summary fixture") {
  TempDir tmp;
  // Planted scaling form y = L^z g((p - p_c) L^{1/nu}).
  const double p_c = 0.5, nu = 1.3, z = 1.0;
  mipt::CsvTable t;
  t.columns = {"L", "p", "y", "dy"};
  t.tags["form"] = "tau_p";
  for (int L : {16, 32, 64, 128}) {
    for (int k = 0; k < 41; ++k) {
      const double p = 0.3 + 0.4 * k / 40.0;
      const double x = (p - p_c) * std::pow(L, 1.0 / nu);
      const double y = std::pow(L, z) * (0.2 + 1.0 / (1.0 + x * x));
      t.rows.push_back({static_cast<double>(L), p, y, 0.01 * y});
    }
  }
  const auto fixture = tmp.path / "summary.csv";
  mipt::write_csv(fixture.string(), t);
  const auto prefix = (tmp.path / "fit").string();
  CHECK(run_cli("collapse --summary --inputs " + fixture.string() +
                " --form tau_p --out " + prefix + " >/dev/null") == 0);
  const json fit = json::parse(slurp(prefix + ".json"));
  CHECK(fit["p_c"].get<double>() == doctest::Approx(p_c).epsilon(0.02));
  CHECK(fit["nu"].get<double>() == doctest::Approx(nu).epsilon(0.1));
  CHECK(fit["exponent"].get<double>() == doctest::Approx(z).epsilon(0.05));
  CHECK(fs::exists(prefix + "_rescaled.csv"));
}

TEST_CASE("cli: crossings emits the exponent curve") {
  TempDir tmp;
  const auto out = (tmp.path / "cross.csv").string();
  CHECK(run_cli("crossings --alpha 1.5 --L 64 128 256 512 --out " + out +
                " >/dev/null") == 0);
  const json exps = json::parse(slurp(out + ".json"));
  REQUIRE(exps.size() == 1);
  CHECK(std::abs(exps[0]["exponent"].get<double>() - 0.5) < 0.12);
  const mipt::CsvTable table = mipt::read_csv(out);
  CHECK(table.rows.size() == 4);
}

TEST_CASE("cli: heff-scan emits saturating and growing branches") {
  TempDir tmp;
  const auto out = (tmp.path / "heff.csv").string();
  CHECK(run_cli("heff-scan --L 8 --alpha 2.0 --gamma-over-j 0.2 20 --out " +
                out + " 2>/dev/null >/dev/null") == 0);
  const mipt::CsvTable t = mipt::read_csv(out);
  auto s2 = [&](double g, int len) {
    for (const auto& row : t.rows)
      if (row[0] == g && row[1] == len) return row[2];
    FAIL("missing row for gamma ", g, " len ", len);
    return 0.0;
  };
  // Paramagnetic branch: full curve, saturating at the midpoint.
  CHECK(std::abs(s2(20.0, 4) - s2(20.0, 3)) < 0.1);
  // Ferromagnetic branch: steep growth on the clean points; the deeper
  // ones fall below the noise floor and are omitted from the output.
  CHECK(s2(0.2, 2) - s2(0.2, 1) > 0.5);
  CHECK(t.rows.size() >= 6);
}

TEST_CASE("cli: malformed csv input exits with the validation code") {
  TempDir tmp;
  const auto bad = tmp.path / "bad.csv";
  std::ofstream(bad) << "L,value\n# t=v\n1,notanumber\n";
  CHECK(run_cli("powerfit --in " + bad.string() + " >/dev/null 2>&1") == 1);
}
