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

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "mipt/csv.hpp"
#include "mipt/plan.hpp"

using namespace mipt;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("mipt_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static inline int counter = 0;
};

const char* kPlanJson = R"({
  "L": [8, 16],
  "alpha": [2.0],
  "p": {"start": 0.2, "stop": 0.4, "step": 0.2},
  "observables": ["tau_p", "half_chain", "global_s"],
  "n": 3,
  "depth": {"tau_p": 2, "half_chain": 2, "global_s": 2},
  "seed": 99,
  "workers": 1
})";

}  // namespace

TEST_CASE("csv round trip with tags") {
  TempDir tmp;
  CsvTable t;
  t.columns = {"trajectory_index", "value"};
  t.tags = {{"observable", "tau_p"}, {"L", "16"}, {"p", "0.25"}};
  t.rows = {{0, 12}, {1, 7.5}, {2, 1e-9}};
  const auto path = (tmp.path / "cell.csv").string();
  write_csv(path, t);
  const CsvTable read = read_csv(path);
  CHECK(read.columns == t.columns);
  CHECK(read.tags == t.tags);
  REQUIRE(read.rows.size() == 3);
  CHECK(read.rows[1][1] == doctest::Approx(7.5));
  CHECK(read.tag_as_int("L") == 16);
  CHECK(read.tag_as_double("p") == doctest::Approx(0.25));
}

TEST_CASE("csv parse errors carry line numbers") {
  TempDir tmp;
  const auto path = (tmp.path / "bad.csv").string();
  {
    std::ofstream out(path);
    out << "a,b\n# k=v\n1,2\n3,oops\n";
  }
  try {
    read_csv(path);
    FAIL("expected CsvError");
  } catch (const CsvError& e) {
    CHECK(e.line_number == 4);
  }
  {
    std::ofstream out(path);
    out << "a,b\n# k=v\n1,2,3\n";
  }
  try {
    read_csv(path);
    FAIL("expected CsvError");
  } catch (const CsvError& e) {
    CHECK(e.line_number == 3);
  }
  {
    std::ofstream out(path);
    out << "a,b\nno-hash-line\n";
  }
  CHECK_THROWS_AS(read_csv(path), CsvError);
}

TEST_CASE("plan parsing, serialization and round trip") {
  const ExperimentPlan plan = parse_plan(kPlanJson);
  CHECK(plan.sizes == std::vector<int>{8, 16});
  REQUIRE(plan.ps.size() == 2);
  CHECK(plan.ps[0] == doctest::Approx(0.2));
  CHECK(plan.ps[1] == doctest::Approx(0.4));
  CHECK(plan.depth_for("tau_p") == 2);
  CHECK(plan.depth_for("iab") == 32);  // default
  const std::string once = serialize_plan(plan);
  const std::string twice = serialize_plan(parse_plan(once));
  CHECK(once == twice);
  CHECK(plan_hash(plan) == plan_hash(parse_plan(once)));

  ExperimentPlan other = plan;
  other.seed = 100;
  CHECK(plan_hash(other) != plan_hash(plan));
}

TEST_CASE("plan validation lists every offender") {
  ExperimentPlan plan = parse_plan(kPlanJson);
  plan.sizes = {2};
  plan.ps = {1.5};
  plan.observables = {"iab", "nonsense"};
  const auto problems = plan.validate();
  CHECK(problems.size() >= 4);  // L<4, L%8, p range, unknown observable
}

TEST_CASE("simulate writes cells, a manifest, and is deterministic") {
  TempDir tmp1, tmp2;
  ExperimentPlan plan = parse_plan(kPlanJson);
  plan.out_dir = (tmp1.path / "run").string();
  const SimulateResult res = simulate(plan);
  CHECK(res.cells_failed == 0);
  CHECK(res.cells_total == 12);

  const auto manifest =
      nlohmann::json::parse(slurp(tmp1.path / "run" / "manifest.json"));
  CHECK(manifest["status"] == "complete");
  CHECK(manifest["seed"] == 99);
  CHECK(manifest["files"].size() == 12);
  CHECK(manifest["config_hash"] == plan_hash(plan));

  for (const auto& f : res.files)
    CHECK(fs::exists(tmp1.path / "run" / f));

  // Re-run into a second directory: byte-identical data files, and the
  // worker count must not matter.
  ExperimentPlan plan2 = plan;
  plan2.out_dir = (tmp2.path / "run").string();
  plan2.workers = 3;
  simulate(plan2);
  for (const auto& f : res.files)
    CHECK(slurp(tmp1.path / "run" / f) == slurp(tmp2.path / "run" / f));
}

TEST_CASE("simulate with n = 0 writes headers plus manifest") {
  TempDir tmp;
  ExperimentPlan plan = parse_plan(kPlanJson);
  plan.n_samples = 0;
  plan.observables = {"half_chain"};
  plan.out_dir = (tmp.path / "empty").string();
  const SimulateResult res = simulate(plan);
  CHECK(res.cells_failed == 0);
  const CsvTable t =
      read_csv((tmp.path / "empty" / res.files[0]).string());
  CHECK(t.rows.empty());
  CHECK(t.tag_as_int("n") == 0);
}

TEST_CASE("output directory env override applies") {
  TempDir tmp;
  ExperimentPlan plan = parse_plan(kPlanJson);
  plan.observables = {"half_chain"};
  plan.sizes = {8};
  plan.n_samples = 1;
  plan.out_dir = (tmp.path / "ignored").string();
  const std::string target = (tmp.path / "actual").string();
  ::setenv("MIPT_OUT_DIR", target.c_str(), 1);
  simulate(plan);
  ::unsetenv("MIPT_OUT_DIR");
  CHECK(fs::exists(fs::path(target) / "manifest.json"));
  CHECK(!fs::exists(tmp.path / "ignored"));
}

TEST_CASE("cell file names are stable") {
  CHECK(cell_file_name("tau_p", 64, 3.5, 0.155) == "tau_p_L64_a3.5_p0.155.csv");
  CHECK(cell_file_name("iab", 128, 2.25, 0.3) == "iab_L128_a2.25_p0.3.csv");
}
