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

#include "mipt/plan.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "mipt/csv.hpp"
#include "mipt/observables.hpp"

#ifndef MIPT_GIT_DESCRIBE
#define MIPT_GIT_DESCRIBE "unknown"
#endif

namespace mipt {

namespace {

using nlohmann::json;

std::string format_short(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::vector<double> parse_sweep(const json& j, const std::string& key) {
  std::vector<double> out;
  if (j.is_array()) {
    for (const auto& v : j) out.push_back(v.get<double>());
  } else if (j.is_object()) {
    const double start = j.at("start").get<double>();
    const double stop = j.at("stop").get<double>();
    const double step = j.at("step").get<double>();
    if (step <= 0.0)
      throw std::runtime_error("sweep '" + key + "': step must be positive");
    const int count =
        static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (int i = 0; i < count; ++i) out.push_back(start + i * step);
  } else if (j.is_number()) {
    out.push_back(j.get<double>());
  } else {
    throw std::runtime_error("sweep '" + key +
                             "': expected list, number or start/stop/step");
  }
  return out;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

int ExperimentPlan::default_depth(const std::string& observable) {
  if (observable == "tau_p") return 16;
  return 32;
}

int ExperimentPlan::depth_for(const std::string& observable) const {
  auto it = depth.find(observable);
  return it != depth.end() ? it->second : default_depth(observable);
}

std::vector<std::string> ExperimentPlan::validate() const {
  std::vector<std::string> problems;
  if (sizes.empty()) problems.push_back("no system sizes");
  for (int L : sizes) {
    if (L < 4) problems.push_back("L=" + std::to_string(L) + " below 4");
    for (const auto& obs : observables)
      if (obs == "iab" && L % iab_region_divisor != 0)
        problems.push_back("L=" + std::to_string(L) +
                           " not divisible by iab region divisor");
  }
  if (alphas.empty()) problems.push_back("no alpha values");
  for (double a : alphas)
    if (a < 0.0) problems.push_back("alpha=" + format_short(a) + " negative");
  if (ps.empty()) problems.push_back("no p values");
  for (double p : ps)
    if (p < 0.0 || p > 1.0)
      problems.push_back("p=" + format_short(p) + " outside [0,1]");
  if (observables.empty()) problems.push_back("no observables");
  for (const auto& obs : observables)
    if (obs != "half_chain" && obs != "iab" && obs != "tau_p" &&
        obs != "global_s")
      problems.push_back("unknown observable '" + obs + "'");
  if (n_samples < 0) problems.push_back("n negative");
  for (const auto& [obs, d] : depth)
    if (d < 1) problems.push_back("depth for " + obs + " below 1");
  if (workers < 1) problems.push_back("workers below 1");
  return problems;
}

ExperimentPlan parse_plan(const std::string& json_text) {
  json j = json::parse(json_text);
  ExperimentPlan plan;
  for (double v : parse_sweep(j.at("L"), "L"))
    plan.sizes.push_back(static_cast<int>(std::lround(v)));
  plan.alphas = parse_sweep(j.at("alpha"), "alpha");
  plan.ps = parse_sweep(j.at("p"), "p");
  plan.observables = j.at("observables").get<std::vector<std::string>>();
  plan.n_samples = j.value("n", 100);
  if (j.contains("depth")) {
    if (j["depth"].is_object()) {
      for (auto it = j["depth"].begin(); it != j["depth"].end(); ++it)
        plan.depth[it.key()] = it.value().get<int>();
    } else {
      for (const auto& obs : plan.observables)
        plan.depth[obs] = j["depth"].get<int>();
    }
  }
  plan.gates_per_layer = 0;
  if (j.contains("gates_per_layer")) {
    const auto& g = j["gates_per_layer"];
    if (g.is_string()) {
      const std::string s = g.get<std::string>();
      if (s == "L/2")
        plan.gates_per_layer = 0;
      else if (s == "L")
        plan.gates_per_layer = -1;  // resolved per cell
      else
        throw std::runtime_error("gates_per_layer: expected \"L/2\" or \"L\"");
    } else {
      plan.gates_per_layer = g.get<int>();
    }
  }
  const std::string scheme = j.value("measurement_scheme", "fixed");
  if (scheme == "fixed")
    plan.scheme = MeasurementScheme::kFixedCount;
  else if (scheme == "bernoulli")
    plan.scheme = MeasurementScheme::kPerSiteBernoulli;
  else
    throw std::runtime_error("measurement_scheme: 'fixed' or 'bernoulli'");
  const std::string scramble = j.value("scramble", "uniform");
  if (scramble == "uniform")
    plan.scramble = ScrambleMethod::kUniformSymplectic;
  else if (scramble == "brickwork")
    plan.scramble = ScrambleMethod::kBrickwork;
  else
    throw std::runtime_error("scramble: 'uniform' or 'brickwork'");
  plan.iab_region_divisor = j.value("iab_region_divisor", 8);
  plan.seed = j.value("seed", std::uint64_t{1});
  plan.workers = j.value("workers", 1);
  plan.out_dir = j.value("out_dir", std::string("data"));
  return plan;
}

std::string serialize_plan(const ExperimentPlan& plan) {
  json j;
  j["L"] = plan.sizes;
  j["alpha"] = plan.alphas;
  j["p"] = plan.ps;
  j["observables"] = plan.observables;
  j["n"] = plan.n_samples;
  json d = json::object();
  for (const auto& obs : plan.observables) d[obs] = plan.depth_for(obs);
  j["depth"] = d;
  j["gates_per_layer"] =
      plan.gates_per_layer == 0
          ? json("L/2")
          : (plan.gates_per_layer < 0 ? json("L") : json(plan.gates_per_layer));
  j["measurement_scheme"] =
      plan.scheme == MeasurementScheme::kFixedCount ? "fixed" : "bernoulli";
  j["scramble"] = plan.scramble == ScrambleMethod::kUniformSymplectic
                      ? "uniform"
                      : "brickwork";
  j["iab_region_divisor"] = plan.iab_region_divisor;
  j["seed"] = plan.seed;
  j["workers"] = plan.workers;
  j["out_dir"] = plan.out_dir;
  return j.dump(2);
}

std::uint64_t plan_hash(const ExperimentPlan& plan) {
  return fnv1a(serialize_plan(plan));
}

std::string cell_file_name(const std::string& observable, int L, double alpha,
                           double p) {
  return observable + "_L" + std::to_string(L) + "_a" + format_short(alpha) +
         "_p" + format_short(p) + ".csv";
}

namespace {

struct Cell {
  std::string observable;
  int L;
  double alpha;
  double p;
};

CsvTable cell_table(const ExperimentPlan& plan, const Cell& cell,
                    const EnsembleRecord& rec, std::uint64_t cell_seed) {
  CsvTable t;
  t.tags["observable"] = cell.observable;
  t.tags["L"] = std::to_string(cell.L);
  t.tags["alpha"] = format_short(cell.alpha);
  t.tags["p"] = format_short(cell.p);
  t.tags["n"] = std::to_string(plan.n_samples);
  t.tags["depth"] = std::to_string(plan.depth_for(cell.observable));
  t.tags["seed"] = std::to_string(cell_seed);
  t.tags["units"] = cell.observable == "tau_p" ? "steps" : "bits";
  if (cell.observable == "global_s") {
    t.columns = {"trajectory_index", "t", "value"};
    for (std::size_t i = 0; i < rec.series.size(); ++i)
      for (std::size_t k = 0; k < rec.times.size(); ++k)
        t.rows.push_back({static_cast<double>(i),
                          static_cast<double>(rec.times[k]),
                          rec.series[i][k]});
  } else if (cell.observable == "tau_p") {
    t.tags["cap"] = std::to_string(
        static_cast<std::int64_t>(plan.depth_for(cell.observable)) * cell.L);
    t.columns = {"trajectory_index", "value", "censored"};
    for (std::size_t i = 0; i < rec.raw.size(); ++i)
      t.rows.push_back({static_cast<double>(i), rec.raw[i],
                        static_cast<double>(rec.censored[i])});
  } else {
    t.columns = {"trajectory_index", "value"};
    for (std::size_t i = 0; i < rec.raw.size(); ++i)
      t.rows.push_back({static_cast<double>(i), rec.raw[i]});
  }
  return t;
}

}  // namespace

SimulateResult simulate(const ExperimentPlan& plan) {
  const auto problems = plan.validate();
  if (!problems.empty()) {
    std::string msg = "invalid plan:";
    for (const auto& p : problems) msg += "\n  - " + p;
    throw std::domain_error(msg);
  }

  std::string out_dir = plan.out_dir;
  if (const char* env = std::getenv("MIPT_OUT_DIR")) out_dir = env;
  std::filesystem::create_directories(out_dir);

  std::vector<Cell> cells;
  for (const auto& obs : plan.observables)
    for (int L : plan.sizes)
      for (double alpha : plan.alphas)
        for (double p : plan.ps) cells.push_back({obs, L, alpha, p});

  SimulateResult result;
  result.cells_total = static_cast<int>(cells.size());
  for (const auto& cell : cells)
    result.files.push_back(
        cell_file_name(cell.observable, cell.L, cell.alpha, cell.p));

  // Manifest goes first, marked incomplete until the run finishes.
  const auto t0 = std::chrono::steady_clock::now();
  const std::string manifest_path = out_dir + "/manifest.json";
  nlohmann::json manifest;
  manifest["config"] = nlohmann::json::parse(serialize_plan(plan));
  manifest["config_hash"] = plan_hash(plan);
  manifest["seed"] = plan.seed;
  manifest["build"] = MIPT_GIT_DESCRIBE;
  manifest["status"] = "incomplete";
  manifest["files"] = result.files;
  auto write_manifest = [&] {
    std::ofstream out(manifest_path, std::ios::binary);
    out << manifest.dump(2) << "\n";
  };
  write_manifest();

  for (std::size_t c = 0; c < cells.size(); ++c) {
    const Cell& cell = cells[c];
    CircuitConfig cfg;
    cfg.num_qubits = cell.L;
    cfg.alpha = cell.alpha;
    cfg.p = cell.p;
    cfg.depth = plan.depth_for(cell.observable);
    cfg.gates_per_layer =
        plan.gates_per_layer < 0 ? cell.L : plan.gates_per_layer;
    cfg.scheme = plan.scheme;
    cfg.scramble = plan.scramble;
    // Per-cell seed keyed by the cell identity, not its sweep position, so
    // reordering a sweep list never changes any cell's data.
    const std::uint64_t cell_seed =
        splitmix64(plan.seed ^ fnv1a(result.files[c]));
    cfg.seed = cell_seed;
    try {
      EnsembleRecord rec;
      if (cell.observable == "half_chain")
        rec = estimate_half_chain(cfg, plan.n_samples, plan.workers);
      else if (cell.observable == "iab")
        rec = estimate_mutual_information(cfg, plan.n_samples, plan.workers,
                                          plan.iab_region_divisor);
      else if (cell.observable == "tau_p")
        rec = estimate_purification_time(cfg, plan.n_samples, plan.workers);
      else
        rec = estimate_global_entropy_series(cfg, plan.n_samples, {},
                                             plan.workers);
      write_csv(out_dir + "/" + result.files[c],
                cell_table(plan, cell, rec, cell_seed));
    } catch (const std::exception& e) {
      ++result.cells_failed;
      manifest["errors"].push_back(result.files[c] + std::string(": ") +
                                   e.what());
    }
  }

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  manifest["wall_time_s"] = wall;
  manifest["status"] = result.cells_failed == 0 ? "complete" : "incomplete";
  write_manifest();
  return result;
}

}  // namespace mipt
