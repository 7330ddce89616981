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
// Command-line driver: simulate / collapse / powerfit / crossings /
// heff-scan. Exit codes: 0 success, 1 validation error, 2 runtime error,
// 3 partial run (manifest marked incomplete).

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "mipt/csv.hpp"
#include "mipt/heff.hpp"
#include "mipt/observables.hpp"
#include "mipt/plan.hpp"
#include "mipt/scaling.hpp"

namespace {

using nlohmann::json;
using namespace mipt;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitPartial = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> expand_inputs(const std::vector<std::string>& args) {
  std::vector<std::string> files;
  for (const auto& a : args) {
    if (std::filesystem::is_directory(a)) {
      for (const auto& entry : std::filesystem::directory_iterator(a))
        if (entry.path().extension() == ".csv")
          files.push_back(entry.path().string());
    } else {
      files.push_back(a);
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

CollapseForm parse_form(const std::string& name) {
  if (name == "tau_p") return CollapseForm::kTauP;
  if (name == "iab") return CollapseForm::kIab;
  if (name == "global_s") return CollapseForm::kGlobalS;
  throw std::domain_error("--form must be tau_p, iab or global_s");
}

json fit_to_json(const ScalingFit& fit, const std::string& form) {
  json j;
  j["form"] = form;
  j["p_c"] = fit.p_c;
  j["nu"] = fit.nu;
  j["exponent"] = fit.exponent;
  j["quality"] = fit.quality;
  j["converged"] = fit.converged;
  if (fit.n_boot > 0) {
    j["n_boot"] = fit.n_boot;
    j["dropped_replicates"] = fit.dropped_replicates;
    j["flagged"] = fit.flagged;
    j["ci95"] = {{"p_c", fit.ci_p_c},
                 {"nu", fit.ci_nu},
                 {"exponent", fit.ci_exponent}};
  }
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(const std::string& config_path,
                 const std::optional<std::string>& out,
                 std::optional<int> workers, std::optional<std::uint64_t> seed,
                 std::optional<int> n_override) {
  ExperimentPlan plan = parse_plan(read_file(config_path));
  if (out) plan.out_dir = *out;
  if (workers) plan.workers = *workers;
  if (seed) plan.seed = *seed;
  if (n_override) plan.n_samples = *n_override;
  const auto problems = plan.validate();
  if (!problems.empty()) {
    std::cerr << "invalid plan:\n";
    for (const auto& p : problems) std::cerr << "  - " << p << "\n";
    return kExitValidation;
  }
  const SimulateResult res = simulate(plan);
  std::cout << "cells: " << res.cells_total - res.cells_failed << "/"
            << res.cells_total << " written\n";
  return res.cells_failed == 0 ? kExitOk : kExitPartial;
}

// ---------------------------------------------------------------- collapse

struct LoadedCells {
  std::vector<RawCell> raw;        // tau_p / iab / half_chain
  std::vector<SeriesCell> series;  // global_s
};

LoadedCells load_cells(const std::vector<std::string>& files,
                       const std::string& form_name) {
  LoadedCells out;
  for (const auto& path : files) {
    const CsvTable t = read_csv(path);
    if (t.tags.count("observable") && t.tag("observable") != form_name)
      continue;
    const int L = t.tag_as_int("L");
    const double p = t.tag_as_double("p");
    if (form_name == "global_s") {
      const int it = t.column_index("t");
      const int iv = t.column_index("value");
      if (it < 0 || iv < 0)
        throw std::runtime_error(path + ": expected columns t,value");
      // Aggregate the per-trajectory series into mean/se per time.
      std::map<double, std::pair<double, double>> acc;  // t -> (sum, sumsq)
      std::map<double, int> count;
      for (const auto& row : t.rows) {
        acc[row[it]].first += row[iv];
        acc[row[it]].second += row[iv] * row[iv];
        count[row[it]]++;
      }
      SeriesCell cell{L, p, {}, {}, {}};
      for (const auto& [time, sums] : acc) {
        const int n = count[time];
        const double mean = sums.first / n;
        const double var =
            n > 1 ? std::max(0.0, (sums.second - n * mean * mean) / (n - 1))
                  : 1.0;
        cell.times.push_back(time);
        cell.mean_s.push_back(mean);
        cell.se_s.push_back(std::sqrt(var / std::max(1, n)));
      }
      out.series.push_back(std::move(cell));
    } else {
      const int iv = t.column_index("value");
      if (iv < 0) throw std::runtime_error(path + ": expected column value");
      const int ic = t.column_index("censored");
      RawCell cell{L, p, {}, {}};
      for (const auto& row : t.rows) {
        cell.values.push_back(row[iv]);
        if (ic >= 0) cell.censored.push_back(row[ic] != 0.0);
      }
      out.raw.push_back(std::move(cell));
    }
  }
  return out;
}

/// Summary CSV mode: columns (L, p, y[, dy]); a missing dy column falls
/// back to a Poisson-style estimate sqrt(max(|y|, 1)) with a warning.
std::vector<CollapsePoint> load_summary_points(const std::string& path) {
  const CsvTable t = read_csv(path);
  const int il = t.column_index("L");
  const int ip = t.column_index("p");
  const int iy = t.column_index("y");
  const int idy = t.column_index("dy");
  if (il < 0 || ip < 0 || iy < 0)
    throw std::runtime_error(path + ": expected columns L,p,y[,dy]");
  bool warned = false;
  std::vector<CollapsePoint> pts;
  for (const auto& row : t.rows) {
    CollapsePoint pt;
    pt.num_qubits = static_cast<int>(row[il]);
    pt.p = row[ip];
    pt.y = row[iy];
    if (idy >= 0) {
      pt.dy = row[idy];
    } else {
      pt.dy = std::sqrt(std::max(std::abs(pt.y), 1.0));
      if (!warned) {
        std::cerr << "warning: no dy column; using Poisson-style estimate\n";
        warned = true;
      }
    }
    pts.push_back(pt);
  }
  return pts;
}

int cmd_collapse(const std::vector<std::string>& inputs,
                 const std::string& form_name, const std::string& out_prefix,
                 int n_boot, int subsample, std::uint64_t seed, int workers,
                 bool summary_mode, bool no_refit,
                 const std::string& import_path, std::vector<double> slices) {
  const CollapseForm form = parse_form(form_name);
  const auto files = expand_inputs(inputs);
  if (files.empty()) throw std::domain_error("no input files");

  ScalingFit fit;
  std::vector<CollapsePoint> points;

  if (form == CollapseForm::kGlobalS) {
    LoadedCells cells = load_cells(files, form_name);
    if (cells.series.empty())
      throw std::domain_error("no global_s series cells found");
    if (slices.empty())
      slices.assign(kDefaultTimeSlices.begin(), kDefaultTimeSlices.end());
    if (no_refit) {
      const json imported = json::parse(read_file(import_path));
      CollapseParams params{imported.at("p_c").get<double>(),
                            imported.at("nu").get<double>(),
                            imported.at("exponent").get<double>()};
      fit.form = form;
      fit.p_c = params.p_c;
      fit.nu = params.nu;
      fit.exponent = params.exponent;
      fit.quality = global_s_quality(cells.series, params, slices);
      fit.converged = true;
    } else {
      fit = fit_collapse_global_s(cells.series, slices);
    }
    points = global_s_slice_points(cells.series, fit.exponent, slices);
  } else if (summary_mode) {
    points = load_summary_points(files[0]);
    fit = fit_collapse(points, form);
  } else {
    LoadedCells cells = load_cells(files, form_name);
    if (cells.raw.empty())
      throw std::domain_error("no raw cells with observable=" + form_name);
    if (n_boot > 0) {
      BootstrapOptions opt;
      opt.n_boot = n_boot;
      opt.subsample = subsample;
      opt.seed = seed;
      opt.workers = workers;
      fit = bootstrap_exponents(cells.raw, form, opt);
    } else {
      fit = fit_collapse(summarize_cells(cells.raw, form, seed), form);
    }
    points = summarize_cells(cells.raw, form, seed);
  }

  write_text(out_prefix + ".json", fit_to_json(fit, form_name).dump(2) + "\n");

  // Rescaled master-curve points for plotting.
  CsvTable rescaled;
  rescaled.columns = {"x", "Y", "L", "slice"};
  rescaled.tags["form"] = form_name;
  rescaled.tags["p_c"] = std::to_string(fit.p_c);
  rescaled.tags["nu"] = std::to_string(fit.nu);
  rescaled.tags["exponent"] = std::to_string(fit.exponent);
  for (const auto& pt : points) {
    const double x = (pt.p - fit.p_c) * std::pow(pt.num_qubits, 1.0 / fit.nu);
    const double y = form == CollapseForm::kGlobalS
                         ? pt.y
                         : pt.y / std::pow(pt.num_qubits, fit.exponent);
    rescaled.rows.push_back({x, y, static_cast<double>(pt.num_qubits),
                             static_cast<double>(pt.slice)});
  }
  write_csv(out_prefix + "_rescaled.csv", rescaled);
  std::cout << fit_to_json(fit, form_name).dump(2) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- powerfit

int cmd_powerfit(const std::string& input, const std::string& out_path,
                 double l_min) {
  const CsvTable t = read_csv(input);
  int il = t.column_index("L");
  int iv = t.column_index("value");
  if (iv < 0) iv = t.column_index("y");
  if (il < 0 || iv < 0)
    throw std::runtime_error(input + ": expected columns L,value");
  std::vector<std::pair<double, double>> pts;
  for (const auto& row : t.rows) pts.emplace_back(row[il], row[iv]);
  const PowerFit fit = fit_power_law(pts, l_min);
  json j;
  j["amplitude"] = fit.amplitude;
  j["mu"] = fit.exponent;
  j["residual"] = fit.residual;
  j["l_min"] = fit.l_min;
  j["n_used"] = fit.n_used;
  if (!out_path.empty()) write_text(out_path, j.dump(2) + "\n");
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

// --------------------------------------------------------------- crossings

int cmd_crossings(const std::vector<int>& sizes,
                  const std::vector<double>& alphas,
                  const std::string& out_path) {
  CsvTable t;
  t.columns = {"alpha", "L", "expected_crossings"};
  t.tags["units"] = "gates";
  json exponents = json::array();
  for (double alpha : alphas) {
    std::vector<std::pair<double, double>> counts;
    for (int L : sizes) {
      const double c = expected_crossings(L, alpha, L / 2);
      t.rows.push_back({alpha, static_cast<double>(L), c});
      counts.emplace_back(L, c);
    }
    if (counts.size() >= 3) {
      const PowerFit fit = fit_power_law(counts);
      exponents.push_back({{"alpha", alpha}, {"exponent", fit.exponent}});
    }
  }
  if (!out_path.empty()) {
    write_csv(out_path, t);
    if (!exponents.empty())
      write_text(out_path + ".json", exponents.dump(2) + "\n");
  }
  std::cout << exponents.dump(2) << "\n";
  return kExitOk;
}

// --------------------------------------------------------------- heff-scan

int cmd_heff_scan(int num_sites, double alpha, double coupling,
                  const std::vector<double>& gammas,
                  const std::string& out_path) {
  CsvTable t;
  t.columns = {"gamma_over_j", "region_size", "s2"};
  t.tags["L"] = std::to_string(num_sites);
  t.tags["alpha"] = std::to_string(alpha);
  t.tags["units"] = "nats";
  for (double g : gammas) {
    const HeffSpec spec{num_sites, coupling, g * coupling, alpha};
    const Eigen::MatrixXd h = build_hamiltonian(spec);
    const GroundState gs = ground_state_parity_even(h, num_sites);
    for (int len = 1; len <= num_sites / 2; ++len) {
      const auto region = centered_region(num_sites, len);
      try {
        t.rows.push_back({g, static_cast<double>(len),
                          renyi2_from_ground_state(gs.vector, num_sites,
                                                   region)});
      } catch (const std::runtime_error&) {
        // Matrix element below the finite-size noise floor; skip the point.
        std::cerr << "note: s2 undefined at gamma/J=" << g << " |A|=" << len
                  << " (matrix element below noise floor)\n";
      }
    }
  }
  if (!out_path.empty()) write_csv(out_path, t);
  std::cout << "rows: " << t.rows.size() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Long-range hybrid Clifford circuit toolkit"};
  app.require_subcommand(1);

  auto* sim = app.add_subcommand("simulate", "run an experiment plan");
  std::string sim_config;
  std::optional<std::string> sim_out;
  std::optional<int> sim_workers, sim_n;
  std::optional<std::uint64_t> sim_seed;
  sim->add_option("--config", sim_config, "plan JSON")->required();
  sim->add_option("--out", sim_out, "output directory override");
  sim->add_option("--workers", sim_workers, "worker threads");
  sim->add_option("--seed", sim_seed, "master seed override");
  sim->add_option("--n", sim_n, "sample count override");

  auto* col = app.add_subcommand("collapse", "finite-size scaling collapse");
  std::vector<std::string> col_inputs;
  std::string col_form = "tau_p", col_out = "collapse", col_import;
  int col_boot = 0, col_subsample = -1, col_workers = 1;
  std::uint64_t col_seed = 1;
  bool col_summary = false, col_no_refit = false;
  std::vector<double> col_slices;
  col->add_option("--inputs", col_inputs, "cell CSVs or directories")
      ->required();
  col->add_option("--form", col_form, "tau_p | iab | global_s");
  col->add_option("--out", col_out, "output prefix");
  col->add_option("--boot", col_boot, "bootstrap replicates (0 = off)");
  col->add_option("--subsample", col_subsample,
                  "bootstrap subsample size (-1 = n-100)");
  col->add_option("--seed", col_seed, "analysis seed");
  col->add_option("--workers", col_workers, "worker threads");
  col->add_flag("--summary", col_summary,
                "input is a summary CSV (L,p,y[,dy])");
  col->add_flag("--no-refit", col_no_refit,
                "evaluate quality at imported exponents (global_s)");
  col->add_option("--import", col_import, "fit JSON with imported exponents");
  col->add_option("--slices", col_slices, "rescaled time slices (global_s)");

  auto* pow = app.add_subcommand("powerfit", "power-law fit of (L, value)");
  std::string pow_in, pow_out;
  double pow_lmin = 0.0;
  pow->add_option("--in", pow_in, "input CSV")->required();
  pow->add_option("--out", pow_out, "output JSON path");
  pow->add_option("--lmin", pow_lmin, "smallest L included");

  auto* cross =
      app.add_subcommand("crossings", "single-layer crossing counts");
  std::vector<int> cross_L{64, 128, 256, 512, 1024, 2048, 4096};
  std::vector<double> cross_alpha;
  std::string cross_out;
  cross->add_option("--L", cross_L, "system sizes");
  cross->add_option("--alpha", cross_alpha, "power-law exponents")
      ->required();
  cross->add_option("--out", cross_out, "output CSV path");

  auto* heff = app.add_subcommand("heff-scan", "effective-Ising ED scan");
  int heff_L = 12;
  double heff_alpha = 2.0, heff_J = 1.0;
  std::vector<double> heff_gammas;
  std::string heff_out;
  heff->add_option("--L", heff_L, "chain length (<= 14)");
  heff->add_option("--alpha", heff_alpha, "power-law exponent");
  heff->add_option("--J", heff_J, "coupling");
  heff->add_option("--gamma-over-j", heff_gammas, "Gamma/J values")
      ->required();
  heff->add_option("--out", heff_out, "output CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed())
      return cmd_simulate(sim_config, sim_out, sim_workers, sim_seed, sim_n);
    if (col->parsed())
      return cmd_collapse(col_inputs, col_form, col_out, col_boot,
                          col_subsample, col_seed, col_workers, col_summary,
                          col_no_refit, col_import, col_slices);
    if (pow->parsed()) return cmd_powerfit(pow_in, pow_out, pow_lmin);
    if (cross->parsed()) return cmd_crossings(cross_L, cross_alpha, cross_out);
    if (heff->parsed())
      return cmd_heff_scan(heff_L, heff_alpha, heff_J, heff_gammas, heff_out);
  } catch (const std::domain_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const CsvError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitValidation;
}
