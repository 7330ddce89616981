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

#ifndef MIPT_PLAN_HPP
#define MIPT_PLAN_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mipt/circuit.hpp"

namespace mipt {

/// A sweep over (L, alpha, p, observable) cells. Each cell maps to exactly
/// one output CSV; a manifest JSON makes the run reproducible.
struct ExperimentPlan {
  std::vector<int> sizes;
  std::vector<double> alphas;
  std::vector<double> ps;
  std::vector<std::string> observables;  // half_chain | iab | tau_p | global_s
  int n_samples = 100;
  std::map<std::string, int> depth;  // per-observable depth multiplier
  int gates_per_layer = 0;           // 0 -> L/2
  MeasurementScheme scheme = MeasurementScheme::kFixedCount;
  ScrambleMethod scramble = ScrambleMethod::kUniformSymplectic;
  int iab_region_divisor = 8;
  std::uint64_t seed = 1;
  int workers = 1;
  std::string out_dir = "data";

  static int default_depth(const std::string& observable);
  int depth_for(const std::string& observable) const;

  /// Returns a list of human-readable violations (empty when valid).
  std::vector<std::string> validate() const;
};

/// Parses the JSON config text. Sweeps accept explicit lists or
/// {"start":..,"stop":..,"step":..} triples. Throws std::runtime_error with
/// a description on malformed input.
ExperimentPlan parse_plan(const std::string& json_text);

/// Canonical serialization; parse(serialize(plan)) is the identity.
std::string serialize_plan(const ExperimentPlan& plan);

/// FNV-1a of the canonical serialization.
std::uint64_t plan_hash(const ExperimentPlan& plan);

std::string cell_file_name(const std::string& observable, int L, double alpha,
                           double p);

struct SimulateResult {
  int cells_total = 0;
  int cells_failed = 0;
  std::vector<std::string> files;
};

/// Runs the plan: writes the manifest first (status "incomplete"), then one
/// CSV per cell, then finalizes the manifest. The output directory may be
/// overridden with the MIPT_OUT_DIR environment variable. Deterministic:
/// identical (plan, seed) produce byte-identical data files for any worker
/// count.
SimulateResult simulate(const ExperimentPlan& plan);

}  // namespace mipt

#endif  // MIPT_PLAN_HPP
