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

#ifndef MIPT_OBSERVABLES_HPP
#define MIPT_OBSERVABLES_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mipt/circuit.hpp"

namespace mipt {

/// Per-(L, alpha, p) ensemble of one observable, with raw per-trajectory
/// values retained for bootstrap resampling. Scalar observables fill
/// `raw` (and `censored` for purification times); time series fill
/// `times` and `series`.
struct EnsembleRecord {
  int num_qubits = 0;
  double alpha = 0.0;
  double p = 0.0;
  std::string observable;

  std::vector<double> raw;
  std::vector<char> censored;  // parallel to raw; purification time only

  std::vector<std::int64_t> times;
  std::vector<std::vector<double>> series;  // one row per trajectory

  int n() const {
    return static_cast<int>(series.empty() ? raw.size() : series.size());
  }
  double mean() const;
  double median() const;
  double stderr_of_mean() const;
  int censored_count() const;
  /// True when more than half of the purification samples hit the cap; the
  /// median is then only a lower bound and collapse consumers must skip it.
  bool median_is_censored() const;
};

/// Entropies are recorded every L/4 steps over the final quarter of the
/// run and averaged ("steady-state window").
struct SteadyStateWindow {
  std::int64_t start;   // first step strictly inside the window
  std::int64_t stride;  // L/4
  bool contains(std::int64_t t) const {
    return t > start && (t % stride) == 0;
  }
};
SteadyStateWindow steady_state_window(const CircuitConfig& config);

/// Half-chain entanglement entropy S_{L/2}: ProductZero start, window
/// average per trajectory.
EnsembleRecord estimate_half_chain(const CircuitConfig& config, int n,
                                   int workers = 1);

/// Antipodal mutual information I_AB = S_A + S_B - S_{A u B} between
/// contiguous regions of size L/region_divisor whose centers are L/2
/// apart. Requires L divisible by region_divisor.
EnsembleRecord estimate_mutual_information(const CircuitConfig& config, int n,
                                           int workers = 1,
                                           int region_divisor = 8);

/// Single-qubit purification time: ScrambledSingleMixed start, first step
/// with zero global entropy. Unpurified trajectories record the cap
/// depth * L and are flagged censored.
EnsembleRecord estimate_purification_time(const CircuitConfig& config, int n,
                                          int workers = 1);

/// Global entropy S(t) from a maximally mixed start, recorded at the given
/// times (default: every L/8 steps, including t = 0).
EnsembleRecord estimate_global_entropy_series(
    const CircuitConfig& config, int n,
    std::span<const std::int64_t> sample_times = {}, int workers = 1);

}  // namespace mipt

#endif  // MIPT_OBSERVABLES_HPP
