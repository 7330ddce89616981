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

#ifndef MIPT_CIRCUIT_HPP
#define MIPT_CIRCUIT_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "mipt/rng.hpp"
#include "mipt/stabilizer_state.hpp"

namespace mipt {

enum class MeasurementScheme {
  kFixedCount,       // round(pL) distinct sites per layer
  kPerSiteBernoulli  // each site measured independently with probability p
};

enum class InitialState {
  kProductZero,
  kScrambledSingleMixed,  // |0...0> with qubit 0 mixed, then globally scrambled
  kMaximallyMixed
};

/// All parameters of a single trajectory. One time step is one unitary
/// layer (gates_per_layer two-qubit gates) followed by one measurement
/// layer; a run lasts depth * L steps.
struct CircuitConfig {
  int num_qubits = 16;
  double alpha = 3.5;       // power-law exponent of P(r) ~ r^{-alpha}
  double p = 0.1;           // measurement rate
  int gates_per_layer = 0;  // 0 -> L/2 (default); L is the other convention
  int depth = 32;           // steps = depth * L
  MeasurementScheme scheme = MeasurementScheme::kFixedCount;
  ScrambleMethod scramble = ScrambleMethod::kUniformSymplectic;
  std::uint64_t seed = 0;   // master seed; trajectory streams derive from it

  int effective_gates_per_layer() const {
    return gates_per_layer > 0 ? gates_per_layer : num_qubits / 2;
  }
  std::int64_t total_steps() const {
    return static_cast<std::int64_t>(depth) * num_qubits;
  }

  /// Throws std::domain_error describing every violated constraint.
  void validate() const;
};

/// Sampler for the gate distance distribution
/// P(r) = r^{-alpha} / sum_{s=1}^{L/2} s^{-alpha}, r in [1, L/2].
class DistanceSampler {
 public:
  DistanceSampler(int num_qubits, double alpha);
  /// Inverse-CDF sampling by binary search over the precomputed table.
  int sample(RandomStream& rng) const;
  double probability(int r) const;
  int max_distance() const { return static_cast<int>(cdf_.size()); }

 private:
  std::vector<double> cdf_;
};

/// One-shot convenience wrapper around DistanceSampler.
int sample_distance(RandomStream& rng, int num_qubits, double alpha);

struct MeasurementEvent {
  int site;
  int outcome;
  MeasureKind kind;
};

struct TrajectoryHooks {
  /// Called after every full time step; return false to stop the run.
  std::function<bool(const StabilizerState&, std::int64_t step)> on_step;
  /// Called for every applied gate (for tracing / dense replay).
  std::function<void(const CliffordGate2Q&, int i, int j)> on_gate;
  std::function<void(const MeasurementEvent&)> on_measurement;
};

/// Applies gates_per_layer gates: site i uniform, distance r ~ P(r),
/// direction uniform, partner j = (i +/- r) mod L. Gates may overlap
/// within a layer and are applied sequentially.
void apply_unitary_layer(StabilizerState& state, const CircuitConfig& config,
                         const DistanceSampler& distances, RandomStream& rng,
                         const TrajectoryHooks* hooks = nullptr);

/// Convenience overload constructing the distance table on the fly.
void apply_unitary_layer(StabilizerState& state, const CircuitConfig& config,
                         RandomStream& rng);

/// Fixed-count scheme: round(pL) distinct sites (Floyd sampling), measured
/// in ascending site order. Bernoulli scheme: each site independently with
/// probability p, ascending order. Events are appended to `events` if given.
void apply_measurement_layer(StabilizerState& state,
                             const CircuitConfig& config, RandomStream& rng,
                             std::vector<MeasurementEvent>* events = nullptr,
                             const TrajectoryHooks* hooks = nullptr);

struct TrajectoryResult {
  std::int64_t steps_run = 0;
  bool stopped_early = false;
};

StabilizerState prepare_initial_state(const CircuitConfig& config,
                                      InitialState initial, RandomStream& rng);

/// Runs a full trajectory: initial-state preparation, then depth * L
/// alternating unitary and measurement layers (or until on_step stops it).
TrajectoryResult run_trajectory(const CircuitConfig& config,
                                InitialState initial, RandomStream& rng,
                                const TrajectoryHooks& hooks = {});

}  // namespace mipt

#endif  // MIPT_CIRCUIT_HPP
