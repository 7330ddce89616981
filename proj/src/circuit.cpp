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

#include "mipt/circuit.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mipt {

void CircuitConfig::validate() const {
  std::string problems;
  if (num_qubits < 4) problems += " num_qubits<4;";
  if (p < 0.0 || p > 1.0) problems += " p outside [0,1];";
  if (alpha < 0.0) problems += " alpha<0;";
  if (depth < 1) problems += " depth<1;";
  if (gates_per_layer < 0) problems += " gates_per_layer<0;";
  if (!problems.empty())
    throw std::domain_error("CircuitConfig:" + problems);
}

DistanceSampler::DistanceSampler(int num_qubits, double alpha) {
  if (num_qubits < 4)
    throw std::domain_error("DistanceSampler: num_qubits < 4");
  const int rmax = num_qubits / 2;
  cdf_.resize(rmax);
  double total = 0.0;
  for (int r = 1; r <= rmax; ++r) {
    total += std::pow(static_cast<double>(r), -alpha);
    cdf_[r - 1] = total;
  }
  for (auto& c : cdf_) c /= total;
  cdf_.back() = 1.0;
}

int DistanceSampler::sample(RandomStream& rng) const {
  const double u = rng.uniform();
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) --it;
  return static_cast<int>(it - cdf_.begin()) + 1;
}

double DistanceSampler::probability(int r) const {
  if (r < 1 || r > max_distance()) return 0.0;
  return r == 1 ? cdf_[0] : cdf_[r - 1] - cdf_[r - 2];
}

int sample_distance(RandomStream& rng, int num_qubits, double alpha) {
  return DistanceSampler(num_qubits, alpha).sample(rng);
}

void apply_unitary_layer(StabilizerState& state, const CircuitConfig& config,
                         const DistanceSampler& distances, RandomStream& rng,
                         const TrajectoryHooks* hooks) {
  const int L = config.num_qubits;
  const int gates = config.effective_gates_per_layer();
  for (int g = 0; g < gates; ++g) {
    const int i = static_cast<int>(rng.uniform_below(L));
    const int r = distances.sample(rng);
    const bool forward = rng.coin();
    const int j = forward ? (i + r) % L : (i - r + L) % L;
    const CliffordGate2Q gate = sample_clifford_2q(rng);
    state.apply_gate(gate, i, j);
    if (hooks && hooks->on_gate) hooks->on_gate(gate, i, j);
  }
}

void apply_unitary_layer(StabilizerState& state, const CircuitConfig& config,
                         RandomStream& rng) {
  DistanceSampler distances(config.num_qubits, config.alpha);
  apply_unitary_layer(state, config, distances, rng, nullptr);
}

void apply_measurement_layer(StabilizerState& state,
                             const CircuitConfig& config, RandomStream& rng,
                             std::vector<MeasurementEvent>* events,
                             const TrajectoryHooks* hooks) {
  const int L = config.num_qubits;
  std::vector<int> sites;
  if (config.scheme == MeasurementScheme::kFixedCount) {
    const int m = static_cast<int>(std::lround(config.p * L));
    if (m > 0) {
      // Floyd's algorithm: m distinct sites, then ascending order.
      sites.reserve(m);
      std::vector<char> used(L, 0);
      for (int j = L - m; j < L; ++j) {
        int t = static_cast<int>(rng.uniform_below(j + 1));
        if (used[t]) t = j;
        used[t] = 1;
        sites.push_back(t);
      }
      std::sort(sites.begin(), sites.end());
    }
  } else {
    for (int q = 0; q < L; ++q)
      if (rng.bernoulli(config.p)) sites.push_back(q);
  }
  for (int site : sites) {
    const MeasureResult r = state.measure_z(site, rng);
    if (events || (hooks && hooks->on_measurement)) {
      MeasurementEvent ev{site, r.outcome, r.kind};
      if (events) events->push_back(ev);
      if (hooks && hooks->on_measurement) hooks->on_measurement(ev);
    }
  }
}

StabilizerState prepare_initial_state(const CircuitConfig& config,
                                      InitialState initial,
                                      RandomStream& rng) {
  switch (initial) {
    case InitialState::kProductZero:
      return StabilizerState::zero_state(config.num_qubits);
    case InitialState::kMaximallyMixed:
      return StabilizerState::maximally_mixed(config.num_qubits);
    case InitialState::kScrambledSingleMixed: {
      StabilizerState s =
          StabilizerState::zero_with_mixed_qubit(config.num_qubits, 0);
      s.scramble_global(rng, config.scramble);
      return s;
    }
  }
  throw std::logic_error("prepare_initial_state: unknown initial state");
}

TrajectoryResult run_trajectory(const CircuitConfig& config,
                                InitialState initial, RandomStream& rng,
                                const TrajectoryHooks& hooks) {
  config.validate();
  StabilizerState state = prepare_initial_state(config, initial, rng);
  DistanceSampler distances(config.num_qubits, config.alpha);
  const std::int64_t steps = config.total_steps();
  TrajectoryResult result;
  for (std::int64_t t = 1; t <= steps; ++t) {
    apply_unitary_layer(state, config, distances, rng, &hooks);
    apply_measurement_layer(state, config, rng, nullptr, &hooks);
#ifndef NDEBUG
    assert(state.check_invariants());
#endif
    result.steps_run = t;
    if (hooks.on_step && !hooks.on_step(state, t)) {
      result.stopped_early = true;
      break;
    }
  }
  return result;
}

}  // namespace mipt
