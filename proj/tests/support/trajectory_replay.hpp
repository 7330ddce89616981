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

#ifndef MIPT_TESTS_TRAJECTORY_REPLAY_HPP
#define MIPT_TESTS_TRAJECTORY_REPLAY_HPP

#include <cmath>
#include <stdexcept>

#include "dense_sim.hpp"
#include "mipt/circuit.hpp"

namespace mipt::testing {

/// Mirrors a tableau trajectory in the dense simulator: gates are applied
/// through their reconstructed unitaries, measurements replay the recorded
/// outcomes and are checked against the pre-projection probabilities the
/// recorded case implies (1/2 for the random cases, 1 for deterministic).
class DenseReplay {
 public:
  explicit DenseReplay(DenseState state) : state_(std::move(state)) {}

  TrajectoryHooks hooks() {
    TrajectoryHooks h;
    h.on_gate = [this](const CliffordGate2Q& g, int i, int j) {
      state_.apply_gate(gate_unitary(g), i, j);
    };
    h.on_measurement = [this](const MeasurementEvent& ev) {
      const double p = state_.project_z(ev.site, ev.outcome);
      const double want =
          ev.kind == MeasureKind::kDeterministic ? 1.0 : 0.5;
      if (std::abs(p - want) > 1e-7)
        throw std::runtime_error("dense replay: outcome probability " +
                                 std::to_string(p) + " but measurement case " +
                                 "implies " + std::to_string(want));
    };
    return h;
  }

  DenseState& state() { return state_; }

 private:
  DenseState state_;
};

inline DenseState dense_initial_state(const CircuitConfig& config,
                                      InitialState initial) {
  switch (initial) {
    case InitialState::kProductZero:
      return DenseState::product_zero(config.num_qubits);
    case InitialState::kMaximallyMixed:
      return DenseState::maximally_mixed(config.num_qubits);
    default:
      throw std::runtime_error(
          "dense replay supports ProductZero and MaximallyMixed starts");
  }
}

}  // namespace mipt::testing

#endif  // MIPT_TESTS_TRAJECTORY_REPLAY_HPP
