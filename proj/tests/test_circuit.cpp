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

#include <cmath>
#include <vector>

#include "mipt/circuit.hpp"

using namespace mipt;

TEST_CASE("distance distribution: exact probabilities") {
  SUBCASE("L = 4, alpha = 2") {
    DistanceSampler d(4, 2.0);
    CHECK(d.probability(1) == doctest::Approx(0.8));
    CHECK(d.probability(2) == doctest::Approx(0.2));
  }
  SUBCASE("L = 8, alpha = 0 is uniform") {
    DistanceSampler d(8, 0.0);
    for (int r = 1; r <= 4; ++r)
      CHECK(d.probability(r) == doctest::Approx(0.25));
  }
  SUBCASE("alpha = 20 is effectively nearest-neighbor") {
    DistanceSampler d(64, 20.0);
    CHECK(d.probability(1) > 0.999999);
  }
  SUBCASE("out-of-range distances have zero probability") {
    DistanceSampler d(8, 1.0);
    CHECK(d.probability(0) == 0.0);
    CHECK(d.probability(5) == 0.0);
  }
}

TEST_CASE("distance histogram within multinomial 5 sigma") {
  for (double alpha : {1.5, 3.5}) {
    const int L = 64;
    DistanceSampler d(L, alpha);
    RandomStream rng(519);
    const int n = 1000000;
    std::vector<int> hist(L / 2 + 1, 0);
    for (int t = 0; t < n; ++t) ++hist[d.sample(rng)];
    for (int r = 1; r <= L / 2; ++r) {
      const double p = d.probability(r);
      const double sigma = std::sqrt(n * p * (1 - p));
      CHECK(std::abs(hist[r] - n * p) < 5 * sigma + 1);
    }
  }
}

TEST_CASE("unitary layer at alpha = 20 uses nearest neighbors only") {
  CircuitConfig cfg;
  cfg.num_qubits = 32;
  cfg.alpha = 20.0;
  cfg.p = 0.0;
  RandomStream rng(3);
  StabilizerState s = StabilizerState::zero_state(32);
  DistanceSampler d(32, 20.0);
  TrajectoryHooks hooks;
  int checked = 0;
  hooks.on_gate = [&](const CliffordGate2Q&, int i, int j) {
    const int dist = std::min((j - i + 32) % 32, (i - j + 32) % 32);
    CHECK(dist == 1);
    ++checked;
  };
  for (int layer = 0; layer < 20; ++layer)
    apply_unitary_layer(s, cfg, d, rng, &hooks);
  CHECK(checked == 20 * 16);
}

TEST_CASE("unitary layer preserves the generator count") {
  CircuitConfig cfg;
  cfg.num_qubits = 16;
  cfg.alpha = 1.0;
  RandomStream rng(5);
  StabilizerState s = StabilizerState::maximally_mixed(16);
  apply_unitary_layer(s, cfg, rng);
  CHECK(s.num_generators() == 0);
  CHECK(s.global_entropy() == 16);
}

TEST_CASE("measurement layer limits") {
  CircuitConfig cfg;
  cfg.num_qubits = 16;
  cfg.alpha = 2.0;
  RandomStream rng(7);

  SUBCASE("p = 1 measures every site and collapses to a product state") {
    cfg.p = 1.0;
    StabilizerState s = StabilizerState::maximally_mixed(16);
    std::vector<MeasurementEvent> events;
    apply_measurement_layer(s, cfg, rng, &events);
    CHECK(events.size() == 16);
    CHECK(s.global_entropy() == 0);
    for (std::size_t i = 1; i < events.size(); ++i)
      CHECK(events[i].site > events[i - 1].site);  // ascending order
  }
  SUBCASE("p = 0 leaves the state untouched") {
    cfg.p = 0.0;
    StabilizerState s = StabilizerState::zero_state(16);
    const StabilizerState before = s;
    std::vector<MeasurementEvent> events;
    apply_measurement_layer(s, cfg, rng, &events);
    CHECK(events.empty());
    CHECK(s == before);
  }
  SUBCASE("fixed scheme measures round(pL) distinct sites") {
    cfg.p = 0.3;  // round(4.8) = 5
    StabilizerState s = StabilizerState::zero_state(16);
    std::vector<MeasurementEvent> events;
    apply_measurement_layer(s, cfg, rng, &events);
    CHECK(events.size() == 5);
    for (std::size_t i = 1; i < events.size(); ++i)
      CHECK(events[i].site > events[i - 1].site);
  }
}

TEST_CASE("bernoulli scheme has binomial layer sizes") {
  CircuitConfig cfg;
  cfg.num_qubits = 16;
  cfg.alpha = 2.0;
  cfg.p = 0.3;
  cfg.scheme = MeasurementScheme::kPerSiteBernoulli;
  RandomStream rng(11);
  StabilizerState s = StabilizerState::maximally_mixed(16);
  const int layers = 10000;
  long total = 0;
  for (int t = 0; t < layers; ++t) {
    std::vector<MeasurementEvent> events;
    apply_measurement_layer(s, cfg, rng, &events);
    total += static_cast<long>(events.size());
  }
  const double mean = static_cast<double>(total) / layers;
  const double sigma =
      std::sqrt(16 * cfg.p * (1 - cfg.p) / layers);  // of the layer mean
  CHECK(std::abs(mean - 16 * cfg.p) < 5 * sigma);
}

TEST_CASE("entropy is constant across unitary and non-increasing across "
          "measurement layers") {
  CircuitConfig cfg;
  cfg.num_qubits = 12;
  cfg.alpha = 1.5;
  cfg.p = 0.25;
  RandomStream rng(13);
  StabilizerState s = StabilizerState::maximally_mixed(12);
  DistanceSampler d(12, cfg.alpha);
  for (int t = 0; t < 60; ++t) {
    const int before = s.global_entropy();
    apply_unitary_layer(s, cfg, d, rng, nullptr);
    CHECK(s.global_entropy() == before);
    apply_measurement_layer(s, cfg, rng);
    CHECK(s.global_entropy() <= before);
  }
}

TEST_CASE("run_trajectory limits") {
  SUBCASE("p = 1 purifies a scrambled mixed qubit at step 1") {
    CircuitConfig cfg;
    cfg.num_qubits = 16;
    cfg.alpha = 3.5;
    cfg.p = 1.0;
    cfg.depth = 2;
    RandomStream rng(17);
    std::int64_t purified_at = -1;
    TrajectoryHooks hooks;
    hooks.on_step = [&](const StabilizerState& s, std::int64_t t) {
      if (s.global_entropy() == 0) {
        purified_at = t;
        return false;
      }
      return true;
    };
    run_trajectory(cfg, InitialState::kScrambledSingleMixed, rng, hooks);
    CHECK(purified_at == 1);
  }
  SUBCASE("p = 0 keeps a maximally mixed state at entropy L") {
    CircuitConfig cfg;
    cfg.num_qubits = 8;
    cfg.alpha = 1.0;
    cfg.p = 0.0;
    cfg.depth = 2;
    RandomStream rng(19);
    TrajectoryHooks hooks;
    hooks.on_step = [&](const StabilizerState& s, std::int64_t) {
      CHECK(s.global_entropy() == 8);
      return true;
    };
    const auto res =
        run_trajectory(cfg, InitialState::kMaximallyMixed, rng, hooks);
    CHECK(res.steps_run == 16);
    CHECK(!res.stopped_early);
  }
}

TEST_CASE("trajectories are deterministic in (config, seed)") {
  CircuitConfig cfg;
  cfg.num_qubits = 12;
  cfg.alpha = 2.0;
  cfg.p = 0.2;
  cfg.depth = 3;
  auto run = [&] {
    RandomStream rng = RandomStream::child(1234, 0);
    std::vector<int> trace;
    TrajectoryHooks hooks;
    hooks.on_measurement = [&](const MeasurementEvent& ev) {
      trace.push_back(ev.site * 2 + ev.outcome);
    };
    hooks.on_step = [&](const StabilizerState& s, std::int64_t) {
      trace.push_back(100 + s.global_entropy());
      return true;
    };
    run_trajectory(cfg, InitialState::kScrambledSingleMixed, rng, hooks);
    return trace;
  };
  CHECK(run() == run());
}

TEST_CASE("config validation lists offenders") {
  CircuitConfig cfg;
  cfg.num_qubits = 2;
  cfg.p = 1.5;
  cfg.depth = 0;
  CHECK_THROWS_AS(cfg.validate(), std::domain_error);
}
