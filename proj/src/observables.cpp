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

#include "mipt/observables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mipt/parallel.hpp"

namespace mipt {

double EnsembleRecord::mean() const {
  if (raw.empty()) return 0.0;
  double s = 0.0;
  for (double v : raw) s += v;
  return s / static_cast<double>(raw.size());
}

double EnsembleRecord::median() const {
  if (raw.empty()) return 0.0;
  std::vector<double> sorted(raw);
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  return (n % 2) ? sorted[n / 2]
                 : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

double EnsembleRecord::stderr_of_mean() const {
  const std::size_t n = raw.size();
  if (n < 2) return 0.0;
  const double m = mean();
  double ss = 0.0;
  for (double v : raw) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
}

int EnsembleRecord::censored_count() const {
  int c = 0;
  for (char f : censored) c += (f != 0);
  return c;
}

bool EnsembleRecord::median_is_censored() const {
  return !censored.empty() &&
         2 * censored_count() > static_cast<int>(censored.size());
}

SteadyStateWindow steady_state_window(const CircuitConfig& config) {
  const std::int64_t steps = config.total_steps();
  return {steps - steps / 4, std::max(1, config.num_qubits / 4)};
}

namespace {

EnsembleRecord make_record(const CircuitConfig& config, const char* name,
                           int n) {
  EnsembleRecord rec;
  rec.num_qubits = config.num_qubits;
  rec.alpha = config.alpha;
  rec.p = config.p;
  rec.observable = name;
  rec.raw.resize(n);
  return rec;
}

/// Window average of `entropy(state)` over one ProductZero trajectory.
template <typename EntropyFn>
double windowed_average(const CircuitConfig& config, std::uint64_t traj,
                        EntropyFn&& entropy) {
  RandomStream rng = RandomStream::child(config.seed, traj);
  const SteadyStateWindow window = steady_state_window(config);
  double sum = 0.0;
  std::int64_t count = 0;
  TrajectoryHooks hooks;
  hooks.on_step = [&](const StabilizerState& state, std::int64_t t) {
    if (window.contains(t)) {
      sum += entropy(state);
      ++count;
    }
    return true;
  };
  run_trajectory(config, InitialState::kProductZero, rng, hooks);
  return count ? sum / static_cast<double>(count) : 0.0;
}

}  // namespace

EnsembleRecord estimate_half_chain(const CircuitConfig& config, int n,
                                   int workers) {
  config.validate();
  EnsembleRecord rec = make_record(config, "half_chain", n);
  const std::vector<int> half =
      ring_interval(config.num_qubits, 0, config.num_qubits / 2);
  parallel_for_indexed(n, workers, [&](int i) {
    rec.raw[i] = windowed_average(
        config, static_cast<std::uint64_t>(i),
        [&](const StabilizerState& s) {
          return static_cast<double>(s.subsystem_entropy(half));
        });
  });
  return rec;
}

EnsembleRecord estimate_mutual_information(const CircuitConfig& config, int n,
                                           int workers, int region_divisor) {
  config.validate();
  if (region_divisor < 2 || config.num_qubits % region_divisor != 0)
    throw std::domain_error(
        "estimate_mutual_information: L not divisible by region size");
  const int L = config.num_qubits;
  const int len = L / region_divisor;
  const std::vector<int> a = ring_interval(L, 0, len);
  const std::vector<int> b = ring_interval(L, L / 2, len);
  std::vector<int> ab(a);
  ab.insert(ab.end(), b.begin(), b.end());

  EnsembleRecord rec = make_record(config, "iab", n);
  parallel_for_indexed(n, workers, [&](int i) {
    rec.raw[i] = windowed_average(
        config, static_cast<std::uint64_t>(i),
        [&](const StabilizerState& s) {
          return static_cast<double>(s.subsystem_entropy(a) +
                                     s.subsystem_entropy(b) -
                                     s.subsystem_entropy(ab));
        });
  });
  return rec;
}

EnsembleRecord estimate_purification_time(const CircuitConfig& config, int n,
                                          int workers) {
  config.validate();
  EnsembleRecord rec = make_record(config, "tau_p", n);
  rec.censored.assign(n, 0);
  const std::int64_t cap = config.total_steps();
  parallel_for_indexed(n, workers, [&](int i) {
    RandomStream rng =
        RandomStream::child(config.seed, static_cast<std::uint64_t>(i));
    std::int64_t purified_at = -1;
    TrajectoryHooks hooks;
    hooks.on_step = [&](const StabilizerState& state, std::int64_t t) {
      if (state.global_entropy() == 0) {
        purified_at = t;
        return false;
      }
      return true;
    };
    run_trajectory(config, InitialState::kScrambledSingleMixed, rng, hooks);
    if (purified_at < 0) {
      rec.raw[i] = static_cast<double>(cap);
      rec.censored[i] = 1;
    } else {
      rec.raw[i] = static_cast<double>(purified_at);
    }
  });
  return rec;
}

EnsembleRecord estimate_global_entropy_series(
    const CircuitConfig& config, int n,
    std::span<const std::int64_t> sample_times, int workers) {
  config.validate();
  EnsembleRecord rec = make_record(config, "global_s", n);
  rec.raw.clear();
  if (sample_times.empty()) {
    const std::int64_t stride = std::max(1, config.num_qubits / 8);
    for (std::int64_t t = 0; t <= config.total_steps(); t += stride)
      rec.times.push_back(t);
  } else {
    rec.times.assign(sample_times.begin(), sample_times.end());
    std::sort(rec.times.begin(), rec.times.end());
  }
  const std::int64_t last = rec.times.back();
  rec.series.assign(n, std::vector<double>(rec.times.size(), 0.0));

  parallel_for_indexed(n, workers, [&](int i) {
    RandomStream rng =
        RandomStream::child(config.seed, static_cast<std::uint64_t>(i));
    auto& row = rec.series[i];
    std::size_t cursor = 0;
    while (cursor < rec.times.size() && rec.times[cursor] <= 0) {
      row[cursor] = static_cast<double>(config.num_qubits);  // S(0) = L
      ++cursor;
    }
    TrajectoryHooks hooks;
    hooks.on_step = [&](const StabilizerState& state, std::int64_t t) {
      const int s = state.global_entropy();
      while (cursor < rec.times.size() && rec.times[cursor] == t) {
        row[cursor] = static_cast<double>(s);
        ++cursor;
      }
      // Once pure the entropy stays zero; the remaining samples are zero.
      if (s == 0) {
        while (cursor < rec.times.size()) row[cursor++] = 0.0;
        return false;
      }
      return t < last;
    };
    run_trajectory(config, InitialState::kMaximallyMixed, rng, hooks);
  });
  return rec;
}

}  // namespace mipt
