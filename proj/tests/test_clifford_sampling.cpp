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
#include <cstdint>
#include <map>
#include <queue>
#include <set>

#include "mipt/clifford_gate.hpp"

using namespace mipt;

namespace {

// Canonical key of a gate: the packed images of the four generators.
std::uint64_t gate_key(const CliffordGate2Q& g) {
  std::uint64_t key = 0;
  for (int k = 0; k < 4; ++k) {
    const LocalPauli& im = g.image(k);
    key = (key << 10) | (static_cast<std::uint64_t>(im.x) << 6) |
          (static_cast<std::uint64_t>(im.z) << 2) | im.phase;
  }
  return key;
}

std::uint32_t image_key(const LocalPauli& p) {
  return static_cast<std::uint32_t>(p.x) | (p.z << 2) | (p.phase << 4);
}

// The full two-qubit Clifford group (mod global phase) by closure over a
// generating set, independent of the sampler.
const std::set<std::uint64_t>& group_closure() {
  static const std::set<std::uint64_t> closure = [] {
    std::vector<CliffordGate2Q> gens{
        CliffordGate2Q::h(0),  CliffordGate2Q::h(1), CliffordGate2Q::s(0),
        CliffordGate2Q::s(1),  CliffordGate2Q::cnot01(),
    };
    std::map<std::uint64_t, CliffordGate2Q> seen;
    std::queue<CliffordGate2Q> frontier;
    const CliffordGate2Q id = CliffordGate2Q::identity();
    seen.emplace(gate_key(id), id);
    frontier.push(id);
    while (!frontier.empty()) {
      const CliffordGate2Q g = frontier.front();
      frontier.pop();
      for (const auto& gen : gens) {
        const CliffordGate2Q next = compose(gen, g);
        if (seen.emplace(gate_key(next), next).second) frontier.push(next);
      }
    }
    std::set<std::uint64_t> keys;
    for (const auto& [k, g] : seen) keys.insert(k);
    return keys;
  }();
  return closure;
}

}  // namespace

TEST_CASE("the two-qubit Clifford group has 11520 elements") {
  CHECK(group_closure().size() == 11520);
}

TEST_CASE("sampled gates are valid and lie in the group") {
  RandomStream rng(101);
  const auto& group = group_closure();
  for (int t = 0; t < 2000; ++t) {
    const CliffordGate2Q g = sample_clifford_2q(rng);
    REQUIRE(g.is_valid());
    REQUIRE(group.count(gate_key(g)) == 1);
  }
}

TEST_CASE("sampling is uniform: image of Z x I across the group") {
  // Enumeration oracle: conjugate Z_0 through every group element and
  // collect the distinct signed images with their multiplicities.
  const LocalPauli z0{0, 1, 0};
  std::map<std::uint32_t, int> enumerated;
  for (std::uint64_t key : group_closure()) {
    // Decode the images back out of the key.
    std::array<LocalPauli, 4> images;
    std::uint64_t k = key;
    for (int i = 3; i >= 0; --i) {
      images[i].phase = k & 3;
      images[i].z = (k >> 2) & 15;
      images[i].x = (k >> 6) & 15;
      k >>= 10;
    }
    const CliffordGate2Q g = CliffordGate2Q::from_images(images);
    enumerated[image_key(g.conjugate(z0))]++;
  }
  // Every signed non-identity Hermitian Pauli is hit, equally often.
  CHECK(enumerated.size() == 30);
  for (const auto& [img, count] : enumerated) CHECK(count == 11520 / 30);

  // Frequency test: 10^6 samples, each image within 5 sigma of uniform.
  RandomStream rng(103);
  std::map<std::uint32_t, int> histogram;
  const int n = 1000000;
  for (int t = 0; t < n; ++t)
    histogram[image_key(sample_clifford_2q(rng).conjugate(z0))]++;
  CHECK(histogram.size() == enumerated.size());
  const double p = 1.0 / 30;
  const double sigma = std::sqrt(n * p * (1 - p));
  for (const auto& [img, count] : histogram) {
    CHECK(enumerated.count(img) == 1);
    CHECK(std::abs(count - n * p) < 5 * sigma);
  }
}

TEST_CASE("independent streams with equal seeds repeat the gate sequence") {
  RandomStream a = RandomStream::child(42, 7);
  RandomStream b = RandomStream::child(42, 7);
  for (int t = 0; t < 100; ++t)
    CHECK(sample_clifford_2q(a) == sample_clifford_2q(b));
}
