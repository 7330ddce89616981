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

#ifndef MIPT_CLIFFORD_GATE_HPP
#define MIPT_CLIFFORD_GATE_HPP

#include <array>
#include <cstdint>

#include "mipt/rng.hpp"

namespace mipt {

/// A Pauli on two local qubits, i^{phase} X^{x} Z^{z}, where bit b of
/// x/z refers to local qubit b.
struct LocalPauli {
  std::uint8_t x = 0;      // 2 bits
  std::uint8_t z = 0;      // 2 bits
  std::uint8_t phase = 0;  // exponent of i, mod 4

  bool operator==(const LocalPauli&) const = default;
};

/// Symplectic inner product of two local Paulis (0 = commute, 1 = anticommute).
inline int local_symplectic(const LocalPauli& a, const LocalPauli& b) {
  return (std::popcount(static_cast<unsigned>(a.x & b.z)) +
          std::popcount(static_cast<unsigned>(a.z & b.x))) &
         1;
}

/// Product a*b with exact phase tracking.
LocalPauli local_mul(const LocalPauli& a, const LocalPauli& b);

/// A two-qubit Clifford gate, represented by its conjugation action on the
/// Pauli group: the images of the four generators X_0, X_1, Z_0, Z_1. The
/// image bit vectors form a 4x4 symplectic matrix over GF(2) and the image
/// phases carry the sign information (images of Hermitian Paulis are
/// Hermitian, so each phase is determined up to the sign bit).
class CliffordGate2Q {
 public:
  /// Generator indices for image().
  enum Generator { kX0 = 0, kX1 = 1, kZ0 = 2, kZ1 = 3 };

  /// Default-constructs the identity gate.
  CliffordGate2Q();

  /// Constructs from the four generator images; throws std::domain_error
  /// if they do not define a valid Clifford (symplectic + Hermitian).
  static CliffordGate2Q from_images(const std::array<LocalPauli, 4>& images);

  static CliffordGate2Q identity();
  static CliffordGate2Q cnot01();  // control local 0, target local 1
  static CliffordGate2Q swap_gate();
  static CliffordGate2Q cz();
  static CliffordGate2Q h(int local_qubit);
  static CliffordGate2Q s(int local_qubit);

  const LocalPauli& image(int generator) const { return images_[generator]; }

  /// Conjugates an arbitrary local Pauli through the gate: U P U^dag.
  LocalPauli conjugate(const LocalPauli& p) const;

  CliffordGate2Q inverse() const;

  bool is_valid() const;

  bool operator==(const CliffordGate2Q&) const = default;

 private:
  std::array<LocalPauli, 4> images_;
};

/// Composition: (outer o inner), i.e. apply `inner` first.
CliffordGate2Q compose(const CliffordGate2Q& outer,
                       const CliffordGate2Q& inner);

/// Samples a gate uniformly from the 11,520-element two-qubit Clifford
/// group (modulo global phase) via the canonical symplectic construction:
/// a uniform hyperbolic pair for (X_0, Z_0), a uniform hyperbolic pair in
/// its symplectic complement for (X_1, Z_1), and four uniform sign bits.
CliffordGate2Q sample_clifford_2q(RandomStream& rng);

}  // namespace mipt

#endif  // MIPT_CLIFFORD_GATE_HPP
