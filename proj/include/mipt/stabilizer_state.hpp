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

#ifndef MIPT_STABILIZER_STATE_HPP
#define MIPT_STABILIZER_STATE_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "mipt/clifford_gate.hpp"
#include "mipt/pauli.hpp"
#include "mipt/rng.hpp"

namespace mipt {

enum class ScrambleMethod {
  kUniformSymplectic,  // exactly uniform over the L-qubit Clifford group
  kBrickwork,          // 2L layers of random two-qubit gates on random pairs
};

enum class MeasureKind {
  kRandomFlip,     // Z_site anticommutes with a generator; outcome random
  kDeterministic,  // +/-Z_site is in the group; outcome is its sign
  kRankIncrease,   // Z_site independent and commuting; outcome random, k -> k+1
};

struct MeasureResult {
  int outcome;  // 0 or 1
  MeasureKind kind;
};

/// Mixed-state stabilizer tableau: k <= L commuting, independent, Hermitian
/// Pauli generators on L qubits. Storage is column-major (per-qubit X and Z
/// bit columns over the generator index) so gates and measurement repairs
/// are word-parallel over generators. Phases carry 2 bits per generator.
///
/// No destabilizer rows are kept. Deterministic measurement outcomes are
/// resolved by GF(2) elimination against a lazily built row-echelon form of
/// the generators, which stays valid until the tableau mutates.
///
/// A StabilizerState is a self-contained value: no hidden shared state, all
/// randomness enters through explicit RandomStream parameters.
class StabilizerState {
 public:
  static StabilizerState zero_state(int num_qubits);
  static StabilizerState maximally_mixed(int num_qubits);
  /// |0...0> with the Z generator of `mixed_site` removed (k = L - 1).
  static StabilizerState zero_with_mixed_qubit(int num_qubits, int mixed_site);

  int num_qubits() const { return num_qubits_; }
  int num_generators() const { return num_gens_; }

  /// Conjugates every generator through the gate acting on sites (i, j).
  /// Throws std::domain_error if i == j or either site is out of range.
  void apply_gate(const CliffordGate2Q& gate, int i, int j);

  /// Projective Z measurement at `site`. Exhaustive cases:
  ///  (a) some generator anticommutes with Z_site: uniformly random outcome,
  ///      anticommuting generators repaired, one replaced by (-1)^m Z_site;
  ///  (b) +/-Z_site is in the stabilizer group: deterministic outcome (the
  ///      sign), state unchanged;
  ///  (c) Z_site commutes with the group but is independent: uniformly
  ///      random outcome, (-1)^m Z_site appended, k -> k+1.
  MeasureResult measure_z(int site, RandomStream& rng);

  /// Entanglement entropy (bits) of the given site set:
  /// S_A = |A| - g_A, with g_A = k - rank of the generator matrix
  /// restricted to the complement of A.
  int subsystem_entropy(std::span<const int> region) const;

  /// S = L - k (bits).
  int global_entropy() const { return num_qubits_ - num_gens_; }

  /// Applies a random L-qubit Clifford. The default method samples exactly
  /// uniformly via the canonical symplectic construction (hyperbolic pairs
  /// built with symplectic Gram-Schmidt rejection); the brickwork fallback
  /// applies 2L layers of random two-qubit gates on random disjoint pairs.
  void scramble_global(RandomStream& rng,
                       ScrambleMethod method = ScrambleMethod::kUniformSymplectic);

  PauliOperator generator(int index) const;

  /// Verifies pairwise commutation, GF(2) independence (symplectic rank
  /// equals k) and Hermitian generator phases.
  bool check_invariants() const;

  bool operator==(const StabilizerState& other) const;

 private:
  StabilizerState(int num_qubits, int num_gens);

  struct EchelonCache {
    bool valid = false;
    int row_words = 0;
    std::vector<std::uint64_t> rows;   // num_rows x row_words, x bits then z
    std::vector<std::uint8_t> phases;  // i-exponent per row
    std::vector<std::int32_t> pivot_row;  // per column (2L), -1 if none
    int num_rows = 0;
  };

  std::uint64_t* x_col(int q) { return x_bits_.data() + static_cast<std::size_t>(q) * col_words_; }
  const std::uint64_t* x_col(int q) const { return x_bits_.data() + static_cast<std::size_t>(q) * col_words_; }
  std::uint64_t* z_col(int q) { return z_bits_.data() + static_cast<std::size_t>(q) * col_words_; }
  const std::uint64_t* z_col(int q) const { return z_bits_.data() + static_cast<std::size_t>(q) * col_words_; }

  bool get_bit(const std::uint64_t* col, int row) const {
    return (col[row >> 6] >> (row & 63)) & 1ULL;
  }
  void assign_bit(std::uint64_t* col, int row, bool v) {
    std::uint64_t m = 1ULL << (row & 63);
    if (v)
      col[row >> 6] |= m;
    else
      col[row >> 6] &= ~m;
  }

  int gen_blocks() const { return (num_gens_ + 63) / 64; }

  void ensure_cache() const;
  void append_generator_z(int site, int outcome);
  void multiply_rows_by(std::span<const std::uint64_t> target_mask, int row);

  int num_qubits_;
  int num_gens_;
  int col_words_;  // words per column bit vector (capacity L rows)
  std::vector<std::uint64_t> x_bits_, z_bits_;  // L columns each
  std::vector<std::uint64_t> phase_lo_, phase_hi_;
  mutable EchelonCache cache_;
};

/// Convenience: the contiguous region [start, start + len) on the ring.
std::vector<int> ring_interval(int num_qubits, int start, int len);

}  // namespace mipt

#endif  // MIPT_STABILIZER_STATE_HPP
