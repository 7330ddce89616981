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

#ifndef MIPT_PAULI_HPP
#define MIPT_PAULI_HPP

#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mipt {

/// An n-qubit Pauli operator stored in the phase-exponent convention
///
///     P = i^s * (prod_q X_q^{x_q}) * (prod_q Z_q^{z_q}),   s in Z_4,
///
/// with the X and Z supports bit-packed into 64-bit words. P is Hermitian
/// iff s == x.z (mod 2). Multiplication and commutation follow from
/// Z^z X^x = (-1)^{x.z} X^x Z^z.
class PauliOperator {
 public:
  explicit PauliOperator(int num_qubits);

  static PauliOperator single_x(int num_qubits, int site);
  static PauliOperator single_z(int num_qubits, int site);

  int num_qubits() const { return num_qubits_; }

  bool x(int site) const { return bit(x_, site); }
  bool z(int site) const { return bit(z_, site); }
  void set_x(int site, bool value) { set_bit(x_, site, value); }
  void set_z(int site, bool value) { set_bit(z_, site, value); }

  /// Phase exponent s of i^s.
  std::uint8_t phase() const { return phase_; }
  void set_phase(std::uint8_t s) { phase_ = s & 3; }

  bool commutes_with(const PauliOperator& other) const;

  /// In-place product, this = this * rhs, with exact phase tracking.
  PauliOperator& operator*=(const PauliOperator& rhs);

  bool is_identity() const;

  /// True iff the operator is Hermitian (prefix sign is +/-1, not +/-i).
  bool is_hermitian() const;

  /// Number of sites with a non-identity factor.
  int weight() const;

  /// Rendering like "+XIZY" or "-iXY".
  std::string str() const;

  bool operator==(const PauliOperator& other) const = default;

  std::span<const std::uint64_t> x_words() const { return x_; }
  std::span<const std::uint64_t> z_words() const { return z_; }
  std::span<std::uint64_t> x_words() { return x_; }
  std::span<std::uint64_t> z_words() { return z_; }

 private:
  static bool bit(const std::vector<std::uint64_t>& w, int i) {
    return (w[static_cast<std::size_t>(i) >> 6] >> (i & 63)) & 1ULL;
  }
  static void set_bit(std::vector<std::uint64_t>& w, int i, bool v) {
    std::uint64_t mask = 1ULL << (i & 63);
    if (v)
      w[static_cast<std::size_t>(i) >> 6] |= mask;
    else
      w[static_cast<std::size_t>(i) >> 6] &= ~mask;
  }

  int num_qubits_;
  std::vector<std::uint64_t> x_, z_;
  std::uint8_t phase_ = 0;
};

/// Parity of the AND of two equal-length word spans.
inline bool and_parity(std::span<const std::uint64_t> a,
                       std::span<const std::uint64_t> b) {
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc ^= a[i] & b[i];
  return std::popcount(acc) & 1;
}

}  // namespace mipt

#endif  // MIPT_PAULI_HPP
