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

#include "mipt/pauli.hpp"

#include <stdexcept>

namespace mipt {

namespace {
std::size_t words_for(int bits) {
  return static_cast<std::size_t>((bits + 63) / 64);
}
}  // namespace

PauliOperator::PauliOperator(int num_qubits)
    : num_qubits_(num_qubits),
      x_(words_for(num_qubits), 0),
      z_(words_for(num_qubits), 0) {
  if (num_qubits < 1) throw std::domain_error("PauliOperator: num_qubits < 1");
}

PauliOperator PauliOperator::single_x(int num_qubits, int site) {
  PauliOperator p(num_qubits);
  if (site < 0 || site >= num_qubits)
    throw std::domain_error("single_x: site out of range");
  p.set_x(site, true);
  return p;
}

PauliOperator PauliOperator::single_z(int num_qubits, int site) {
  PauliOperator p(num_qubits);
  if (site < 0 || site >= num_qubits)
    throw std::domain_error("single_z: site out of range");
  p.set_z(site, true);
  return p;
}

bool PauliOperator::commutes_with(const PauliOperator& other) const {
  return !(and_parity(x_, other.z_) ^ and_parity(z_, other.x_));
}

PauliOperator& PauliOperator::operator*=(const PauliOperator& rhs) {
  // i^{s1} X^{x1} Z^{z1} . i^{s2} X^{x2} Z^{z2}
  //   = i^{s1+s2} (-1)^{z1.x2} X^{x1+x2} Z^{z1+z2}
  int s = phase_ + rhs.phase_ + 2 * and_parity(z_, rhs.x_);
  for (std::size_t w = 0; w < x_.size(); ++w) {
    x_[w] ^= rhs.x_[w];
    z_[w] ^= rhs.z_[w];
  }
  phase_ = static_cast<std::uint8_t>(s & 3);
  return *this;
}

bool PauliOperator::is_identity() const {
  for (std::size_t w = 0; w < x_.size(); ++w)
    if (x_[w] || z_[w]) return false;
  return true;
}

bool PauliOperator::is_hermitian() const {
  return (phase_ & 1) == (and_parity(x_, z_) ? 1 : 0);
}

int PauliOperator::weight() const {
  int n = 0;
  for (std::size_t w = 0; w < x_.size(); ++w)
    n += std::popcount(x_[w] | z_[w]);
  return n;
}

std::string PauliOperator::str() const {
  // X^x Z^z = (-i)^{#Y} prod_q W_q, so the displayed prefix is i^{s - #Y}.
  int y_count = 0;
  for (std::size_t w = 0; w < x_.size(); ++w)
    y_count += std::popcount(x_[w] & z_[w]);
  static const char* prefix[4] = {"+", "+i", "-", "-i"};
  std::string out = prefix[(phase_ - y_count) & 3];
  for (int q = 0; q < num_qubits_; ++q) {
    bool xb = x(q), zb = z(q);
    out += xb ? (zb ? 'Y' : 'X') : (zb ? 'Z' : 'I');
  }
  return out;
}

}  // namespace mipt
