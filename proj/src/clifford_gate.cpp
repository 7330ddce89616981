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

#include "mipt/clifford_gate.hpp"

#include <bit>
#include <stdexcept>

namespace mipt {

namespace {

// Nibble encoding of a 4-dim symplectic vector: bits 0..1 = x, bits 2..3 = z.
std::uint8_t to_nibble(const LocalPauli& p) {
  return static_cast<std::uint8_t>((p.x & 3) | ((p.z & 3) << 2));
}

LocalPauli from_nibble(std::uint8_t v, std::uint8_t sign_bit) {
  LocalPauli p;
  p.x = v & 3;
  p.z = (v >> 2) & 3;
  // Hermitian phase: s = x.z (mod 2), plus 2*sign.
  std::uint8_t xz = std::popcount(static_cast<unsigned>(p.x & p.z)) & 1;
  p.phase = static_cast<std::uint8_t>((xz + 2 * sign_bit) & 3);
  return p;
}

int nibble_symplectic(std::uint8_t a, std::uint8_t b) {
  unsigned ax = a & 3, az = (a >> 2) & 3;
  unsigned bx = b & 3, bz = (b >> 2) & 3;
  return (std::popcount(ax & bz) + std::popcount(az & bx)) & 1;
}

bool local_hermitian(const LocalPauli& p) {
  return (p.phase & 1) ==
         (std::popcount(static_cast<unsigned>(p.x & p.z)) & 1);
}

}  // namespace

LocalPauli local_mul(const LocalPauli& a, const LocalPauli& b) {
  LocalPauli r;
  int cross = std::popcount(static_cast<unsigned>(a.z & b.x)) & 1;
  r.phase = static_cast<std::uint8_t>((a.phase + b.phase + 2 * cross) & 3);
  r.x = a.x ^ b.x;
  r.z = a.z ^ b.z;
  return r;
}

CliffordGate2Q CliffordGate2Q::from_images(
    const std::array<LocalPauli, 4>& images) {
  CliffordGate2Q g;
  g.images_ = images;
  if (!g.is_valid())
    throw std::domain_error("CliffordGate2Q: images are not a valid Clifford");
  return g;
}

CliffordGate2Q::CliffordGate2Q() {
  images_[kX0] = {1, 0, 0};
  images_[kX1] = {2, 0, 0};
  images_[kZ0] = {0, 1, 0};
  images_[kZ1] = {0, 2, 0};
}

CliffordGate2Q CliffordGate2Q::identity() { return CliffordGate2Q(); }

CliffordGate2Q CliffordGate2Q::cnot01() {
  CliffordGate2Q g = identity();
  g.images_[kX0] = {3, 0, 0};  // X0 -> X0 X1
  g.images_[kZ1] = {0, 3, 0};  // Z1 -> Z0 Z1
  return g;
}

CliffordGate2Q CliffordGate2Q::swap_gate() {
  CliffordGate2Q g;
  g.images_[kX0] = {2, 0, 0};
  g.images_[kX1] = {1, 0, 0};
  g.images_[kZ0] = {0, 2, 0};
  g.images_[kZ1] = {0, 1, 0};
  return g;
}

CliffordGate2Q CliffordGate2Q::cz() {
  CliffordGate2Q g = identity();
  g.images_[kX0] = {1, 2, 0};  // X0 -> X0 Z1
  g.images_[kX1] = {2, 1, 0};  // X1 -> Z0 X1
  return g;
}

CliffordGate2Q CliffordGate2Q::h(int local_qubit) {
  CliffordGate2Q g = identity();
  std::uint8_t m = local_qubit ? 2 : 1;
  g.images_[local_qubit ? kX1 : kX0] = {0, m, 0};
  g.images_[local_qubit ? kZ1 : kZ0] = {m, 0, 0};
  return g;
}

CliffordGate2Q CliffordGate2Q::s(int local_qubit) {
  CliffordGate2Q g = identity();
  std::uint8_t m = local_qubit ? 2 : 1;
  g.images_[local_qubit ? kX1 : kX0] = {m, m, 1};  // X -> Y
  return g;
}

LocalPauli CliffordGate2Q::conjugate(const LocalPauli& p) const {
  // P = i^s X0^{a0} X1^{a1} Z0^{b0} Z1^{b1}; conjugation is a homomorphism,
  // so the image is i^s times the ordered product of generator images.
  LocalPauli acc{0, 0, 0};
  if (p.x & 1) acc = local_mul(acc, images_[kX0]);
  if (p.x & 2) acc = local_mul(acc, images_[kX1]);
  if (p.z & 1) acc = local_mul(acc, images_[kZ0]);
  if (p.z & 2) acc = local_mul(acc, images_[kZ1]);
  acc.phase = static_cast<std::uint8_t>((acc.phase + p.phase) & 3);
  return acc;
}

bool CliffordGate2Q::is_valid() const {
  for (const auto& im : images_)
    if (!local_hermitian(im)) return false;
  // The symplectic form of the images must match that of (X0, X1, Z0, Z1).
  static const int want[4][4] = {
      {0, 0, 1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}, {0, 1, 0, 0}};
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      if (local_symplectic(images_[a], images_[b]) != want[a][b]) return false;
  return true;
}

CliffordGate2Q CliffordGate2Q::inverse() const {
  // Invert the 4x4 symplectic matrix over GF(2). Basis order for the
  // columns: (X0, X1, Z0, Z1); entry encoding is the nibble layout.
  std::uint8_t m[4];
  for (int k = 0; k < 4; ++k) m[k] = to_nibble(images_[k]);

  // Gauss-Jordan on the 4x8 augmented system, bit-packed per column index.
  // cols[j] holds column j of M as 4 bits over generator index k.
  std::uint8_t rows[4];  // rows of M: rows[i] bit k = component i of image k
  for (int i = 0; i < 4; ++i) {
    std::uint8_t r = 0;
    for (int k = 0; k < 4; ++k) r |= static_cast<std::uint8_t>(((m[k] >> i) & 1) << k);
    rows[i] = r;
  }
  std::uint8_t inv[4] = {1, 2, 4, 8};
  for (int col = 0; col < 4; ++col) {
    int piv = -1;
    for (int r = col; r < 4; ++r)
      if ((rows[r] >> col) & 1) {
        piv = r;
        break;
      }
    if (piv < 0) throw std::logic_error("CliffordGate2Q: singular matrix");
    std::swap(rows[col], rows[piv]);
    std::swap(inv[col], inv[piv]);
    for (int r = 0; r < 4; ++r)
      if (r != col && ((rows[r] >> col) & 1)) {
        rows[r] ^= rows[col];
        inv[r] ^= inv[col];
      }
  }
  // inv[i] bit k: component i of the preimage of basis vector k is set.
  CliffordGate2Q out;
  for (int k = 0; k < 4; ++k) {
    std::uint8_t pre = 0;
    for (int i = 0; i < 4; ++i) pre |= static_cast<std::uint8_t>(((inv[i] >> k) & 1) << i);
    LocalPauli q = from_nibble(pre, 0);
    // U q U^dag = i^t P_k  =>  U^dag P_k U = i^{-t} q.
    LocalPauli r = conjugate(q);
    out.images_[k] = q;
    out.images_[k].phase =
        static_cast<std::uint8_t>((q.phase + ((4 - r.phase) & 3)) & 3);
  }
  if (!out.is_valid())
    throw std::logic_error("CliffordGate2Q: inverse is not valid");
  return out;
}

CliffordGate2Q compose(const CliffordGate2Q& outer,
                       const CliffordGate2Q& inner) {
  std::array<LocalPauli, 4> images;
  for (int k = 0; k < 4; ++k) images[k] = outer.conjugate(inner.image(k));
  return CliffordGate2Q::from_images(images);
}

CliffordGate2Q sample_clifford_2q(RandomStream& rng) {
  // Enumerate candidates explicitly so every choice is exactly uniform.
  auto pick = [&rng](const std::uint8_t* cand, int n) {
    return cand[rng.uniform_below(static_cast<std::uint64_t>(n))];
  };

  std::uint8_t cand[16];
  int n = 0;
  for (std::uint8_t v = 1; v < 16; ++v) cand[n++] = v;
  std::uint8_t v1 = pick(cand, n);  // image of X0: any nonzero (15)

  n = 0;
  for (std::uint8_t v = 1; v < 16; ++v)
    if (nibble_symplectic(v1, v) == 1) cand[n++] = v;
  std::uint8_t w1 = pick(cand, n);  // image of Z0: hyperbolic partner (8)

  n = 0;
  for (std::uint8_t v = 1; v < 16; ++v)
    if (nibble_symplectic(v1, v) == 0 && nibble_symplectic(w1, v) == 0)
      cand[n++] = v;
  std::uint8_t v2 = pick(cand, n);  // image of X1: complement, nonzero (3)

  n = 0;
  for (std::uint8_t v = 1; v < 16; ++v)
    if (nibble_symplectic(v1, v) == 0 && nibble_symplectic(w1, v) == 0 &&
        nibble_symplectic(v2, v) == 1)
      cand[n++] = v;
  std::uint8_t w2 = pick(cand, n);  // image of Z1 (2)

  std::array<LocalPauli, 4> images;
  images[CliffordGate2Q::kX0] = from_nibble(v1, rng.coin());
  images[CliffordGate2Q::kX1] = from_nibble(v2, rng.coin());
  images[CliffordGate2Q::kZ0] = from_nibble(w1, rng.coin());
  images[CliffordGate2Q::kZ1] = from_nibble(w2, rng.coin());
  return CliffordGate2Q::from_images(images);
}

}  // namespace mipt
