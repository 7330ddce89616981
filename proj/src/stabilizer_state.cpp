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

#include "mipt/stabilizer_state.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <stdexcept>

namespace mipt {

namespace {

int first_set_bit(std::span<const std::uint64_t> words) {
  for (std::size_t w = 0; w < words.size(); ++w)
    if (words[w]) return static_cast<int>(w * 64 + std::countr_zero(words[w]));
  return -1;
}

bool all_zero(std::span<const std::uint64_t> words) {
  for (auto w : words)
    if (w) return false;
  return true;
}

std::uint64_t parity_of_and(const std::uint64_t* a, const std::uint64_t* b,
                            int n) {
  std::uint64_t acc = 0;
  for (int i = 0; i < n; ++i) acc ^= a[i] & b[i];
  return static_cast<std::uint64_t>(std::popcount(acc) & 1);
}

}  // namespace

StabilizerState::StabilizerState(int num_qubits, int num_gens)
    : num_qubits_(num_qubits),
      num_gens_(num_gens),
      col_words_((num_qubits + 63) / 64),
      x_bits_(static_cast<std::size_t>(num_qubits) * col_words_, 0),
      z_bits_(static_cast<std::size_t>(num_qubits) * col_words_, 0),
      phase_lo_(col_words_, 0),
      phase_hi_(col_words_, 0) {
  if (num_qubits < 1)
    throw std::domain_error("StabilizerState: num_qubits < 1");
}

StabilizerState StabilizerState::zero_state(int num_qubits) {
  StabilizerState s(num_qubits, num_qubits);
  for (int q = 0; q < num_qubits; ++q) s.assign_bit(s.z_col(q), q, true);
  return s;
}

StabilizerState StabilizerState::maximally_mixed(int num_qubits) {
  return StabilizerState(num_qubits, 0);
}

StabilizerState StabilizerState::zero_with_mixed_qubit(int num_qubits,
                                                       int mixed_site) {
  if (mixed_site < 0 || mixed_site >= num_qubits)
    throw std::domain_error("zero_with_mixed_qubit: site out of range");
  StabilizerState s(num_qubits, num_qubits - 1);
  int row = 0;
  for (int q = 0; q < num_qubits; ++q) {
    if (q == mixed_site) continue;
    s.assign_bit(s.z_col(q), row++, true);
  }
  return s;
}

void StabilizerState::apply_gate(const CliffordGate2Q& gate, int i, int j) {
  if (i == j || i < 0 || j < 0 || i >= num_qubits_ || j >= num_qubits_)
    throw std::domain_error("apply_gate: invalid site pair");
  cache_.valid = false;

  const LocalPauli* images[4] = {
      &gate.image(CliffordGate2Q::kX0), &gate.image(CliffordGate2Q::kX1),
      &gate.image(CliffordGate2Q::kZ0), &gate.image(CliffordGate2Q::kZ1)};

  std::uint64_t* xi = x_col(i);
  std::uint64_t* xj = x_col(j);
  std::uint64_t* zi = z_col(i);
  std::uint64_t* zj = z_col(j);

  const int blocks = gen_blocks();
  for (int b = 0; b < blocks; ++b) {
    // Selector words over 64 generators, in the product order
    // Im(X_i)^{x_i} Im(X_j)^{x_j} Im(Z_i)^{z_i} Im(Z_j)^{z_j}.
    const std::uint64_t sel[4] = {xi[b], xj[b], zi[b], zj[b]};
    std::uint64_t ax0 = 0, ax1 = 0, az0 = 0, az1 = 0;  // accumulator bits
    std::uint64_t s0 = 0, s1 = 0;                      // phase increment mod 4
    for (int g = 0; g < 4; ++g) {
      const LocalPauli& im = *images[g];
      const std::uint64_t w = sel[g];
      std::uint64_t cross = 0;  // parity of acc.z & im.x, per generator
      if (im.x & 1) cross ^= az0;
      if (im.x & 2) cross ^= az1;
      const std::uint64_t add0 = (im.phase & 1) ? w : 0;
      std::uint64_t add1 = ((im.phase & 2) ? ~0ULL : 0ULL) ^ cross;
      add1 &= w;
      const std::uint64_t carry = s0 & add0;
      s0 ^= add0;
      s1 ^= add1 ^ carry;
      if (im.x & 1) ax0 ^= w;
      if (im.x & 2) ax1 ^= w;
      if (im.z & 1) az0 ^= w;
      if (im.z & 2) az1 ^= w;
    }
    xi[b] = ax0;
    xj[b] = ax1;
    zi[b] = az0;
    zj[b] = az1;
    const std::uint64_t carry = phase_lo_[b] & s0;
    phase_lo_[b] ^= s0;
    phase_hi_[b] ^= s1 ^ carry;
  }
}

void StabilizerState::multiply_rows_by(std::span<const std::uint64_t> mask,
                                       int row) {
  // Rows selected by `mask` are multiplied (on the right) by generator `row`.
  // All generators commute so the order of the factors is immaterial.
  const int blocks = gen_blocks();
  std::vector<int> xs, zs;
  xs.reserve(num_qubits_);
  zs.reserve(num_qubits_);
  for (int q = 0; q < num_qubits_; ++q) {
    if (get_bit(x_col(q), row)) xs.push_back(q);
    if (get_bit(z_col(q), row)) zs.push_back(q);
  }
  const int s_r = static_cast<int>(get_bit(phase_lo_.data(), row)) +
                  2 * static_cast<int>(get_bit(phase_hi_.data(), row));

  // par[b] = per-generator parity of (z_gen . x_row).
  std::vector<std::uint64_t> par(blocks, 0);
  for (int q : xs) {
    const std::uint64_t* zc = z_col(q);
    for (int b = 0; b < blocks; ++b) par[b] ^= zc[b];
  }
  for (int b = 0; b < blocks; ++b) {
    const std::uint64_t add0 = (s_r & 1) ? mask[b] : 0;
    std::uint64_t add1 = ((s_r & 2) ? ~0ULL : 0ULL) ^ par[b];
    add1 &= mask[b];
    const std::uint64_t carry = phase_lo_[b] & add0;
    phase_lo_[b] ^= add0;
    phase_hi_[b] ^= add1 ^ carry;
  }
  for (int q : xs) {
    std::uint64_t* xc = x_col(q);
    for (int b = 0; b < blocks; ++b) xc[b] ^= mask[b];
  }
  for (int q : zs) {
    std::uint64_t* zc = z_col(q);
    for (int b = 0; b < blocks; ++b) zc[b] ^= mask[b];
  }
}

MeasureResult StabilizerState::measure_z(int site, RandomStream& rng) {
  if (site < 0 || site >= num_qubits_)
    throw std::domain_error("measure_z: site out of range");

  const int blocks = gen_blocks();
  const std::uint64_t* xc = x_col(site);
  std::vector<std::uint64_t> mask(xc, xc + blocks);

  int pivot = first_set_bit(mask);
  if (pivot >= 0) {
    // Case (a): repair the other anticommuting generators, then replace the
    // pivot generator by (-1)^m Z_site.
    mask[pivot >> 6] &= ~(1ULL << (pivot & 63));
    if (!all_zero(mask)) multiply_rows_by(mask, pivot);

    for (int q = 0; q < num_qubits_; ++q) {
      if (get_bit(x_col(q), pivot)) assign_bit(x_col(q), pivot, false);
      if (get_bit(z_col(q), pivot)) assign_bit(z_col(q), pivot, false);
    }
    const int outcome = rng.coin() ? 1 : 0;
    assign_bit(z_col(site), pivot, true);
    assign_bit(phase_lo_.data(), pivot, false);
    assign_bit(phase_hi_.data(), pivot, outcome != 0);
    cache_.valid = false;
    return {outcome, MeasureKind::kRandomFlip};
  }

  // Z_site commutes with every generator: either it is in the group
  // (deterministic outcome, state untouched) or independent (rank grows).
  ensure_cache();
  const int wx = (num_qubits_ + 63) / 64;
  const int rw = cache_.row_words;
  std::vector<std::uint64_t> residual(rw, 0), acc(rw, 0);
  residual[wx + (site >> 6)] |= 1ULL << (site & 63);
  int acc_s = 0;
  while (true) {
    int c = first_set_bit(residual);
    if (c < 0) break;
    // Map word-layout position back to the column index.
    const int col = (c < 64 * wx) ? c : num_qubits_ + (c - 64 * wx);
    const std::int32_t p = cache_.pivot_row[col];
    if (p < 0) {
      // Case (c): purification event.
      const int outcome = rng.coin() ? 1 : 0;
      append_generator_z(site, outcome);
      return {outcome, MeasureKind::kRankIncrease};
    }
    const std::uint64_t* prow = cache_.rows.data() +
                                static_cast<std::size_t>(p) * rw;
    acc_s += cache_.phases[p] +
             2 * static_cast<int>(parity_of_and(acc.data() + wx, prow, wx));
    for (int w = 0; w < rw; ++w) {
      acc[w] ^= prow[w];
      residual[w] ^= prow[w];
    }
  }
  // Case (b): acc equals +/-Z_site; the sign is the outcome.
  acc_s &= 3;
  if (acc_s & 1)
    throw std::logic_error("measure_z: non-Hermitian group element");
  return {acc_s >> 1, MeasureKind::kDeterministic};
}

void StabilizerState::append_generator_z(int site, int outcome) {
  if (num_gens_ >= num_qubits_)
    throw std::logic_error("measure_z: rank increase on a pure state");
  const int row = num_gens_;
  assign_bit(z_col(site), row, true);
  assign_bit(phase_lo_.data(), row, false);
  assign_bit(phase_hi_.data(), row, outcome != 0);
  ++num_gens_;
  cache_.valid = false;
}

void StabilizerState::ensure_cache() const {
  if (cache_.valid) return;
  const int wx = (num_qubits_ + 63) / 64;
  const int rw = 2 * wx;
  cache_.row_words = rw;
  cache_.num_rows = num_gens_;
  cache_.rows.assign(static_cast<std::size_t>(num_gens_) * rw, 0);
  cache_.phases.assign(num_gens_, 0);
  cache_.pivot_row.assign(2 * num_qubits_, -1);

  // Transpose the column storage into scratch rows (x block, then z block).
  const int blocks = gen_blocks();
  for (int q = 0; q < num_qubits_; ++q) {
    const std::uint64_t* xc = x_col(q);
    const std::uint64_t* zc = z_col(q);
    const std::uint64_t qm = 1ULL << (q & 63);
    const int qw = q >> 6;
    for (int b = 0; b < blocks; ++b) {
      std::uint64_t w = xc[b];
      while (w) {
        int r = b * 64 + std::countr_zero(w);
        w &= w - 1;
        cache_.rows[static_cast<std::size_t>(r) * rw + qw] |= qm;
      }
      w = zc[b];
      while (w) {
        int r = b * 64 + std::countr_zero(w);
        w &= w - 1;
        cache_.rows[static_cast<std::size_t>(r) * rw + wx + qw] |= qm;
      }
    }
  }
  for (int r = 0; r < num_gens_; ++r) {
    cache_.phases[r] =
        static_cast<std::uint8_t>(get_bit(phase_lo_.data(), r) +
                                  2 * get_bit(phase_hi_.data(), r));
  }

  // In-place elimination to row-echelon form with phase tracking.
  for (int r = 0; r < num_gens_; ++r) {
    std::uint64_t* cur = cache_.rows.data() + static_cast<std::size_t>(r) * rw;
    while (true) {
      int c = first_set_bit(std::span<const std::uint64_t>(cur, rw));
      if (c < 0)
        throw std::logic_error("StabilizerState: dependent generators");
      const int col = (c < 64 * wx) ? c : num_qubits_ + (c - 64 * wx);
      const std::int32_t p = cache_.pivot_row[col];
      if (p < 0) {
        cache_.pivot_row[col] = r;
        break;
      }
      const std::uint64_t* prow =
          cache_.rows.data() + static_cast<std::size_t>(p) * rw;
      cache_.phases[r] = static_cast<std::uint8_t>(
          (cache_.phases[r] + cache_.phases[p] +
           2 * parity_of_and(cur + wx, prow, wx)) &
          3);
      for (int w = 0; w < rw; ++w) cur[w] ^= prow[w];
    }
  }
  cache_.valid = true;
}

int StabilizerState::subsystem_entropy(std::span<const int> region) const {
  std::vector<std::uint64_t> in_region((num_qubits_ + 63) / 64, 0);
  int region_size = 0;
  for (int q : region) {
    if (q < 0 || q >= num_qubits_)
      throw std::domain_error("subsystem_entropy: site out of range");
    std::uint64_t m = 1ULL << (q & 63);
    if (!(in_region[q >> 6] & m)) {
      in_region[q >> 6] |= m;
      ++region_size;
    }
  }
  if (region_size == 0) return 0;

  // g_A = k - rank of the generator matrix restricted to the complement.
  // The rank is computed over the complement's column bit vectors, which
  // live contiguously in the column-major storage.
  const int blocks = gen_blocks();
  std::vector<std::uint64_t> scratch;
  scratch.reserve(static_cast<std::size_t>(2 * num_qubits_) * blocks);
  std::vector<std::int32_t> pivot_of(num_gens_, -1);
  int rank = 0;
  std::vector<std::uint64_t> tmp(blocks);
  auto insert = [&](const std::uint64_t* col) {
    std::copy(col, col + blocks, tmp.begin());
    while (true) {
      int p = first_set_bit(tmp);
      if (p < 0) return;
      if (pivot_of[p] < 0) {
        pivot_of[p] = rank;
        scratch.insert(scratch.end(), tmp.begin(), tmp.end());
        ++rank;
        return;
      }
      const std::uint64_t* prow =
          scratch.data() + static_cast<std::size_t>(pivot_of[p]) * blocks;
      for (int w = 0; w < blocks; ++w) tmp[w] ^= prow[w];
    }
  };
  for (int q = 0; q < num_qubits_; ++q) {
    if ((in_region[q >> 6] >> (q & 63)) & 1ULL) continue;
    insert(x_col(q));
    insert(z_col(q));
  }
  const int g = num_gens_ - rank;
  return region_size - g;
}

void StabilizerState::scramble_global(RandomStream& rng,
                                      ScrambleMethod method) {
  if (method == ScrambleMethod::kBrickwork) {
    std::vector<int> perm(num_qubits_);
    for (int q = 0; q < num_qubits_; ++q) perm[q] = q;
    for (int layer = 0; layer < 2 * num_qubits_; ++layer) {
      for (int q = num_qubits_ - 1; q > 0; --q) {
        int t = static_cast<int>(rng.uniform_below(q + 1));
        std::swap(perm[q], perm[t]);
      }
      for (int g = 0; g + 1 < num_qubits_; g += 2)
        apply_gate(sample_clifford_2q(rng), perm[g], perm[g + 1]);
    }
    return;
  }

  // Exactly uniform L-qubit Clifford: sample a uniform element of
  // Sp(2L, GF(2)) by drawing hyperbolic pairs (image of X_q, image of Z_q)
  // with symplectic Gram-Schmidt projection and rejection, then uniform
  // sign bits for every generator image.
  const int L = num_qubits_;
  const int wx = (L + 63) / 64;
  const int rw = 2 * wx;
  const std::uint64_t tail =
      (L & 63) ? ((1ULL << (L & 63)) - 1) : ~0ULL;

  auto sympl = [&](const std::uint64_t* a, const std::uint64_t* b) {
    return parity_of_and(a, b + wx, wx) ^ parity_of_and(a + wx, b, wx);
  };
  auto fill_random = [&](std::uint64_t* v) {
    for (int w = 0; w < rw; ++w) v[w] = rng.next_u64();
    v[wx - 1] &= tail;
    v[rw - 1] &= tail;
  };

  std::vector<std::uint64_t> vs(static_cast<std::size_t>(L) * rw);
  std::vector<std::uint64_t> ws(static_cast<std::size_t>(L) * rw);
  std::vector<std::uint64_t> cand(rw);
  for (int m = 0; m < L; ++m) {
    std::uint64_t* vm = vs.data() + static_cast<std::size_t>(m) * rw;
    std::uint64_t* wm = ws.data() + static_cast<std::size_t>(m) * rw;
    auto project = [&](std::uint64_t* v) {
      for (int t = 0; t < m; ++t) {
        const std::uint64_t* vt = vs.data() + static_cast<std::size_t>(t) * rw;
        const std::uint64_t* wt = ws.data() + static_cast<std::size_t>(t) * rw;
        const std::uint64_t c_w = sympl(v, wt);
        const std::uint64_t c_v = sympl(v, vt);
        if (c_w)
          for (int w = 0; w < rw; ++w) v[w] ^= vt[w];
        if (c_v)
          for (int w = 0; w < rw; ++w) v[w] ^= wt[w];
      }
    };
    do {
      fill_random(cand.data());
      project(cand.data());
    } while (all_zero(cand));
    std::copy(cand.begin(), cand.end(), vm);
    do {
      fill_random(cand.data());
      project(cand.data());
    } while (sympl(vm, cand.data()) == 0);
    std::copy(cand.begin(), cand.end(), wm);
  }
  std::vector<std::uint8_t> sign_x(L), sign_z(L);
  for (int q = 0; q < L; ++q) sign_x[q] = rng.coin();
  for (int q = 0; q < L; ++q) sign_z[q] = rng.coin();

  // Conjugate every generator through the sampled Clifford.
  const int blocks = gen_blocks();
  std::vector<std::uint64_t> old_rows(static_cast<std::size_t>(num_gens_) * rw,
                                      0);
  std::vector<std::uint8_t> old_phase(num_gens_);
  for (int q = 0; q < L; ++q) {
    const std::uint64_t* xc = x_col(q);
    const std::uint64_t* zc = z_col(q);
    const std::uint64_t qm = 1ULL << (q & 63);
    const int qw = q >> 6;
    for (int b = 0; b < blocks; ++b) {
      std::uint64_t w = xc[b];
      while (w) {
        int r = b * 64 + std::countr_zero(w);
        w &= w - 1;
        old_rows[static_cast<std::size_t>(r) * rw + qw] |= qm;
      }
      w = zc[b];
      while (w) {
        int r = b * 64 + std::countr_zero(w);
        w &= w - 1;
        old_rows[static_cast<std::size_t>(r) * rw + wx + qw] |= qm;
      }
    }
  }
  for (int r = 0; r < num_gens_; ++r)
    old_phase[r] = static_cast<std::uint8_t>(get_bit(phase_lo_.data(), r) +
                                             2 * get_bit(phase_hi_.data(), r));

  std::fill(x_bits_.begin(), x_bits_.end(), 0);
  std::fill(z_bits_.begin(), z_bits_.end(), 0);
  std::fill(phase_lo_.begin(), phase_lo_.end(), 0);
  std::fill(phase_hi_.begin(), phase_hi_.end(), 0);

  std::vector<std::uint64_t> acc(rw);
  for (int r = 0; r < num_gens_; ++r) {
    const std::uint64_t* row =
        old_rows.data() + static_cast<std::size_t>(r) * rw;
    std::fill(acc.begin(), acc.end(), 0);
    int s = old_phase[r];
    auto mul_image = [&](const std::uint64_t* img, int sign) {
      const int s_img =
          static_cast<int>(parity_of_and(img, img + wx, wx)) + 2 * sign;
      s += s_img + 2 * static_cast<int>(parity_of_and(acc.data() + wx, img, wx));
      for (int w = 0; w < rw; ++w) acc[w] ^= img[w];
    };
    for (int q = 0; q < L; ++q)
      if ((row[q >> 6] >> (q & 63)) & 1ULL)
        mul_image(vs.data() + static_cast<std::size_t>(q) * rw, sign_x[q]);
    for (int q = 0; q < L; ++q)
      if ((row[wx + (q >> 6)] >> (q & 63)) & 1ULL)
        mul_image(ws.data() + static_cast<std::size_t>(q) * rw, sign_z[q]);

    for (int q = 0; q < L; ++q) {
      if ((acc[q >> 6] >> (q & 63)) & 1ULL) assign_bit(x_col(q), r, true);
      if ((acc[wx + (q >> 6)] >> (q & 63)) & 1ULL)
        assign_bit(z_col(q), r, true);
    }
    assign_bit(phase_lo_.data(), r, s & 1);
    assign_bit(phase_hi_.data(), r, (s >> 1) & 1);
  }
  cache_.valid = false;
}

PauliOperator StabilizerState::generator(int index) const {
  if (index < 0 || index >= num_gens_)
    throw std::domain_error("generator: index out of range");
  PauliOperator p(num_qubits_);
  for (int q = 0; q < num_qubits_; ++q) {
    if (get_bit(x_col(q), index)) p.set_x(q, true);
    if (get_bit(z_col(q), index)) p.set_z(q, true);
  }
  p.set_phase(static_cast<std::uint8_t>(get_bit(phase_lo_.data(), index) +
                                        2 * get_bit(phase_hi_.data(), index)));
  return p;
}

bool StabilizerState::check_invariants() const {
  std::vector<PauliOperator> rows;
  rows.reserve(num_gens_);
  for (int r = 0; r < num_gens_; ++r) rows.push_back(generator(r));
  for (int a = 0; a < num_gens_; ++a) {
    if (!rows[a].is_hermitian()) return false;
    for (int b = a + 1; b < num_gens_; ++b)
      if (!rows[a].commutes_with(rows[b])) return false;
  }
  // Independence: the full restriction (complement of the empty set) must
  // have rank k, i.e. S_emptyset computed through the rank path must be 0.
  try {
    ensure_cache();
  } catch (const std::logic_error&) {
    return false;
  }
  return true;
}

bool StabilizerState::operator==(const StabilizerState& other) const {
  return num_qubits_ == other.num_qubits_ && num_gens_ == other.num_gens_ &&
         x_bits_ == other.x_bits_ && z_bits_ == other.z_bits_ &&
         phase_lo_ == other.phase_lo_ && phase_hi_ == other.phase_hi_;
}

std::vector<int> ring_interval(int num_qubits, int start, int len) {
  std::vector<int> sites(static_cast<std::size_t>(len));
  for (int i = 0; i < len; ++i)
    sites[i] = ((start + i) % num_qubits + num_qubits) % num_qubits;
  return sites;
}

}  // namespace mipt
