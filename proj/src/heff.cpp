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

#include "mipt/heff.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "mipt/rng.hpp"

namespace mipt {

double power_law_zeta(double alpha) {
  if (alpha <= 1.0)
    throw std::domain_error("power_law_zeta: requires alpha > 1");
  constexpr int kN = 256;
  double s = 0.0;
  for (int r = 1; r <= kN; ++r) s += std::pow(static_cast<double>(r), -alpha);
  // Euler-Maclaurin tail from N: N^{1-a}/(a-1) - N^{-a}/2 + corrections.
  const double n = static_cast<double>(kN);
  const double a = alpha;
  double tail = std::pow(n, 1.0 - a) / (a - 1.0) - 0.5 * std::pow(n, -a);
  tail += (a / 12.0) * std::pow(n, -a - 1.0);
  tail -= (a * (a + 1.0) * (a + 2.0) / 720.0) * std::pow(n, -a - 3.0);
  tail += (a * (a + 1.0) * (a + 2.0) * (a + 3.0) * (a + 4.0) / 30240.0) *
          std::pow(n, -a - 5.0);
  return s + tail;
}

double HeffSpec::field() const {
  return gamma / 3.0 + coupling / 9.0 * power_law_zeta(alpha);
}

void HeffSpec::validate() const {
  if (num_sites < 2 || num_sites > 14)
    throw std::domain_error("HeffSpec: num_sites must be in [2, 14]");
  if (alpha <= 1.0) throw std::domain_error("HeffSpec: alpha must exceed 1");
  if (coupling < 0.0 || gamma < 0.0)
    throw std::domain_error("HeffSpec: negative coupling or gamma");
}

Eigen::MatrixXd build_hamiltonian(const HeffSpec& spec) {
  spec.validate();
  const int L = spec.num_sites;
  const std::size_t dim = std::size_t{1} << L;
  const double h = spec.field();

  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
  std::vector<double> jt(static_cast<std::size_t>(L) * L, 0.0);
  for (int i = 0; i < L; ++i)
    for (int j = i + 1; j < L; ++j)
      jt[i * L + j] = spec.coupling * std::pow(static_cast<double>(j - i),
                                               -spec.alpha);

  for (std::size_t n = 0; n < dim; ++n) {
    double diag = 0.0;
    for (int i = 0; i < L; ++i) {
      const double zi = ((n >> i) & 1) ? -1.0 : 1.0;
      for (int j = i + 1; j < L; ++j) {
        const double zj = ((n >> j) & 1) ? -1.0 : 1.0;
        diag += -3.0 * jt[i * L + j] * zi * zj;
        H(n ^ ((std::size_t{1} << i) | (std::size_t{1} << j)), n) +=
            jt[i * L + j];
      }
      H(n ^ (std::size_t{1} << i), n) += -h;
    }
    H(n, n) += diag;
  }
  return H;
}

namespace {

GroundState lanczos_lowest(const Eigen::MatrixXd& H, int parity_sites) {
  const Eigen::Index dim = H.rows();
  if (dim < 1 || H.cols() != dim)
    throw std::domain_error("ground_state: matrix must be square");

  const bool use_parity = parity_sites > 0;
  const std::size_t flip_mask =
      use_parity ? ((std::size_t{1} << parity_sites) - 1) : 0;
  auto project_even = [&](Eigen::VectorXd& v) {
    if (!use_parity) return;
    Eigen::VectorXd pv(dim);
    for (Eigen::Index n = 0; n < dim; ++n)
      pv[n] = v[static_cast<Eigen::Index>(static_cast<std::size_t>(n) ^
                                          flip_mask)];
    v = 0.5 * (v + pv);
  };

  // Deterministic pseudo-random start vector.
  Eigen::VectorXd v(dim);
  for (Eigen::Index n = 0; n < dim; ++n) {
    const std::uint64_t h64 = splitmix64(0x9d06f1e570a3c5a1ULL + n);
    v[n] = static_cast<double>(h64 >> 11) * 0x1.0p-53 - 0.5;
  }
  project_even(v);
  double nrm = v.norm();
  if (nrm < 1e-12) throw std::runtime_error("ground_state: bad start vector");
  v /= nrm;

  const int max_iter = static_cast<int>(std::min<Eigen::Index>(dim, 400));
  Eigen::MatrixXd basis(dim, max_iter);
  std::vector<double> diag, offdiag;
  basis.col(0) = v;

  auto ritz = [&](int m, double& value, Eigen::VectorXd& s_out) {
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      T(i, i) = diag[i];
      if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = offdiag[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    value = es.eigenvalues()(0);
    s_out = es.eigenvectors().col(0);
  };

  GroundState result{0.0, Eigen::VectorXd(), 1.0, 0};
  int m = 0;
  bool done = false;
  while (m < max_iter && !done) {
    Eigen::VectorXd w = H * basis.col(m);
    project_even(w);
    const double a = basis.col(m).dot(w);
    diag.push_back(a);
    w -= a * basis.col(m);
    if (m > 0) w -= offdiag[m - 1] * basis.col(m - 1);
    // Full reorthogonalization.
    w -= basis.leftCols(m + 1) *
         (basis.leftCols(m + 1).transpose() * w);
    const double b = w.norm();
    ++m;
    const bool breakdown = b < 1e-13;
    if (breakdown || m == max_iter || (m % 5 == 0 && m >= 2)) {
      double value;
      Eigen::VectorXd s;
      ritz(m, value, s);
      const double est = breakdown ? 0.0 : std::abs(b * s(m - 1));
      if (breakdown || est < 1e-11 || m == max_iter) {
        Eigen::VectorXd psi = basis.leftCols(m) * s;
        psi /= psi.norm();
        const double res = (H * psi - value * psi).norm();
        result = {value, std::move(psi), res, m};
        done = true;
        break;
      }
    }
    if (m < max_iter) {
      offdiag.push_back(b);
      basis.col(m) = w / b;
    }
  }
  if (!done || result.residual > 1e-10)
    throw std::runtime_error(
        "ground_state: Lanczos did not converge, residual " +
        std::to_string(result.residual));
  return result;
}

}  // namespace

GroundState ground_state(const Eigen::MatrixXd& hamiltonian) {
  return lanczos_lowest(hamiltonian, 0);
}

GroundState ground_state_parity_even(const Eigen::MatrixXd& hamiltonian,
                                     int num_sites) {
  if ((Eigen::Index{1} << num_sites) != hamiltonian.rows())
    throw std::domain_error("ground_state_parity_even: dimension mismatch");
  return lanczos_lowest(hamiltonian, num_sites);
}

double renyi2_from_ground_state(const Eigen::VectorXd& psi, int num_sites,
                                std::span<const int> region) {
  const std::size_t dim = std::size_t{1} << num_sites;
  if (static_cast<Eigen::Index>(dim) != psi.size())
    throw std::domain_error("renyi2: dimension mismatch");
  std::size_t mask = 0;
  for (int site : region) {
    if (site < 0 || site >= num_sites)
      throw std::domain_error("renyi2: site out of range");
    mask |= std::size_t{1} << site;
  }

  // Normalized per-site reference amplitudes: <I|n> = wu^{#up} wd^{#down}.
  const double wu = (std::sqrt(3.0) + 1.0) / (2.0 * std::sqrt(2.0));
  const double wd = (std::sqrt(3.0) - 1.0) / (2.0 * std::sqrt(2.0));
  std::vector<double> weight(static_cast<std::size_t>(num_sites) + 1);
  for (int k = 0; k <= num_sites; ++k)
    weight[k] = std::pow(wu, num_sites - k) * std::pow(wd, k);

  double den = 0.0, num = 0.0;
  for (std::size_t n = 0; n < dim; ++n) {
    const double w = weight[std::popcount(n)];
    den += w * psi[static_cast<Eigen::Index>(n)];
    num += w * psi[static_cast<Eigen::Index>(n ^ mask)];
  }
  if (std::abs(den) < 1e-12)
    throw std::runtime_error("renyi2: degenerate reference-state overlap");
  const double ratio = num / den;
  if (ratio <= 0.0)
    throw std::runtime_error("renyi2: non-positive matrix-element ratio");
  return -std::log(ratio);
}

double renyi2_entropy(const HeffSpec& spec, std::span<const int> region) {
  const Eigen::MatrixXd H = build_hamiltonian(spec);
  const GroundState gs = ground_state_parity_even(H, spec.num_sites);
  return renyi2_from_ground_state(gs.vector, spec.num_sites, region);
}

std::vector<int> centered_region(int num_sites, int len) {
  if (len < 0 || len > num_sites)
    throw std::domain_error("centered_region: bad length");
  std::vector<int> region(static_cast<std::size_t>(len));
  const int start = (num_sites - len) / 2;
  for (int i = 0; i < len; ++i) region[i] = start + i;
  return region;
}

}  // namespace mipt
