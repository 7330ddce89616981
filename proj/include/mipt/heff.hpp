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

#ifndef MIPT_HEFF_HPP
#define MIPT_HEFF_HPP

#include <Eigen/Dense>
#include <span>

namespace mipt {

/// sum_{r>=1} r^{-alpha}, evaluated by direct summation plus an
/// Euler-Maclaurin tail, to relative precision ~1e-14. Requires alpha > 1.
double power_law_zeta(double alpha);

/// Long-range Ising chain
///
///   H = sum_{i<j} -J/|i-j|^alpha (3 s^z_i s^z_j - s^x_i s^x_j)
///       - h sum_j s^x_j,     h = Gamma/3 + sum_{r>=1} J/(9 r^alpha),
///
/// on an open chain of L <= 14 sites.
struct HeffSpec {
  int num_sites;
  double coupling;  // J
  double gamma;     // measurement rate Gamma
  double alpha;

  double field() const;  // derived transverse field h
  void validate() const;
};

/// Dense real-symmetric matrix in the s^z product basis (bit 0 of the
/// index is site 0; bit value 0 means s^z = +1).
Eigen::MatrixXd build_hamiltonian(const HeffSpec& spec);

struct GroundState {
  double energy;
  Eigen::VectorXd vector;
  double residual;
  int iterations;
};

/// Lowest eigenpair by Lanczos with full reorthogonalization; the final
/// residual ||H psi - E psi|| is verified below 1e-10 (throws otherwise).
GroundState ground_state(const Eigen::MatrixXd& hamiltonian);

/// Same, restricted to the even sector of the prod_i s^x_i symmetry (the
/// sector choice keeps the reference-state overlap stable when the two
/// lowest states are nearly degenerate).
GroundState ground_state_parity_even(const Eigen::MatrixXd& hamiltonian,
                                     int num_sites);

/// Second conditional Renyi entropy (nats) from the domain-wall matrix
/// element
///
///   e^{-S_A} = <I| prod_{i in A} s^x_i |psi> / <I|psi>,
///
/// with the symmetry-breaking reference product state
/// |I> = prod_i [(sqrt3+1)|up> + (sqrt3-1)|down>]/2 (normalized here).
/// Throws std::runtime_error when |<I|psi>| < 1e-12.
double renyi2_from_ground_state(const Eigen::VectorXd& psi, int num_sites,
                                std::span<const int> region);

/// Full pipeline: build H, solve the even-sector ground state, evaluate.
double renyi2_entropy(const HeffSpec& spec, std::span<const int> region);

/// Contiguous region of `len` sites centered in the open chain, so both
/// inserted domain walls sit in the bulk.
std::vector<int> centered_region(int num_sites, int len);

}  // namespace mipt

#endif  // MIPT_HEFF_HPP
