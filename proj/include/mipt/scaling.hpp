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

#ifndef MIPT_SCALING_HPP
#define MIPT_SCALING_HPP

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace mipt {

enum class CollapseForm {
  kTauP,     // y = tau_p:       x = (p - p_c) L^{1/nu},  Y = y / L^z
  kIab,      // y = I_AB:        x = (p - p_c) L^{1/nu},  Y = y / L^beta
  kGlobalS,  // y = S(p, t):     x = (p - p_c) L^{1/nu},  Y = y, slice-wise
};

/// One data point of a collapse. For kGlobalS the point belongs to a fixed
/// rescaled-time slice t/L^z = c, tagged by `slice`.
struct CollapsePoint {
  int num_qubits;
  double p;
  double y;
  double dy;
  int slice = 0;
};

struct CollapseParams {
  double p_c;
  double nu;
  double exponent;  // z for kTauP / kGlobalS, beta for kIab
};

/// Master-curve collapse quality: every point is compared against the
/// linear interpolation of the two nearest (in rescaled x) points of other
/// system sizes within the same slice, normalized by the combined variance,
/// averaged over all interpolatable points.
///
/// Throws std::domain_error for fewer than 3 distinct sizes, non-positive
/// dy, or when no point is interpolatable.
double collapse_quality(std::span<const CollapsePoint> data,
                        const CollapseParams& params, CollapseForm form);

struct FitGrid {
  double p_c_min = 0.05, p_c_max = 0.5;
  double nu_min = 0.7, nu_max = 3.0;
  double exp_min = 0.0, exp_max = 2.0;
  int nodes = 5;  // per axis
};

struct ScalingFit {
  CollapseForm form = CollapseForm::kTauP;
  double p_c = 0.0;
  double nu = 0.0;
  double exponent = 0.0;
  double quality = 0.0;
  bool converged = false;

  // Bootstrap results (empty unless bootstrap_exponents filled them in).
  std::vector<std::array<double, 3>> bootstrap;  // (p_c, nu, exponent)
  std::array<double, 2> ci_p_c{0.0, 0.0};
  std::array<double, 2> ci_nu{0.0, 0.0};
  std::array<double, 2> ci_exponent{0.0, 0.0};
  int n_boot = 0;
  int dropped_replicates = 0;
  bool flagged = false;
};

/// Minimizes collapse_quality with Nelder-Mead restarted from a coarse
/// grid over (p_c, nu, exponent). Deterministic given data and grid.
ScalingFit fit_collapse(std::span<const CollapsePoint> data, CollapseForm form,
                        const FitGrid& grid = {});

/// Raw per-trajectory samples of one (L, p) cell.
struct RawCell {
  int num_qubits;
  double p;
  std::vector<double> values;
  std::vector<char> censored;  // optional; tau_p only
};

struct BootstrapOptions {
  int n_boot = 2500;
  int subsample = -1;  // -1 -> max(1, n - 100), following the 700->600 rule
  std::uint64_t seed = 0;
  int workers = 1;
  FitGrid grid{};
};

/// Bootstrap over trajectories: each replicate resamples every cell with
/// replacement at the subsample size, recomputes the summary statistic
/// (median for tau_p, mean otherwise), refits the collapse seeded at the
/// full-sample fit, and reports 95% percentile intervals. Replicates where
/// a needed cell becomes >50% censored are dropped and counted; more than
/// 10% drops flags the fit.
ScalingFit bootstrap_exponents(std::span<const RawCell> cells,
                               CollapseForm form,
                               const BootstrapOptions& options = {});

/// Builds collapse points from raw cells (cells with a censored majority
/// are excluded). dy is a fixed-seed bootstrap standard error of the
/// statistic.
std::vector<CollapsePoint> summarize_cells(std::span<const RawCell> cells,
                                           CollapseForm form,
                                           std::uint64_t seed = 0);

struct PowerFit {
  double amplitude = 0.0;
  double exponent = 0.0;
  double residual = 0.0;  // rms residual in log space
  double l_min = 0.0;
  int n_used = 0;
};

/// Least-squares line in (log L, log S). Points with S <= 0 or L < L_min
/// are excluded; fewer than 3 remaining throws std::domain_error.
PowerFit fit_power_law(std::span<const std::pair<double, double>> points,
                       double l_min = 0.0);

/// Expected number of gates in one unitary layer whose endpoints straddle
/// the half-chain cut of the periodic chain (exact sum over the pair
/// distribution: uniform site, P(r) distance, uniform direction).
double expected_crossings(int num_qubits, double alpha, int gates_per_layer);

// ---------------------------------------------------------------------
// Global-entropy collapse support. S(p, t) is evaluated at the rescaled
// time slices t = c * L^z, interpolated from the recorded series.
// ---------------------------------------------------------------------

struct SeriesCell {
  int num_qubits;
  double p;
  std::vector<double> times;
  std::vector<double> mean_s;
  std::vector<double> se_s;
};

inline constexpr std::array<double, 3> kDefaultTimeSlices{0.5, 2.0 / 3.0, 2.0};

/// Extracts one collapse point per (cell, slice) at t = c * L^z by linear
/// interpolation in t. Slices outside the recorded range are skipped.
std::vector<CollapsePoint> global_s_slice_points(
    std::span<const SeriesCell> cells, double z,
    std::span<const double> slices);

/// Direct three-parameter fit of the S(p, t) collapse, rebuilding the slice
/// points for every candidate z.
ScalingFit fit_collapse_global_s(std::span<const SeriesCell> cells,
                                 std::span<const double> slices,
                                 const FitGrid& grid = {});

/// Quality of the S(p, t) collapse at imported parameters (no refit).
double global_s_quality(std::span<const SeriesCell> cells,
                        const CollapseParams& params,
                        std::span<const double> slices);

}  // namespace mipt

#endif  // MIPT_SCALING_HPP
