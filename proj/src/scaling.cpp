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

#include "mipt/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <stdexcept>

#include "mipt/circuit.hpp"
#include "mipt/parallel.hpp"
#include "mipt/rng.hpp"

namespace mipt {

namespace {

struct ScaledPoint {
  double x;
  double y;
  double var;
  int size_id;
  int slice;
};

double pow_l(int L, double e) {
  return std::pow(static_cast<double>(L), e);
}

std::vector<ScaledPoint> rescale(std::span<const CollapsePoint> data,
                                 const CollapseParams& params,
                                 CollapseForm form) {
  std::vector<ScaledPoint> out;
  out.reserve(data.size());
  for (const auto& pt : data) {
    if (pt.dy <= 0.0)
      throw std::domain_error("collapse_quality: dy must be positive");
    ScaledPoint s;
    s.x = (pt.p - params.p_c) * pow_l(pt.num_qubits, 1.0 / params.nu);
    const double scale =
        form == CollapseForm::kGlobalS
            ? 1.0
            : 1.0 / pow_l(pt.num_qubits, params.exponent);
    s.y = pt.y * scale;
    s.var = pt.dy * scale * pt.dy * scale;
    s.size_id = pt.num_qubits;
    s.slice = form == CollapseForm::kGlobalS ? pt.slice : 0;
    if (!std::isfinite(s.x) || !std::isfinite(s.y) || !std::isfinite(s.var))
      continue;  // extreme parameters; the point is not interpolatable
    out.push_back(s);
  }
  return out;
}

/// Houdayer-Hartmann master-curve deviation over one slice group.
void accumulate_quality(std::vector<ScaledPoint>& pts, double& sum,
                        std::size_t& count) {
  std::sort(pts.begin(), pts.end(),
            [](const ScaledPoint& a, const ScaledPoint& b) { return a.x < b.x; });
  const int n = static_cast<int>(pts.size());
  for (int i = 0; i < n; ++i) {
    const ScaledPoint& pt = pts[i];
    int left = -1, right = -1;
    for (int j = i - 1; j >= 0; --j)
      if (pts[j].size_id != pt.size_id) {
        left = j;
        break;
      }
    for (int j = i + 1; j < n; ++j)
      if (pts[j].size_id != pt.size_id) {
        right = j;
        break;
      }
    if (left < 0 || right < 0) continue;
    const ScaledPoint& a = pts[left];
    const ScaledPoint& b = pts[right];
    double yhat, var_hat;
    if (b.x - a.x < 1e-300) {
      yhat = 0.5 * (a.y + b.y);
      var_hat = 0.25 * (a.var + b.var);
    } else {
      const double w = (pt.x - a.x) / (b.x - a.x);
      yhat = (1.0 - w) * a.y + w * b.y;
      var_hat = (1.0 - w) * (1.0 - w) * a.var + w * w * b.var;
    }
    const double d = pt.y - yhat;
    sum += d * d / (pt.var + var_hat);
    ++count;
  }
}

constexpr double kPenalty = 1e12;

bool params_in_sane_box(const CollapseParams& q) {
  return q.p_c > -0.5 && q.p_c < 1.5 && q.nu > 0.05 && q.nu < 25.0 &&
         q.exponent > -5.0 && q.exponent < 5.0;
}

// -------------------------------------------------------------------
// Nelder-Mead simplex minimization in 3 dimensions.
// -------------------------------------------------------------------

struct NmResult {
  std::array<double, 3> x;
  double f;
  bool converged;
};

NmResult nelder_mead(const std::function<double(const std::array<double, 3>&)>& f,
                     std::array<double, 3> x0, std::array<double, 3> step,
                     int max_iter = 500, double xtol = 1e-6,
                     double ftol = 1e-10) {
  constexpr int kDim = 3;
  std::array<std::array<double, 3>, kDim + 1> xs;
  std::array<double, kDim + 1> fs;
  xs[0] = x0;
  fs[0] = f(x0);
  for (int d = 0; d < kDim; ++d) {
    xs[d + 1] = x0;
    xs[d + 1][d] += step[d];
    fs[d + 1] = f(xs[d + 1]);
  }
  auto order = [&] {
    for (int i = 0; i <= kDim; ++i)
      for (int j = i + 1; j <= kDim; ++j)
        if (fs[j] < fs[i]) {
          std::swap(fs[i], fs[j]);
          std::swap(xs[i], xs[j]);
        }
  };
  bool converged = false;
  for (int iter = 0; iter < max_iter; ++iter) {
    order();
    double spread = 0.0;
    for (int d = 0; d < kDim; ++d)
      spread = std::max(spread, std::abs(xs[kDim][d] - xs[0][d]));
    if (spread < xtol && std::abs(fs[kDim] - fs[0]) < ftol) {
      converged = true;
      break;
    }
    std::array<double, 3> centroid{0, 0, 0};
    for (int i = 0; i < kDim; ++i)
      for (int d = 0; d < kDim; ++d) centroid[d] += xs[i][d] / kDim;
    auto blend = [&](double t) {
      std::array<double, 3> p;
      for (int d = 0; d < kDim; ++d)
        p[d] = centroid[d] + t * (xs[kDim][d] - centroid[d]);
      return p;
    };
    const auto xr = blend(-1.0);
    const double fr = f(xr);
    if (fr < fs[0]) {
      const auto xe = blend(-2.0);
      const double fe = f(xe);
      if (fe < fr) {
        xs[kDim] = xe;
        fs[kDim] = fe;
      } else {
        xs[kDim] = xr;
        fs[kDim] = fr;
      }
    } else if (fr < fs[kDim - 1]) {
      xs[kDim] = xr;
      fs[kDim] = fr;
    } else {
      const auto xc = blend(fr < fs[kDim] ? -0.5 : 0.5);
      const double fc = f(xc);
      if (fc < std::min(fr, fs[kDim])) {
        xs[kDim] = xc;
        fs[kDim] = fc;
      } else {
        for (int i = 1; i <= kDim; ++i) {
          for (int d = 0; d < kDim; ++d)
            xs[i][d] = xs[0][d] + 0.5 * (xs[i][d] - xs[0][d]);
          fs[i] = f(xs[i]);
        }
      }
    }
  }
  order();
  return {xs[0], fs[0], converged};
}

ScalingFit minimize_quality(
    const std::function<double(const CollapseParams&)>& quality,
    CollapseForm form, const FitGrid& grid) {
  auto cost = [&](const std::array<double, 3>& x) {
    CollapseParams q{x[0], x[1], x[2]};
    if (!params_in_sane_box(q)) return kPenalty;
    try {
      return quality(q);
    } catch (const std::domain_error&) {
      return kPenalty;
    }
  };
  NmResult best{{0, 0, 0}, std::numeric_limits<double>::infinity(), false};
  const int n = std::max(1, grid.nodes);
  auto node = [n](double lo, double hi, int i) {
    return n == 1 ? 0.5 * (lo + hi)
                  : lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        std::array<double, 3> x0{node(grid.p_c_min, grid.p_c_max, a),
                                 node(grid.nu_min, grid.nu_max, b),
                                 node(grid.exp_min, grid.exp_max, c)};
        NmResult r = nelder_mead(cost, x0, {0.02, 0.15, 0.1});
        if (r.f < best.f) best = r;
      }
  ScalingFit fit;
  fit.form = form;
  fit.p_c = best.x[0];
  fit.nu = best.x[1];
  fit.exponent = best.x[2];
  fit.quality = best.f;
  fit.converged = best.converged && best.f < kPenalty;
  return fit;
}

double percentile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  if (v.empty()) return 0.0;
  const double pos = q * (static_cast<double>(v.size()) - 1.0);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const double w = pos - static_cast<double>(lo);
  return (1.0 - w) * v[lo] + w * v[hi];
}

double statistic_of(CollapseForm form, std::span<const double> values) {
  if (values.empty()) return 0.0;
  if (form == CollapseForm::kTauP) {
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    return (n % 2) ? sorted[n / 2]
                   : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  }
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

/// Fixed-seed bootstrap standard error of the cell statistic.
double statistic_se(CollapseForm form, const RawCell& cell,
                    std::uint64_t seed) {
  constexpr int kB = 256;
  const std::size_t n = cell.values.size();
  if (n < 2) return 1.0;
  RandomStream rng = RandomStream::child(seed, 0x5e5e5e5eULL);
  std::vector<double> resample(n);
  std::vector<double> stats(kB);
  for (int b = 0; b < kB; ++b) {
    for (std::size_t i = 0; i < n; ++i)
      resample[i] = cell.values[rng.uniform_below(n)];
    stats[b] = statistic_of(form, resample);
  }
  double m = 0.0;
  for (double s : stats) m += s;
  m /= kB;
  double ss = 0.0;
  for (double s : stats) ss += (s - m) * (s - m);
  const double se = std::sqrt(ss / (kB - 1));
  return se > 0.0 ? se : 1e-9 * std::max(1.0, std::abs(m));
}

}  // namespace

double collapse_quality(std::span<const CollapsePoint> data,
                        const CollapseParams& params, CollapseForm form) {
  std::set<int> sizes;
  for (const auto& pt : data) sizes.insert(pt.num_qubits);
  if (sizes.size() < 3)
    throw std::domain_error("collapse_quality: need >= 3 distinct sizes");

  std::vector<ScaledPoint> scaled = rescale(data, params, form);
  double sum = 0.0;
  std::size_t count = 0;
  if (form == CollapseForm::kGlobalS) {
    std::set<int> slices;
    for (const auto& s : scaled) slices.insert(s.slice);
    for (int slice : slices) {
      std::vector<ScaledPoint> group;
      for (const auto& s : scaled)
        if (s.slice == slice) group.push_back(s);
      accumulate_quality(group, sum, count);
    }
  } else {
    accumulate_quality(scaled, sum, count);
  }
  if (count == 0)
    throw std::domain_error("collapse_quality: no interpolatable points");
  return sum / static_cast<double>(count);
}

ScalingFit fit_collapse(std::span<const CollapsePoint> data, CollapseForm form,
                        const FitGrid& grid) {
  // Fail fast on structurally unusable data.
  collapse_quality(data, {0.5 * (grid.p_c_min + grid.p_c_max),
                          0.5 * (grid.nu_min + grid.nu_max),
                          0.5 * (grid.exp_min + grid.exp_max)},
                   form);
  return minimize_quality(
      [&](const CollapseParams& q) { return collapse_quality(data, q, form); },
      form, grid);
}

std::vector<CollapsePoint> summarize_cells(std::span<const RawCell> cells,
                                           CollapseForm form,
                                           std::uint64_t seed) {
  std::vector<CollapsePoint> points;
  for (const auto& cell : cells) {
    if (cell.values.empty()) continue;
    if (!cell.censored.empty()) {
      int c = 0;
      for (char f : cell.censored) c += (f != 0);
      if (2 * c > static_cast<int>(cell.censored.size())) continue;
    }
    CollapsePoint pt;
    pt.num_qubits = cell.num_qubits;
    pt.p = cell.p;
    pt.y = statistic_of(form, cell.values);
    pt.dy = statistic_se(
        form, cell,
        seed ^ splitmix64(static_cast<std::uint64_t>(cell.num_qubits) * 1009 +
                          static_cast<std::uint64_t>(cell.p * 1e6)));
    points.push_back(pt);
  }
  return points;
}

ScalingFit bootstrap_exponents(std::span<const RawCell> cells,
                               CollapseForm form,
                               const BootstrapOptions& options) {
  std::vector<CollapsePoint> full = summarize_cells(cells, form, options.seed);
  ScalingFit fit = fit_collapse(full, form, options.grid);
  fit.n_boot = options.n_boot;

  // dy of each usable cell is reused for every replicate.
  std::vector<double> cell_dy(cells.size(), 0.0);
  std::vector<char> usable(cells.size(), 1);
  {
    std::size_t j = 0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const auto& cell = cells[i];
      bool ok = !cell.values.empty();
      if (ok && !cell.censored.empty()) {
        int c = 0;
        for (char f : cell.censored) c += (f != 0);
        ok = 2 * c <= static_cast<int>(cell.censored.size());
      }
      usable[i] = ok;
      if (ok) cell_dy[i] = full[j++].dy;
    }
  }

  std::vector<std::array<double, 3>> replicates(options.n_boot,
                                                {0.0, 0.0, 0.0});
  std::vector<char> dropped(options.n_boot, 0);
  const std::array<double, 3> x0{fit.p_c, fit.nu, fit.exponent};

  parallel_for_indexed(options.n_boot, options.workers, [&](int rep) {
    RandomStream rng =
        RandomStream::child(options.seed, static_cast<std::uint64_t>(rep) + 1);
    std::vector<CollapsePoint> pts;
    pts.reserve(cells.size());
    std::vector<double> sample;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (!usable[i]) continue;
      const auto& cell = cells[i];
      const std::size_t n = cell.values.size();
      const std::size_t m =
          options.subsample > 0
              ? std::min<std::size_t>(options.subsample, n)
              : static_cast<std::size_t>(
                    std::max<std::int64_t>(1, static_cast<std::int64_t>(n) - 100));
      sample.resize(m);
      int n_censored = 0;
      for (std::size_t s = 0; s < m; ++s) {
        const std::size_t idx = rng.uniform_below(n);
        sample[s] = cell.values[idx];
        if (!cell.censored.empty() && cell.censored[idx]) ++n_censored;
      }
      if (!cell.censored.empty() && 2 * n_censored > static_cast<int>(m)) {
        dropped[rep] = 1;
        return;
      }
      CollapsePoint pt;
      pt.num_qubits = cell.num_qubits;
      pt.p = cell.p;
      pt.y = statistic_of(form, sample);
      pt.dy = cell_dy[i];
      pts.push_back(pt);
    }
    auto cost = [&](const std::array<double, 3>& x) {
      CollapseParams q{x[0], x[1], x[2]};
      if (!params_in_sane_box(q)) return kPenalty;
      try {
        return collapse_quality(pts, q, form);
      } catch (const std::domain_error&) {
        return kPenalty;
      }
    };
    replicates[rep] = nelder_mead(cost, x0, {0.01, 0.05, 0.05}).x;
  });

  std::vector<double> pcs, nus, exps;
  for (int rep = 0; rep < options.n_boot; ++rep) {
    if (dropped[rep]) {
      ++fit.dropped_replicates;
      continue;
    }
    fit.bootstrap.push_back(replicates[rep]);
    pcs.push_back(replicates[rep][0]);
    nus.push_back(replicates[rep][1]);
    exps.push_back(replicates[rep][2]);
  }
  if (!pcs.empty()) {
    fit.ci_p_c = {percentile(pcs, 0.025), percentile(pcs, 0.975)};
    fit.ci_nu = {percentile(nus, 0.025), percentile(nus, 0.975)};
    fit.ci_exponent = {percentile(exps, 0.025), percentile(exps, 0.975)};
  }
  if (10 * fit.dropped_replicates > options.n_boot) fit.flagged = true;
  return fit;
}

PowerFit fit_power_law(std::span<const std::pair<double, double>> points,
                       double l_min) {
  std::vector<std::pair<double, double>> logs;
  for (const auto& [L, S] : points) {
    if (L < l_min || S <= 0.0) continue;
    logs.emplace_back(std::log(L), std::log(S));
  }
  if (logs.size() < 3)
    throw std::domain_error("fit_power_law: fewer than 3 usable points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : logs) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(logs.size());
  const double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-30)
    throw std::domain_error("fit_power_law: degenerate abscissae");
  const double mu = (n * sxy - sx * sy) / denom;
  const double log_a = (sy - mu * sx) / n;
  double ss = 0.0;
  for (const auto& [x, y] : logs) {
    const double r = y - (log_a + mu * x);
    ss += r * r;
  }
  PowerFit fit;
  fit.amplitude = std::exp(log_a);
  fit.exponent = mu;
  fit.residual = std::sqrt(ss / n);
  fit.l_min = l_min;
  fit.n_used = static_cast<int>(logs.size());
  return fit;
}

double expected_crossings(int num_qubits, double alpha, int gates_per_layer) {
  // With site i uniform and direction uniform, a gate at distance r
  // straddles one of the two cuts of the half chain for exactly 2r of the
  // L starting sites, for either direction.
  DistanceSampler distances(num_qubits, alpha);
  double p_cross = 0.0;
  for (int r = 1; r <= num_qubits / 2; ++r)
    p_cross += distances.probability(r) * (2.0 * r / num_qubits);
  return gates_per_layer * p_cross;
}

std::vector<CollapsePoint> global_s_slice_points(
    std::span<const SeriesCell> cells, double z,
    std::span<const double> slices) {
  std::vector<CollapsePoint> points;
  for (std::size_t s = 0; s < slices.size(); ++s) {
    for (const auto& cell : cells) {
      const double t = slices[s] * pow_l(cell.num_qubits, z);
      if (cell.times.empty() || t < cell.times.front() ||
          t > cell.times.back())
        continue;
      auto it = std::lower_bound(cell.times.begin(), cell.times.end(), t);
      std::size_t hi = static_cast<std::size_t>(it - cell.times.begin());
      std::size_t lo = hi > 0 ? hi - 1 : 0;
      if (hi >= cell.times.size()) hi = cell.times.size() - 1;
      double y, dy;
      if (hi == lo || cell.times[hi] == cell.times[lo]) {
        y = cell.mean_s[lo];
        dy = cell.se_s[lo];
      } else {
        const double w =
            (t - cell.times[lo]) / (cell.times[hi] - cell.times[lo]);
        y = (1.0 - w) * cell.mean_s[lo] + w * cell.mean_s[hi];
        dy = (1.0 - w) * cell.se_s[lo] + w * cell.se_s[hi];
      }
      CollapsePoint pt;
      pt.num_qubits = cell.num_qubits;
      pt.p = cell.p;
      pt.y = y;
      pt.dy = std::max(dy, 1e-9);
      pt.slice = static_cast<int>(s);
      points.push_back(pt);
    }
  }
  return points;
}

double global_s_quality(std::span<const SeriesCell> cells,
                        const CollapseParams& params,
                        std::span<const double> slices) {
  const std::vector<CollapsePoint> pts =
      global_s_slice_points(cells, params.exponent, slices);
  return collapse_quality(pts, params, CollapseForm::kGlobalS);
}

ScalingFit fit_collapse_global_s(std::span<const SeriesCell> cells,
                                 std::span<const double> slices,
                                 const FitGrid& grid) {
  return minimize_quality(
      [&](const CollapseParams& q) {
        return global_s_quality(cells, q, slices);
      },
      CollapseForm::kGlobalS, grid);
}

}  // namespace mipt
