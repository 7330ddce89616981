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

#include <doctest.h>

#include <cmath>

#include "mipt/rng.hpp"
#include "mipt/scaling.hpp"

using namespace mipt;

namespace {

// Smooth bump master curve used by the noisy synthetic studies.
double bump(double x) { return 0.2 + 1.0 / (1.0 + x * x); }

std::vector<CollapsePoint> synthesize(const CollapseParams& truth,
                                      CollapseForm form, double noise,
                                      RandomStream* rng,
                                      const std::vector<int>& sizes,
                                      int n_p = 41, double p_lo = 0.3,
                                      double p_hi = 0.7) {
  std::vector<CollapsePoint> pts;
  for (int L : sizes) {
    for (int k = 0; k < n_p; ++k) {
      const double p = p_lo + (p_hi - p_lo) * k / (n_p - 1);
      const double x = (p - truth.p_c) * std::pow(L, 1.0 / truth.nu);
      double y = std::pow(L, truth.exponent) * bump(x);
      double dy = std::max(noise * y, 1e-4);
      if (rng) {
        // Box-Muller normal noise.
        const double u1 = rng->uniform(), u2 = rng->uniform();
        y += dy * std::sqrt(-2.0 * std::log(u1 + 1e-300)) *
             std::cos(6.283185307179586 * u2);
      }
      pts.push_back({L, p, y, dy, 0});
    }
  }
  return pts;
}

}  // namespace

TEST_CASE("collapse quality input validation") {
  CollapseParams q{0.5, 1.0, 1.0};
  SUBCASE("fewer than three sizes") {
    std::vector<CollapsePoint> pts{{16, 0.4, 1.0, 0.1, 0},
                                   {32, 0.4, 1.0, 0.1, 0},
                                   {16, 0.5, 1.2, 0.1, 0}};
    CHECK_THROWS_AS(collapse_quality(pts, q, CollapseForm::kTauP),
                    std::domain_error);
  }
  SUBCASE("non-positive dy") {
    std::vector<CollapsePoint> pts{{16, 0.4, 1.0, 0.0, 0},
                                   {32, 0.4, 1.0, 0.1, 0},
                                   {64, 0.5, 1.2, 0.1, 0}};
    CHECK_THROWS_AS(collapse_quality(pts, q, CollapseForm::kTauP),
                    std::domain_error);
  }
  SUBCASE("no interpolatable points at absurd parameters") {
    // Overflowing rescale factors make every point non-finite.
    std::vector<CollapsePoint> pts = synthesize({0.5, 1.3, 1.0},
                                                CollapseForm::kTauP, 0.0,
                                                nullptr, {16, 32, 64}, 5);
    CHECK_THROWS_AS(collapse_quality(pts, {0.5, 0.001, 1.0},
                                     CollapseForm::kTauP),
                    std::domain_error);
  }
}

TEST_CASE("quality is invariant under point reordering") {
  std::vector<CollapsePoint> pts = synthesize({0.5, 1.3, 1.0},
                                              CollapseForm::kTauP, 0.0,
                                              nullptr, {16, 32, 64}, 15);
  CollapseParams q{0.48, 1.2, 0.9};
  const double a = collapse_quality(pts, q, CollapseForm::kTauP);
  std::reverse(pts.begin(), pts.end());
  std::swap(pts[3], pts[11]);
  const double b = collapse_quality(pts, q, CollapseForm::kTauP);
  CHECK(a == doctest::Approx(b).epsilon(1e-12));
}

TEST_CASE("flat L-independent data collapses at exponent zero") {
  std::vector<CollapsePoint> pts;
  for (int L : {16, 32, 64})
    for (int k = 0; k < 9; ++k)
      pts.push_back({L, 0.1 * (k + 1), 3.0, 0.05, 0});
  const double q0 =
      collapse_quality(pts, {0.3, 1.0, 0.0}, CollapseForm::kTauP);
  const double q1 =
      collapse_quality(pts, {0.3, 1.0, 0.5}, CollapseForm::kTauP);
  CHECK(q0 == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(q1 > 1.0);
  const ScalingFit fit = fit_collapse(pts, CollapseForm::kTauP);
  CHECK(std::abs(fit.exponent) < 1e-3);
  CHECK(fit.quality < 1e-10);
}

TEST_CASE("noise-free recovery to optimizer tolerance") {
  const CollapseParams truth{0.5, 1.3, 1.0};
  const auto pts = synthesize(truth, CollapseForm::kTauP, 0.001, nullptr,
                              {16, 32, 64, 128}, 81);
  const ScalingFit fit = fit_collapse(pts, CollapseForm::kTauP);
  CHECK(fit.converged);
  CHECK(std::abs(fit.p_c - truth.p_c) < 1e-3);
  CHECK(std::abs(fit.nu - truth.nu) < 2e-2);
  CHECK(std::abs(fit.exponent - truth.exponent) < 1e-3);
}

TEST_CASE("true parameters beat perturbed ones on noisy data") {
  const CollapseParams truth{0.5, 1.3, 1.0};
  int wins = 0;
  const int realizations = 100;
  for (int r = 0; r < realizations; ++r) {
    RandomStream rng(6000 + r);
    const auto pts = synthesize(truth, CollapseForm::kTauP, 0.01, &rng,
                                {16, 32, 64, 128}, 41);
    const double q0 = collapse_quality(pts, truth, CollapseForm::kTauP);
    bool win = true;
    for (int axis = 0; axis < 3; ++axis) {
      for (double sign : {-1.0, 1.0}) {
        CollapseParams q = truth;
        if (axis == 0) q.p_c += sign * 0.05;
        if (axis == 1) q.nu += sign * 0.3;
        if (axis == 2) q.exponent += sign * 0.2;
        win &= q0 < collapse_quality(pts, q, CollapseForm::kTauP);
      }
    }
    wins += win;
  }
  CHECK(wins >= 95);
}

TEST_CASE("bootstrap: zero-variance data gives zero-width intervals") {
  std::vector<RawCell> cells;
  for (int L : {16, 32, 64})
    for (double p : {0.2, 0.3, 0.4, 0.5, 0.6})
      cells.push_back({L, p, std::vector<double>(40, 2.0 + p * L * 0.01), {}});
  BootstrapOptions opt;
  opt.n_boot = 50;
  opt.subsample = 40;
  opt.seed = 5;
  const ScalingFit fit =
      bootstrap_exponents(cells, CollapseForm::kIab, opt);
  CHECK(fit.n_boot == 50);
  CHECK(fit.dropped_replicates == 0);
  CHECK(fit.ci_p_c[1] - fit.ci_p_c[0] == doctest::Approx(0.0));
  CHECK(fit.ci_nu[1] - fit.ci_nu[0] == doctest::Approx(0.0));
  CHECK(fit.ci_exponent[1] - fit.ci_exponent[0] == doctest::Approx(0.0));
}

TEST_CASE("bootstrap confidence intervals cover the truth") {
  const CollapseParams truth{0.5, 1.3, 1.0};
  int covered_nu = 0, covered_z = 0;
  const int studies = 60;
  for (int s = 0; s < studies; ++s) {
    RandomStream rng(9000 + s);
    std::vector<RawCell> cells;
    for (int L : {16, 32, 64, 128}) {
      for (int k = 0; k < 13; ++k) {
        const double p = 0.35 + 0.3 * k / 12.0;
        const double x = (p - truth.p_c) * std::pow(L, 1.0 / truth.nu);
        const double y0 = std::pow(L, truth.exponent) * bump(x);
        RawCell cell{L, p, {}, {}};
        for (int i = 0; i < 60; ++i) {
          const double u1 = rng.uniform(), u2 = rng.uniform();
          cell.values.push_back(
              y0 * (1.0 + 0.08 * std::sqrt(-2.0 * std::log(u1 + 1e-300)) *
                              std::cos(6.283185307179586 * u2)));
        }
        cells.push_back(std::move(cell));
      }
    }
    BootstrapOptions opt;
    opt.n_boot = 200;
    opt.subsample = 60;
    opt.seed = 77 + s;
    const ScalingFit fit =
        bootstrap_exponents(cells, CollapseForm::kIab, opt);
    covered_nu += (truth.nu >= fit.ci_nu[0] && truth.nu <= fit.ci_nu[1]);
    covered_z += (truth.exponent >= fit.ci_exponent[0] &&
                  truth.exponent <= fit.ci_exponent[1]);
  }
  // ~95% coverage expected; allow generous binomial slack at 60 studies.
  CHECK(covered_nu >= 49);
  CHECK(covered_z >= 49);
}

TEST_CASE("bootstrap drops censored-majority replicates and flags heavy loss") {
  std::vector<RawCell> cells;
  RandomStream rng(23);
  for (int L : {16, 32, 64}) {
    for (double p : {0.3, 0.4, 0.5, 0.6}) {
      RawCell cell{L, p, {}, {}};
      for (int i = 0; i < 30; ++i) {
        const bool censored = rng.uniform() < 0.45;  // close to the edge
        cell.values.push_back(censored ? 100.0 : 5.0 + L * 0.1);
        cell.censored.push_back(censored);
      }
      cells.push_back(std::move(cell));
    }
  }
  BootstrapOptions opt;
  opt.n_boot = 100;
  opt.subsample = 30;
  opt.seed = 29;
  const ScalingFit fit = bootstrap_exponents(cells, CollapseForm::kTauP, opt);
  CHECK(fit.dropped_replicates > 0);
  CHECK(fit.bootstrap.size() + fit.dropped_replicates ==
        static_cast<std::size_t>(opt.n_boot));
}

TEST_CASE("power-law fit") {
  SUBCASE("exact power law is recovered exactly") {
    std::vector<std::pair<double, double>> pts;
    for (double L : {8.0, 16.0, 32.0, 64.0, 128.0})
      pts.emplace_back(L, 2.0 * std::sqrt(L));
    const PowerFit fit = fit_power_law(pts);
    CHECK(fit.amplitude == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fit.exponent == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(fit.residual < 1e-12);
    CHECK(fit.n_used == 5);
  }
  SUBCASE("non-positive values are excluded") {
    std::vector<std::pair<double, double>> pts{
        {8, 2.0}, {16, 0.0}, {32, 4.0}, {64, 5.6}, {128, 8.0}};
    const PowerFit fit = fit_power_law(pts);
    CHECK(fit.n_used == 4);
  }
  SUBCASE("too few points throws") {
    std::vector<std::pair<double, double>> pts{{8, 2.0}, {16, 3.0}};
    CHECK_THROWS_AS(fit_power_law(pts), std::domain_error);
    std::vector<std::pair<double, double>> pts2{
        {8, 2.0}, {16, 3.0}, {32, 4.0}, {64, 5.0}};
    CHECK_THROWS_AS(fit_power_law(pts2, 20.0), std::domain_error);
  }
}

TEST_CASE("expected crossings match brute-force enumeration") {
  // Independent oracle: exhaustive sum over (site, distance, direction).
  auto brute = [](int L, double alpha, int gates) {
    std::vector<double> w(L / 2 + 1, 0.0);
    double norm = 0.0;
    for (int r = 1; r <= L / 2; ++r) {
      w[r] = std::pow(r, -alpha);
      norm += w[r];
    }
    double expectation = 0.0;
    for (int i = 0; i < L; ++i) {
      for (int r = 1; r <= L / 2; ++r) {
        for (int dir : {+1, -1}) {
          const int j = ((i + dir * r) % L + L) % L;
          const bool crosses = (i < L / 2) != (j < L / 2);
          if (crosses) expectation += (1.0 / L) * (w[r] / norm) * 0.5;
        }
      }
    }
    return gates * expectation;
  };
  CHECK(expected_crossings(8, 0.0, 4) ==
        doctest::Approx(brute(8, 0.0, 4)).epsilon(1e-12));
  CHECK(expected_crossings(64, 1.5, 32) ==
        doctest::Approx(brute(64, 1.5, 32)).epsilon(1e-12));
  CHECK(expected_crossings(128, 3.0, 64) ==
        doctest::Approx(brute(128, 3.0, 64)).epsilon(1e-12));

  // alpha -> infinity limit: only the r = 1 gates at the two cut bonds
  // survive, i.e. 2 * gates / L.
  CHECK(expected_crossings(64, 30.0, 32) ==
        doctest::Approx(32 * 2.0 / 64).epsilon(1e-6));
}

TEST_CASE("expected crossings decrease with alpha") {
  double last = 1e18;
  for (double alpha : {0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0}) {
    const double c = expected_crossings(64, alpha, 32);
    CHECK(c < last);
    last = c;
  }
}

TEST_CASE("crossing-count exponent approaches 2 - alpha") {
  for (double alpha : {1.25, 1.5, 1.75}) {
    std::vector<std::pair<double, double>> pts;
    for (int L = 64; L <= 4096; L *= 2)
      pts.emplace_back(L, expected_crossings(L, alpha, L / 2) /
                              (L / 2.0));  // per-gate probability * gates
    // Fit the expected count with gates = L/2 against L.
    std::vector<std::pair<double, double>> counts;
    for (int L = 64; L <= 4096; L *= 2)
      counts.emplace_back(L, expected_crossings(L, alpha, L / 2));
    const PowerFit fit = fit_power_law(counts);
    CHECK(std::abs(fit.exponent - (2.0 - alpha)) < 0.1);
  }
}

TEST_CASE("global-entropy slice collapse machinery") {
  // Synthetic S(p, t) = F(x, u) with x = (p-p_c)L^{1/nu}, u = t/L^z and
  // F chosen positive and decaying in u.
  const CollapseParams truth{0.4, 1.5, 1.2};
  auto master = [](double x, double u) {
    return (2.0 + std::tanh(-x)) * std::exp(-u / (1.5 + std::tanh(-x)));
  };
  std::vector<SeriesCell> cells;
  for (int L : {16, 32, 64, 128}) {
    for (int k = 0; k < 13; ++k) {
      const double p = 0.25 + 0.3 * k / 12.0;
      SeriesCell cell{L, p, {}, {}, {}};
      const double lz = std::pow(L, truth.exponent);
      for (double t = 0; t <= 3.0 * lz; t += L / 8.0) {
        const double x = (p - truth.p_c) * std::pow(L, 1.0 / truth.nu);
        cell.times.push_back(t);
        cell.mean_s.push_back(master(x, t / lz));
        cell.se_s.push_back(0.01);
      }
      cells.push_back(std::move(cell));
    }
  }
  const auto slices = kDefaultTimeSlices;
  SUBCASE("quality at the truth is much better than when perturbed") {
    const double q0 = global_s_quality(cells, truth, slices);
    CHECK(q0 < 0.5);
    CollapseParams off = truth;
    off.exponent -= 0.3;
    CHECK(global_s_quality(cells, off, slices) > 3.0 * q0);
  }
  SUBCASE("direct fit recovers the planted exponents") {
    FitGrid grid;
    grid.exp_min = 0.5;
    grid.exp_max = 2.0;
    const ScalingFit fit = fit_collapse_global_s(cells, slices, grid);
    CHECK(std::abs(fit.p_c - truth.p_c) < 0.02);
    CHECK(std::abs(fit.nu - truth.nu) < 0.25);
    CHECK(std::abs(fit.exponent - truth.exponent) < 0.1);
  }
}
