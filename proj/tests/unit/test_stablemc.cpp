#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "fracheat/fitting.hpp"
#include "fracheat/nonlocal_form.hpp"
#include "fracheat/stablemc.hpp"

using namespace fracheat;

namespace {

// two-sample Kolmogorov-Smirnov statistic
double ks_stat(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double worst = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j]) ++i;
    else ++j;
    worst = std::max(worst,
                     std::abs(double(i) / a.size() - double(j) / b.size()));
  }
  return worst;
}

std::vector<double> increments(const StablePath& p) {
  std::vector<double> dx(p.x.size() - 1);
  for (std::size_t j = 0; j + 1 < p.x.size(); ++j)
    dx[j] = p.x[j + 1][0] - p.x[j][0];
  return dx;
}

}  // namespace

TEST_SUITE("stablemc") {

TEST_CASE("one-sided stable sampler matches its Laplace transform") {
  std::mt19937_64 rng(42);
  CHECK_THROWS(kanter_sample(0.0, rng));
  CHECK_THROWS(kanter_sample(1.0, rng));
  const long N = 200000;
  for (double a : {0.3, 0.5, 0.7}) {
    for (double u : {0.5, 1.0, 2.0}) {
      double sum = 0, sum2 = 0;
      std::mt19937_64 r2(std::uint64_t(a * 1000 + u * 10));
      for (long i = 0; i < N; ++i) {
        const double e = std::exp(-u * kanter_sample(a, r2));
        sum += e;
        sum2 += e * e;
      }
      const double mean = sum / N;
      const double se = std::sqrt((sum2 / N - mean * mean) / N);
      CHECK(std::abs(mean - std::exp(-std::pow(u, a))) <= 4.0 * se);
    }
  }
  (void)rng;
}

TEST_CASE("path sampling is deterministic and has the right shape") {
  StablePath p1 = sample_stable_path({1.0, 0.0}, 1, 1.0, 0.01, 0.5, 99);
  StablePath p2 = sample_stable_path({1.0, 0.0}, 1, 1.0, 0.01, 0.5, 99);
  REQUIRE(p1.x.size() == 101);
  CHECK(p1.x[0][0] == 1.0);
  for (std::size_t j = 0; j < p1.x.size(); ++j) CHECK(p1.x[j][0] == p2.x[j][0]);

  StablePath p3 = sample_stable_path({1.0, 0.0}, 1, 1.0, 0.01, 0.5, 100);
  bool differ = false;
  for (std::size_t j = 1; j < p3.x.size(); ++j)
    if (p3.x[j][0] != p1.x[j][0]) differ = true;
  CHECK(differ);

  CHECK_THROWS(sample_stable_path({0, 0}, 3, 1.0, 0.01, 0.5, 1));
  CHECK_THROWS(sample_stable_path({0, 0}, 1, 1.0, 0.01, 2.5, 1));
  CHECK_THROWS(sample_stable_path({0, 0}, 1, -1.0, 0.01, 0.5, 1));
}

TEST_CASE("increments are sign-symmetric") {
  // heavy tails rule out moment tests; count signs instead
  StablePath p = sample_stable_path({0, 0}, 1, 1000.0, 0.01, 0.5, 7);
  std::vector<double> dx = increments(p);
  const double N = double(dx.size());
  long pos = 0;
  for (double v : dx) pos += v > 0;
  CHECK(std::abs(pos - N / 2) <= 4.0 * std::sqrt(N) / 2.0);
}

TEST_CASE("one-step tail exponent") {
  // P(|dX| > r) ~ c r^{-alpha} for a unit-time step
  StablePath p = sample_stable_path({0, 0}, 1, 1e6, 1.0, 0.5, 11);
  std::vector<double> adx = increments(p);
  for (double& v : adx) v = std::abs(v);
  std::sort(adx.begin(), adx.end());

  std::vector<double> rs = logspace(5.0, 50.0, 8), counts;
  for (double r : rs)
    counts.push_back(double(adx.end() -
                            std::lower_bound(adx.begin(), adx.end(), r)));
  LineFit f = fit_loglog(rs, counts);
  CHECK(f.slope == doctest::Approx(-0.5).epsilon(0.1));
}

TEST_CASE("self-similarity across step sizes") {
  // dX over 2 ds should match 2^{1/alpha} times dX over ds
  const double ds = 0.01, alpha = 0.5;
  std::vector<double> a =
      increments(sample_stable_path({0, 0}, 1, 1000.0, ds, alpha, 21));
  std::vector<double> b =
      increments(sample_stable_path({0, 0}, 1, 2000.0, 2 * ds, alpha, 22));
  const double scale = std::pow(2.0, 1.0 / alpha);
  for (double& v : a) v *= scale;
  REQUIRE(a.size() == 100000);
  REQUIRE(b.size() == 100000);
  // 1% critical value 1.628 sqrt(2/n)
  CHECK(ks_stat(a, b) < 1.628 * std::sqrt(2.0 / 100000.0));
}

TEST_CASE("unit weight leaves the clock unchanged") {
  StablePath p = sample_stable_path({0, 0}, 1, 1.0, 0.1, 0.5, 5);
  std::vector<double> ts{0.05, 0.35, 0.95};
  TimeChanged tc = time_change(p, 1, WeightSpec{PowerWeight{0.0}}, ts);
  REQUIRE(tc.horizon_ok);
  REQUIRE(tc.x.size() == 3);
  // A >= t first happens at step ceil(t / ds)
  CHECK(tc.x[0][0] == p.x[1][0]);
  CHECK(tc.x[1][0] == p.x[4][0]);
  CHECK(tc.x[2][0] == p.x[10][0]);

  CHECK_THROWS(time_change(p, 1, WeightSpec{PowerWeight{0.0}}, {0.5, 0.1}));
}

TEST_CASE("piecewise-constant clock oracle") {
  // hand-built path with the weight tabulated at its positions
  StablePath p;
  p.ds = 0.25;
  p.x = {{0.0, 0}, {1.0, 0}, {-2.0, 0}, {3.0, 0}, {0.5, 0}};
  TableWeight tw;
  tw.d = 1;
  for (const auto& x : p.x) tw.coords.push_back(x);
  tw.values = {1.0, 2.0, 4.0, 2.0, 1.0};
  WeightSpec w{tw};

  // A jumps: 0.25, 0.375, 0.4375, 0.5625 after steps 1..4
  TimeChanged tc = time_change(p, 1, w, {0.2, 0.4, 0.55, 0.5625});
  REQUIRE(tc.horizon_ok);
  REQUIRE(tc.x.size() == 4);
  CHECK(tc.x[0][0] == p.x[1][0]);
  CHECK(tc.x[1][0] == p.x[3][0]);
  CHECK(tc.x[2][0] == p.x[4][0]);
  CHECK(tc.x[3][0] == p.x[4][0]);

  TimeChanged far = time_change(p, 1, w, {0.2, 5.0});
  CHECK_FALSE(far.horizon_ok);
  CHECK(far.x.size() == 1);
}

TEST_CASE("ensemble bookkeeping") {
  const std::vector<double> ts{0.1, 0.3};
  PathEnsemble e1 = simulate_ensemble({0, 0}, 1, WeightSpec{PowerWeight{1.5}},
                                      5.0, 0.5, ts, 200, 2.0, 0.01, 77);
  PathEnsemble e2 = simulate_ensemble({0, 0}, 1, WeightSpec{PowerWeight{1.5}},
                                      5.0, 0.5, ts, 200, 2.0, 0.01, 77);
  PathEnsemble e3 = simulate_ensemble({0, 0}, 1, WeightSpec{PowerWeight{1.5}},
                                      5.0, 0.5, ts, 200, 2.0, 0.01, 78);

  bool differ = false;
  long killed = 0, recorded = 0;
  for (long p = 0; p < 200; ++p) {
    killed += e1.killed[p];
    for (std::size_t k = 0; k < ts.size(); ++k) {
      if (int(k) < e1.n_recorded[p]) {
        ++recorded;
        CHECK(e1.positions[k][p][0] == e2.positions[k][p][0]);
        CHECK(std::abs(e1.positions[k][p][0]) <= 5.0);  // never outside
        if (e1.positions[k][p][0] != e3.positions[k][p][0]) differ = true;
      }
    }
    // a path is either killed, short of horizon, or fully recorded
    if (!e1.killed[p] && e1.n_recorded[p] == int(ts.size())) continue;
  }
  CHECK(differ);
  CHECK(killed > 0);          // alpha = 0.5 jumps far even by t = 0.3
  CHECK(recorded > 0);
  CHECK(e1.insufficient_horizon >= 0);

  CHECK_THROWS(simulate_ensemble({9.0, 0}, 1, WeightSpec{PowerWeight{1.5}},
                                 5.0, 0.5, ts, 10, 1.0, 0.01, 1));
  CHECK_THROWS(simulate_ensemble({0, 0}, 1, WeightSpec{PowerWeight{1.5}},
                                 5.0, 0.5, {}, 10, 1.0, 0.01, 1));
}

TEST_CASE("histogram comparison refuses starved ensembles") {
  Grid g = build_grid({1, 5.0, 51});
  DiscreteOperator op = assemble_form(g, FracParams(0.5, 1),
                                      WeightSpec{PowerWeight{1.5}});
  Spectrum sp = solve_spectrum(op, op.size());
  PathEnsemble ens = simulate_ensemble({0, 0}, 1, WeightSpec{PowerWeight{1.5}},
                                       5.05, 0.5, {0.5}, 500, 2.0, 0.01, 3);
  CHECK_THROWS(empirical_compare(ens, sp, g, 25, 0, 20));   // < 1000 paths
  CHECK_THROWS(empirical_compare(ens, sp, g, 25, 1, 20));   // t_index
  CHECK_THROWS(empirical_compare(ens, sp, g, 99, 0, 20));   // x0_index
  CHECK_THROWS(empirical_compare(ens, sp, g, 25, 0, 1));    // n_cells
}

TEST_CASE("histogram comparison at noise level on a small box") {
  Grid g = build_grid({1, 5.0, 101});
  DiscreteOperator op = assemble_form(g, FracParams(0.5, 1),
                                      WeightSpec{PowerWeight{1.5}});
  Spectrum sp = solve_spectrum(op, op.size());
  PathEnsemble ens = simulate_ensemble({0, 0}, 1, WeightSpec{PowerWeight{1.5}},
                                       5.025, 0.5, {0.25}, 20000, 4.0, 2e-3, 9);
  CompareResult cr = empirical_compare(ens, sp, g, 50, 0, 20);
  CHECK(cr.survivors >= 1000);
  CHECK(cr.tv < 0.12);
  CHECK(std::abs(cr.survival_emp - cr.survival_spectral) <
        3.0 * std::sqrt(cr.survival_emp * (1 - cr.survival_emp) / 20000.0) + 0.01);
  double emp = 0, spec_mass = 0;
  for (int c = 0; c < 20; ++c) {
    emp += cr.empirical_mass[c];
    spec_mass += cr.spectral_mass[c];
  }
  CHECK(emp == doctest::Approx(cr.survival_emp).epsilon(1e-12));
  CHECK(spec_mass == doctest::Approx(cr.survival_spectral).epsilon(1e-9));
}

}  // TEST_SUITE
