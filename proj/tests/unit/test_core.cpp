#include <doctest.h>

#include <cmath>

#include "fracheat/fitting.hpp"
#include "fracheat/fractional.hpp"
#include "fracheat/grid.hpp"
#include "fracheat/measure.hpp"
#include "fracheat/nonlocal_form.hpp"
#include "fracheat/weight.hpp"

using namespace fracheat;

TEST_SUITE("core") {

TEST_CASE("grid basics") {
  Grid g = build_grid({1, 10.0, 101});
  CHECK(g.h() == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(g.size() == 101);
  CHECK(g.coords[g.origin_index()][0] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(g.radii(0) == doctest::Approx(10.0));
  CHECK(g.coords.front()[0] == doctest::Approx(-10.0));
  CHECK(g.coords.back()[0] == doctest::Approx(10.0));

  Grid g2 = build_grid({2, 1.0, 5});
  CHECK(g2.size() == 25);
  CHECK(g2.cell_volume() == doctest::Approx(0.25));
  CHECK(norm_of(g2.coords[g2.origin_index()], 2) == doctest::Approx(0.0));

  CHECK_THROWS(build_grid({1, 1.0, 4}));   // even
  CHECK_THROWS(build_grid({1, -1.0, 5}));  // bad R
  CHECK_THROWS(build_grid({3, 1.0, 5}));   // bad d
  CHECK_THROWS(build_grid({1, 1.0, 1}));   // too few nodes
}

TEST_CASE("weight evaluation") {
  WeightSpec pw{PowerWeight{1.5}};
  CHECK(weight_eval(pw, {3.0, 0.0}, 1) == doctest::Approx(std::pow(4.0, 1.5)));
  CHECK(pw.eval_radius(0.0) == doctest::Approx(1.0));

  StretchedExpWeight s{1.5, 2.0, 0.5, 1.0, 1.0};
  CHECK(s.envelope_exponent() == doctest::Approx(0.5));
  WeightSpec sw{s};
  const double r = 4.0;
  CHECK(sw.eval_radius(r) ==
        doctest::Approx(std::pow(1.0 + r, 1.5) * std::exp(std::sqrt(1.0 + r))));

  TableWeight tw;
  tw.coords = {{0.0, 0.0}, {1.0, 0.0}};
  tw.values = {1.0, 2.0};
  tw.d = 1;
  WeightSpec tws{tw};
  CHECK(weight_eval(tws, {1.0, 0.0}, 1) == doctest::Approx(2.0));
  CHECK_THROWS(weight_eval(tws, {0.5, 0.0}, 1));  // off the table

  CHECK_THROWS(WeightSpec{PowerWeight{-1.0}}.validate());
  CHECK_THROWS(WeightSpec{StretchedExpWeight{1.5, 0.5, 0.5, 1.0, 1.0}}.validate());
  CHECK_THROWS(WeightSpec{StretchedExpWeight{0.4, 2.0, 0.5, 1.0, 1.0}}.validate());
}

TEST_CASE("measure") {
  Grid g = build_grid({1, 5.0, 51});
  WeightSpec w{PowerWeight{1.5}};
  Measure m = build_measure(g, w);
  REQUIRE(m.mu.size() == g.size());
  for (long i = 0; i < g.size(); ++i)
    CHECK(m.mu(i) ==
          doctest::Approx(g.cell_volume() / std::pow(1.0 + g.radii(i), 1.5))
              .epsilon(1e-13));
  CHECK(m.total() > 0);
}

TEST_CASE("line fits") {
  std::vector<double> x{1, 2, 3, 4, 5}, y;
  for (double v : x) y.push_back(3.0 - 2.0 * v);
  LineFit f = fit_line(x, y);
  CHECK(f.slope == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(f.slope_stderr == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));

  std::vector<double> xs, ys;
  for (double v = 1.0; v < 100.0; v *= 1.7) {
    xs.push_back(v);
    ys.push_back(2.5 * std::pow(v, -0.5));
  }
  CHECK(fit_loglog(xs, ys).slope == doctest::Approx(-0.5).epsilon(1e-10));

  std::vector<double> ls = logspace(0.01, 100.0, 9);
  CHECK(ls.size() == 9);
  CHECK(ls.front() == doctest::Approx(0.01));
  CHECK(ls.back() == doctest::Approx(100.0));
  CHECK(ls[4] == doctest::Approx(1.0));
}

TEST_CASE("jump-kernel constant") {
  // alpha 2^{alpha-1} Gamma((d+alpha)/2) / (pi^{d/2} Gamma(1-alpha/2))
  CHECK(normalization_constant(0.5, 1) ==
        doctest::Approx(0.19947114020071635).epsilon(1e-13));
  CHECK(normalization_constant(1.0, 2) ==
        doctest::Approx(1.0 / (2.0 * M_PI)).epsilon(1e-13));
  CHECK_THROWS(normalization_constant(2.0, 1));
  CHECK_THROWS(normalization_constant(0.0, 1));
}

TEST_CASE("riesz-potential constant") {
  // Gamma((d-alpha)/2) / (2^alpha pi^{d/2} Gamma(alpha/2))
  CHECK(riesz_constant(0.5, 1) ==
        doctest::Approx(0.3989422804014327).epsilon(1e-13));
  // at (alpha, d) = (0.5, 1) the two normalizations differ by exactly 2
  CHECK(riesz_constant(0.5, 1) / normalization_constant(0.5, 1) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS(riesz_constant(1.5, 1));  // needs d > alpha
}

TEST_CASE("constant matches the Fourier-symbol energy of a Gaussian") {
  // For f = exp(-x^2/2) in d=1 the quadratic energy with symbol |xi|^alpha
  // is Gamma((alpha+1)/2). The discrete form converges to it as h -> 0.
  Grid g = build_grid({1, 20.0, 2001});
  DiscreteOperator op =
      assemble_form(g, FracParams(0.5, 1), WeightSpec{PowerWeight{0.0}});
  Eigen::VectorXd f(g.size());
  for (long i = 0; i < g.size(); ++i)
    f(i) = std::exp(-0.5 * g.coords[i][0] * g.coords[i][0]);
  const double energy = dirichlet_energy(op, f);
  CHECK(energy == doctest::Approx(std::tgamma(0.75)).epsilon(0.01));
}

}  // TEST_SUITE
