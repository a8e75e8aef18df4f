#include <doctest.h>

#include <cmath>

#include "fracheat/heatkernel.hpp"
#include "fracheat/nonlocal_form.hpp"
#include "fracheat/spectral.hpp"

using namespace fracheat;

namespace {

struct Fixture {
  DiscreteOperator op;
  Spectrum sp;
  Fixture()
      : op(assemble_form(build_grid({1, 10.0, 101}), FracParams(0.5, 1),
                         WeightSpec{PowerWeight{1.5}})),
        sp(solve_spectrum(op, op.size())) {}
};

}  // namespace

TEST_SUITE("heatkernel") {

TEST_CASE("slice invariants and trace identity") {
  Fixture fx;
  for (double t : {0.1, 0.5, 1.0}) {
    KernelSlice sl = kernel_eval(fx.sp, t);
    CHECK((sl.values - sl.values.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(sl.values.minCoeff() > -1e-10);
    // row mass under mu is sub-Markov
    Eigen::VectorXd mass = sl.values * fx.sp.mu;
    CHECK(mass.maxCoeff() < 1.0 + 1e-10);
    // trace identity against the eigenvalue sum
    const double tr = (sl.values.diagonal().array() * fx.sp.mu.array()).sum();
    CHECK(tr == doctest::Approx(heat_trace(fx.sp, t)).epsilon(1e-8));
  }
  CHECK_THROWS(kernel_eval(fx.sp, 0.0));
}

TEST_CASE("semigroup composition") {
  Fixture fx;
  KernelSlice a = kernel_eval(fx.sp, 0.3);
  KernelSlice b = kernel_eval(fx.sp, 0.4);
  KernelSlice c = kernel_eval(fx.sp, 0.7);
  Eigen::MatrixXd composed = a.values * fx.sp.mu.asDiagonal() * b.values;
  CHECK((composed - c.values).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("long-time rank-one limit") {
  Fixture fx;
  const double t = 50.0 / (fx.sp.lambdas(1) - fx.sp.lambdas(0));
  KernelSlice sl = kernel_eval(fx.sp, t);
  Eigen::MatrixXd lead = std::exp(-fx.sp.lambdas(0) * t) *
                         fx.sp.phis.col(0) * fx.sp.phis.col(0).transpose();
  CHECK((sl.values - lead).cwiseAbs().maxCoeff() <
        1e-9 * lead.cwiseAbs().maxCoeff());

  IuRatio iu = iu_min_ratio(sl, fx.sp.phis.col(0));
  CHECK(iu.min_ratio / iu.max_ratio == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("ground-state comparability at fixed times") {
  Fixture fx;
  for (double t : {0.5, 1.0}) {
    IuRatio iu = iu_min_ratio(kernel_eval(fx.sp, t), fx.sp.phis.col(0));
    CHECK(iu.min_ratio > 0);
    CHECK(std::isfinite(iu.max_ratio));
  }
}

TEST_CASE("sup ratio") {
  Fixture fx;
  KernelSlice sl = kernel_eval(fx.sp, 0.5);
  Eigen::VectorXd V = fx.sp.phis.col(0);
  const double m = sup_ratio(sl, V);
  CHECK(m > 0);
  Eigen::VectorXd bad = V;
  bad(0) = 0.0;
  CHECK_THROWS(sup_ratio(sl, bad));
}

TEST_CASE("resolution floor guards the fit window") {
  Fixture fx;
  const double floor = resolution_floor(fx.op.grid.h(), 0.5);
  CHECK(floor == doctest::Approx(std::pow(0.2, 0.5)));

  Eigen::VectorXd V = fx.sp.phis.col(0);
  CHECK_THROWS(sup_ratio_fit(fx.sp, V, {floor / 2.0, 1.0}, floor));

  SupRatioFit f = sup_ratio_fit(fx.sp, V, logspace(floor, 1.0, 6), floor);
  CHECK(f.fit.slope < 0);  // kernel decays in time
  REQUIRE(f.m.size() == 6);
  for (size_t i = 1; i < f.m.size(); ++i) CHECK(f.m[i] < f.m[i - 1]);
}

}  // TEST_SUITE
