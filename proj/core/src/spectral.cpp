#include "fracheat/spectral.hpp"

#include <cmath>
#include <stdexcept>

#include <lapacke.h>

namespace fracheat {

Spectrum solve_spectrum(const DiscreteOperator& op, long k) {
  const long n = op.size();
  if (k < 1 || k > n) throw std::invalid_argument("solve_spectrum: k out of range");

  const Eigen::ArrayXd sqrt_mu = op.mu.array().sqrt();
  Eigen::MatrixXd S = op.Q;
  for (long j = 0; j < n; ++j)
    for (long i = 0; i < n; ++i) S(i, j) /= sqrt_mu(i) * sqrt_mu(j);

  Eigen::VectorXd w(n);
  const int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', int(n), S.data(),
                                  int(n), w.data());
  if (info != 0) throw std::runtime_error("solve_spectrum: dsyevd failed");

  Spectrum out;
  out.mu = op.mu;
  out.lambdas = w.head(k);
  out.phis.resize(n, k);
  for (long m = 0; m < k; ++m)
    out.phis.col(m) = S.col(m).array() / sqrt_mu;

  if (!(out.lambdas(0) > 0))
    throw std::runtime_error("solve_spectrum: first eigenvalue not positive");
  // Ground state sign: make the mu-weighted mass positive.
  if (out.inner(out.phis.col(0), Eigen::VectorXd::Ones(n)) < 0)
    out.phis.col(0) = -out.phis.col(0);
  return out;
}

Eigen::VectorXd heat_apply(const Spectrum& spec, const Eigen::VectorXd& f, double t) {
  if (t < 0) throw std::invalid_argument("heat_apply: t must be >= 0");
  if (f.size() != spec.nodes()) throw std::invalid_argument("heat_apply: size mismatch");
  const Eigen::VectorXd coeffs =
      spec.phis.transpose() * (f.array() * spec.mu.array()).matrix();
  const Eigen::VectorXd damped =
      (-t * spec.lambdas.array()).exp() * coeffs.array();
  return spec.phis * damped;
}

GrowthFit fit_eigen_growth(const Spectrum& spec, long n_lo, long n_hi,
                           double expected_exponent) {
  if (n_lo < 5) throw std::invalid_argument("fit_eigen_growth: n_lo must be >= 5");
  if (n_hi < 2 * n_lo) throw std::invalid_argument("fit_eigen_growth: window too small");
  if (n_hi > spec.nodes() / 4)
    throw std::invalid_argument("fit_eigen_growth: n_hi above truncation-safe window");
  if (n_hi > spec.count())
    throw std::invalid_argument("fit_eigen_growth: spectrum has too few modes");

  std::vector<double> ns, ls;
  GrowthFit g;
  g.ratio_min = std::numeric_limits<double>::infinity();
  g.ratio_max = 0;
  for (long m = n_lo; m <= n_hi; ++m) {
    const double lam = spec.lambdas(m - 1);
    ns.push_back(double(m));
    ls.push_back(lam);
    const double ratio = lam / std::pow(double(m), expected_exponent);
    g.ratio_min = std::min(g.ratio_min, ratio);
    g.ratio_max = std::max(g.ratio_max, ratio);
  }
  g.fit = fit_loglog(ns, ls);
  return g;
}

double heat_trace(const Spectrum& spec, double t) {
  if (!(t > 0)) throw std::invalid_argument("heat_trace: t must be positive");
  return (-t * spec.lambdas.array()).exp().sum();
}

TraceGrowthVerdict trace_to_growth(const Spectrum& spec,
                                   const std::vector<double>& t_grid,
                                   long n_lo, long n_hi) {
  TraceGrowthVerdict v;
  std::vector<double> traces(t_grid.size());
  for (size_t i = 0; i < t_grid.size(); ++i) traces[i] = heat_trace(spec, t_grid[i]);
  try {
    const LineFit tf = fit_loglog(t_grid, traces);
    v.theta_trace = -tf.slope;
    const GrowthFit gf = fit_eigen_growth(spec, n_lo, n_hi, 1.0);
    v.growth_slope = gf.fit.slope;
    if (v.theta_trace > 1e-3 && v.growth_slope > 1e-3) {
      const double expected = 1.0 / v.theta_trace;
      v.relative_gap = std::abs(v.growth_slope - expected) / expected;
      v.conclusive = true;
    }
  } catch (const std::exception&) {
    v.conclusive = false;
  }
  return v;
}

}  // namespace fracheat
