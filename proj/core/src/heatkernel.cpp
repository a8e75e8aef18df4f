#include "fracheat/heatkernel.hpp"

#include <cmath>
#include <stdexcept>

namespace fracheat {

KernelSlice kernel_eval(const Spectrum& spec, double t) {
  if (!(t > 0)) throw std::invalid_argument("kernel_eval: t must be positive");
  const long k = spec.count();
  const double lam1 = spec.lambdas(0);
  const double lamk = spec.lambdas(k - 1);
  if (k < spec.nodes() && std::exp(-(lamk - lam1) * t) > 1e-12)
    throw std::runtime_error(
        "kernel_eval: insufficient spectral resolution for requested t");

  // Modes beyond e^{-46} relative to the leading term contribute below
  // double precision of the slice.
  long m_used = k;
  for (long m = 0; m < k; ++m) {
    if ((spec.lambdas(m) - lam1) * t > 46.0) {
      m_used = m;
      break;
    }
  }
  const Eigen::ArrayXd half =
      (-0.5 * t * spec.lambdas.head(m_used).array()).exp();
  Eigen::MatrixXd C = spec.phis.leftCols(m_used);
  for (long m = 0; m < m_used; ++m) C.col(m) *= half(m);

  KernelSlice s;
  s.t = t;
  s.values.noalias() = C * C.transpose();
  return s;
}

double sup_ratio(const KernelSlice& slice, const Eigen::VectorXd& V) {
  if (V.minCoeff() <= 0) throw std::invalid_argument("sup_ratio: V must be positive");
  const long n = slice.values.rows();
  double best = -std::numeric_limits<double>::infinity();
  for (long i = 0; i < n; ++i) {
    const double r =
        (slice.values.row(i).transpose().array() / (V(i) * V.array())).maxCoeff();
    best = std::max(best, r);
  }
  if (!(best > 0))
    throw std::runtime_error("sup_ratio: nonpositive maximum (spectral truncation)");
  return best;
}

SupRatioFit sup_ratio_fit(const Spectrum& spec, const Eigen::VectorXd& V,
                          const std::vector<double>& ts, double t_floor) {
  // The slice is positive semidefinite, so by Cauchy-Schwarz
  //   p(t,x,y)/(V(x)V(y)) <= sqrt(p(t,x,x)p(t,y,y))/(V(x)V(y)),
  // and the sup over pairs is attained on the diagonal. Evaluating only the
  // diagonal costs O(n k) per time instead of O(n^2 k) for the full slice.
  if (V.minCoeff() <= 0)
    throw std::invalid_argument("sup_ratio_fit: V must be positive");
  const long k = spec.count();
  const double lam1 = spec.lambdas(0);
  SupRatioFit out;
  for (double t : ts) {
    if (t < t_floor)
      throw std::invalid_argument("sup_ratio_fit: t below the resolution floor");
    if (k < spec.nodes() &&
        std::exp(-(spec.lambdas(k - 1) - lam1) * t) > 1e-12)
      throw std::runtime_error(
          "sup_ratio_fit: insufficient spectral resolution for requested t");
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(spec.nodes());
    for (long m = 0; m < k; ++m) {
      if ((spec.lambdas(m) - lam1) * t > 46.0) break;
      diag += std::exp(-t * spec.lambdas(m)) * spec.phis.col(m).cwiseAbs2();
    }
    const double best = (diag.array() / V.array().square()).maxCoeff();
    if (!(best > 0))
      throw std::runtime_error("sup_ratio_fit: nonpositive maximum");
    out.t.push_back(t);
    out.m.push_back(best);
  }
  out.fit = fit_loglog(out.t, out.m);
  return out;
}

double resolution_floor(double h, double alpha) {
  return std::pow(h, alpha);
}

IuRatio iu_min_ratio(const KernelSlice& slice, const Eigen::VectorXd& phi) {
  if (phi.minCoeff() <= 0) throw std::invalid_argument("iu_min_ratio: phi must be positive");
  const long n = slice.values.rows();
  IuRatio r;
  r.min_ratio = std::numeric_limits<double>::infinity();
  r.max_ratio = -std::numeric_limits<double>::infinity();
  for (long i = 0; i < n; ++i) {
    const auto row = slice.values.row(i).transpose().array() / (phi(i) * phi.array());
    r.min_ratio = std::min(r.min_ratio, row.minCoeff());
    r.max_ratio = std::max(r.max_ratio, row.maxCoeff());
  }
  return r;
}

}  // namespace fracheat
