#pragma once

#include <vector>

#include "fracheat/fitting.hpp"
#include "fracheat/nonlocal_form.hpp"

namespace fracheat {

/// Eigenpairs of the mu-weighted problem Q phi = lambda M phi, ascending,
/// with M-orthonormal eigenvectors: sum_i phi_m(i) phi_n(i) mu_i = delta_mn.
struct Spectrum {
  Eigen::VectorXd lambdas;  // k smallest, ascending
  Eigen::MatrixXd phis;     // n x k
  Eigen::VectorXd mu;

  long count() const { return lambdas.size(); }
  long nodes() const { return phis.rows(); }

  double inner(const Eigen::VectorXd& f, const Eigen::VectorXd& g) const {
    return (f.array() * g.array() * mu.array()).sum();
  }
};

/// Dense symmetric solve of S = M^{-1/2} Q M^{-1/2}, back-transformed.
/// phi_1 is sign-normalized positive.
Spectrum solve_spectrum(const DiscreteOperator& op, long k);

/// P_t f = sum_n e^{-lambda_n t} phi_n <f, phi_n>_mu.
Eigen::VectorXd heat_apply(const Spectrum& spec, const Eigen::VectorXd& f, double t);

struct GrowthFit {
  LineFit fit;          // slope of log lambda_n vs log n
  double ratio_min = 0; // min over window of lambda_n / n^expected
  double ratio_max = 0;
};

GrowthFit fit_eigen_growth(const Spectrum& spec, long n_lo, long n_hi,
                           double expected_exponent);

/// sum_{n<=k} e^{-lambda_n t}, t > 0.
double heat_trace(const Spectrum& spec, double t);

struct TraceGrowthVerdict {
  double theta_trace = 0;      // trace ~ t^{-theta}
  double growth_slope = 0;     // lambda_n ~ n^{growth_slope}
  double relative_gap = 0;     // |growth_slope - 1/theta| / (1/theta)
  bool conclusive = false;
};

/// Cross-checks the trace exponent against eigenvalue growth on the same
/// spectrum. Degenerate spectra yield an inconclusive verdict.
TraceGrowthVerdict trace_to_growth(const Spectrum& spec,
                                   const std::vector<double>& t_grid,
                                   long n_lo, long n_hi);

}  // namespace fracheat
