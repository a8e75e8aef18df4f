#pragma once

#include <vector>

#include "fracheat/fitting.hpp"
#include "fracheat/nonlocal_form.hpp"

namespace fracheat {

/// Discretized Riesz-potential kernel of the ground-state fixed point
///   phi(x) = c_{d,alpha} lambda_1 int phi(y) / (W(y) |x-y|^{d-alpha}) dy.
/// Off-diagonal entries carry the cell quadrature weight h^d; the diagonal
/// uses the exact cell average of the integrable singularity.
struct RieszKernel {
  Eigen::MatrixXd K;
};

RieszKernel build_riesz_kernel(const DiscreteOperator& op);

struct GroundState {
  double lambda1 = 0;
  Eigen::VectorXd phi;  // positive, mu-normalized
  int iterations = 0;
};

/// Inverse power iteration on the mu-weighted problem.
GroundState ground_state_inverse_iteration(const DiscreteOperator& op,
                                           double tol = 1e-12,
                                           int max_iter = 500);

struct RieszResidual {
  Eigen::VectorXd per_node;   // r_i = |phi_i - lambda_1 (K phi)_i| / phi_i
  double max_interior = 0;    // max over |x| <= R/2
};

RieszResidual riesz_residual(const Eigen::VectorXd& phi, double lambda1,
                             const RieszKernel& kernel, const Grid& grid);

/// The fixed point is a whole-space identity; extending phi by zero makes
/// the fractional Laplacian nonzero outside the box, so the bare kernel
/// overshoots near the boundary. This variant adds the exterior-source
/// term
///   c_R int_{|y|>Rb} |x-y|^{alpha-d} (-c int_box phi(z)|y-z|^{-d-alpha} dz) dy
/// by log-spaced quadrature, leaving only discretization error. d = 1 only.
RieszResidual riesz_residual_truncation_corrected(const Eigen::VectorXd& phi,
                                                  double lambda1,
                                                  const RieszKernel& kernel,
                                                  const DiscreteOperator& op);

/// Least-squares slope of log phi vs log(1+|x|) over the annulus.
LineFit fit_decay(const Eigen::VectorXd& phi, const Grid& grid, double r_lo,
                  double r_hi, long min_nodes = 20);

struct JBoundReport {
  double sup_ratio = 0;   // sup over samples of J(x) / bound(x)
  double min_ratio = 0;
  int regime = 0;         // -1: beta<d, 0: beta==d, +1: beta>d
};

/// J(x) = int |x-y|^{-gamma} (1+|y|)^{-beta} dy in d=1 by adaptive
/// quadrature, compared against the regime bound.
JBoundReport j_bound_check(double gamma, double beta, int d,
                           const std::vector<double>& sample_radii);

double j_integral_1d(double x, double gamma, double beta);

struct BootstrapInfo {
  int k = 0;
  bool log_flag = false;  // (d-beta)/(beta-alpha) in {0,1,2,...}
};

/// Smallest k with beta + k(beta-alpha) >= d, and the log-correction flag.
BootstrapInfo bootstrap_steps(double alpha, double beta, int d);

}  // namespace fracheat
