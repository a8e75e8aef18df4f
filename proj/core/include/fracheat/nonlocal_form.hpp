#pragma once

#include <string>

#include "fracheat/fractional.hpp"
#include "fracheat/grid.hpp"
#include "fracheat/measure.hpp"
#include "fracheat/weight.hpp"

namespace fracheat {

/// Discrete nonlocal Dirichlet form with exterior killing.
///
/// Q is the symmetric form matrix: for i != j
///   Q_ij = -c_{d,alpha} h^{2d} / |x_i - x_j|^{d+alpha},
/// and Q_ii collects the negated off-diagonal row sum plus h^d * kill_i,
/// where kill_i integrates the jump kernel over the exterior of the
/// cell-union box [-R-h/2, R+h/2]^d. Functions are extended by zero
/// outside the box, so f'Qf approximates D(f,f) and the generator acts as
/// L f = -M^{-1} Q f.
struct DiscreteOperator {
  Grid grid;
  double alpha = 0.5;
  double c_norm = 0.0;
  Eigen::MatrixXd Q;
  Eigen::VectorXd kill;  // exterior killing rate per node
  Eigen::VectorXd mu;    // measure vector, mu_i = h^d / W(x_i)
  Eigen::VectorXd W;     // weight values on nodes

  long size() const { return Q.rows(); }
  /// Half-width of the box whose exterior is killed (R + h/2).
  double box_halfwidth() const { return grid.spec.R + grid.h() / 2.0; }
};

/// Exterior-mass killing rate at point x for the box [-Rb,Rb]^d.
/// Closed form in 1D, adaptive angular quadrature in 2D.
double killing_rate(const Point& x, int d, double Rb, double alpha, double c_norm);

DiscreteOperator assemble_form(const Grid& grid, const FracParams& frac,
                               const WeightSpec& w);

/// f'Qf; nonnegative, zero only at f = 0.
double dirichlet_energy(const DiscreteOperator& op, const Eigen::VectorXd& f);

/// Version-tagged binary cache of the assembled operator.
void save_operator(const DiscreteOperator& op, const std::string& path);
DiscreteOperator load_operator(const std::string& path);

}  // namespace fracheat
