#include "fracheat/riesz.hpp"

#include "fracheat/fractional.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/tanh_sinh.hpp>

namespace fracheat {

RieszKernel build_riesz_kernel(const DiscreteOperator& op) {
  const long n = op.size();
  const Grid& grid = op.grid;
  const int d = grid.spec.d;
  const double h = grid.h();
  const double vol = grid.cell_volume();
  const double a = op.alpha;

  // Exact integral of |x-y|^{alpha-d} over one cell centered at x.
  double diag_cell;
  if (d == 1) {
    diag_cell = 2.0 * std::pow(h / 2.0, a) / a;
  } else {
    // area-equivalent disc of radius h/sqrt(pi)
    diag_cell = 2.0 * M_PI * std::pow(h / std::sqrt(M_PI), a) / a;
  }

  const double cr = riesz_constant(a, d);
  RieszKernel ker;
  ker.K.resize(n, n);
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j) {
      if (i == j) {
        ker.K(i, i) = cr * diag_cell / op.W(i);
      } else {
        const double r = dist(grid.coords[i], grid.coords[j], d);
        ker.K(i, j) = cr * vol * std::pow(r, a - d) / op.W(j);
      }
    }
  }
  return ker;
}

GroundState ground_state_inverse_iteration(const DiscreteOperator& op, double tol,
                                           int max_iter) {
  const long n = op.size();
  const Eigen::ArrayXd sqrt_mu = op.mu.array().sqrt();
  Eigen::MatrixXd S = op.Q;
  for (long j = 0; j < n; ++j)
    for (long i = 0; i < n; ++i) S(i, j) /= sqrt_mu(i) * sqrt_mu(j);

  Eigen::LLT<Eigen::MatrixXd> llt(S);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("inverse_iteration: operator not positive definite");

  Eigen::VectorXd x = sqrt_mu.matrix();  // positive start
  x /= x.norm();
  double lambda = 0, lambda_prev = -1;
  int it = 0;
  for (; it < max_iter; ++it) {
    Eigen::VectorXd y = llt.solve(x);
    y /= y.norm();
    lambda = y.dot(S * y);
    if (std::abs(lambda - lambda_prev) <= tol * std::abs(lambda)) {
      x = y;
      break;
    }
    lambda_prev = lambda;
    x = y;
  }
  if (it == max_iter)
    throw std::runtime_error("inverse_iteration: iteration cap exceeded");

  GroundState gs;
  gs.lambda1 = lambda;
  gs.iterations = it + 1;
  gs.phi = (x.array() / sqrt_mu).matrix();
  if (gs.phi.sum() < 0) gs.phi = -gs.phi;
  return gs;
}

RieszResidual riesz_residual(const Eigen::VectorXd& phi, double lambda1,
                             const RieszKernel& kernel, const Grid& grid) {
  if (phi.minCoeff() <= 0)
    throw std::invalid_argument("riesz_residual: phi must be positive");
  const Eigen::VectorXd Kphi = kernel.K * phi;
  RieszResidual res;
  res.per_node = ((phi - lambda1 * Kphi).array().abs() / phi.array()).matrix();
  res.max_interior = 0;
  for (long i = 0; i < phi.size(); ++i) {
    if (grid.radii(i) <= grid.spec.R / 2.0)
      res.max_interior = std::max(res.max_interior, res.per_node(i));
  }
  return res;
}

RieszResidual riesz_residual_truncation_corrected(const Eigen::VectorXd& phi,
                                                  double lambda1,
                                                  const RieszKernel& kernel,
                                                  const DiscreteOperator& op) {
  const Grid& grid = op.grid;
  if (grid.spec.d != 1)
    throw std::invalid_argument("corrected residual: only d = 1 is supported");
  if (phi.minCoeff() <= 0)
    throw std::invalid_argument("corrected residual: phi must be positive");
  const double a = op.alpha, h = grid.h(), Rb = op.box_halfwidth();
  const double cr = riesz_constant(a, 1);
  const long n = phi.size();

  // exterior source g(y) = (-Delta)^{a/2} of phi-extended-by-zero, |y| > Rb
  auto g = [&](double y) {
    double s = 0;
    for (long z = 0; z < n; ++z)
      s += phi(z) * std::pow(std::abs(y - grid.coords[z][0]), -1.0 - a);
    return -op.c_norm * h * s;
  };

  // quadrature over (Rb, inf): sqrt-stretched panel resolving the boundary
  // layer of g, then a log-spaced tail
  std::vector<double> ys, ws;
  const int m1 = 300, m2 = 400;
  const double v1 = std::sqrt(Rb);
  for (int i = 0; i < m1; ++i) {
    const double v = v1 * (i + 0.5) / m1;
    ys.push_back(Rb + v * v);
    ws.push_back(2.0 * v * (v1 / m1));
  }
  const double U = 40.0;
  for (int i = 0; i < m2; ++i) {
    const double u = U * (i + 0.5) / m2;
    ys.push_back(2.0 * Rb * std::exp(u));
    ws.push_back(ys.back() * (U / m2));
  }
  std::vector<double> gp(ys.size()), gm(ys.size());
  for (size_t q = 0; q < ys.size(); ++q) {
    gp[q] = g(ys[q]);
    gm[q] = g(-ys[q]);
  }

  const Eigen::VectorXd base = lambda1 * (kernel.K * phi);
  RieszResidual res;
  res.per_node.resize(n);
  res.max_interior = 0;
  for (long i = 0; i < n; ++i) {
    const double x = grid.coords[i][0];
    double corr = 0;
    for (size_t q = 0; q < ys.size(); ++q)
      corr += ws[q] * (gp[q] * std::pow(ys[q] - x, a - 1.0) +
                       gm[q] * std::pow(ys[q] + x, a - 1.0));
    corr *= cr;
    res.per_node(i) = std::abs(phi(i) - base(i) - corr) / phi(i);
    if (grid.radii(i) <= grid.spec.R / 2.0)
      res.max_interior = std::max(res.max_interior, res.per_node(i));
  }
  return res;
}

LineFit fit_decay(const Eigen::VectorXd& phi, const Grid& grid, double r_lo,
                  double r_hi, long min_nodes) {
  std::vector<double> xs, ys;
  for (long i = 0; i < phi.size(); ++i) {
    const double r = grid.radii(i);
    if (r >= r_lo && r <= r_hi && phi(i) > 0) {
      xs.push_back(1.0 + r);
      ys.push_back(phi(i));
    }
  }
  if (long(xs.size()) < min_nodes)
    throw std::invalid_argument("fit_decay: annulus contains too few nodes");
  return fit_loglog(xs, ys);
}

double j_integral_1d(double x, double gamma, double beta) {
  // J(x) = int_0^inf u^{-gamma} [ (1+|x-u|)^{-beta} + (1+|x+u|)^{-beta} ] du,
  // x taken >= 0 by symmetry.
  x = std::abs(x);
  boost::math::quadrature::tanh_sinh<double> integ;
  auto f = [&](double u) {
    return std::pow(u, -gamma) * (std::pow(1.0 + std::abs(x - u), -beta) +
                                  std::pow(1.0 + x + u, -beta));
  };
  const double U0 = std::max(4.0 * (1.0 + x), 16.0);
  // head: endpoint singularity at u = 0 and kink at u = x
  double head;
  if (x > 0)
    head = integ.integrate(f, 0.0, x, 1e-10) + integ.integrate(f, x, U0, 1e-10);
  else
    head = integ.integrate(f, 0.0, U0, 1e-10);
  // tail via u = U0/s, powers combined so s -> 0 never forms 0 * inf
  auto tail_f = [&](double s) {
    return std::pow(U0, 1.0 - gamma) * std::pow(s, gamma + beta - 2.0) *
           (std::pow(U0 + s * (1.0 - x), -beta) +
            std::pow(U0 + s * (1.0 + x), -beta));
  };
  const double tail = integ.integrate(tail_f, 0.0, 1.0, 1e-10);
  return head + tail;
}

JBoundReport j_bound_check(double gamma, double beta, int d,
                           const std::vector<double>& sample_radii) {
  if (d != 1) throw std::invalid_argument("j_bound_check: only d = 1 is supported");
  if (!(gamma < d) || !(gamma + beta > d))
    throw std::invalid_argument("j_bound_check: need gamma < d and gamma + beta > d");
  JBoundReport rep;
  rep.regime = beta < d ? -1 : (beta > d ? 1 : 0);
  rep.sup_ratio = 0;
  rep.min_ratio = std::numeric_limits<double>::infinity();
  for (double x : sample_radii) {
    const double J = j_integral_1d(x, gamma, beta);
    double bound;
    if (rep.regime < 0) bound = std::pow(1.0 + x, d - gamma - beta);
    else if (rep.regime > 0) bound = std::pow(1.0 + x, -gamma);
    else bound = std::pow(1.0 + x, -gamma) * std::log(2.0 + x);
    const double ratio = J / bound;
    rep.sup_ratio = std::max(rep.sup_ratio, ratio);
    rep.min_ratio = std::min(rep.min_ratio, ratio);
  }
  return rep;
}

BootstrapInfo bootstrap_steps(double alpha, double beta, int d) {
  if (!(beta > alpha)) throw std::invalid_argument("bootstrap_steps: requires beta > alpha");
  const double v = (d - beta) / (beta - alpha);
  BootstrapInfo info;
  if (v <= 0) {
    info.k = 0;
  } else {
    // ceil with protection against FP noise at integer values
    info.k = int(std::ceil(v - 1e-9));
  }
  const double r = std::round(v);
  info.log_flag = r >= 0.0 && v >= -1e-9 && std::abs(v - r) < 1e-9;
  return info;
}

}  // namespace fracheat
