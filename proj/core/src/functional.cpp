#include "fracheat/functional.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fracheat {

std::string to_string(Compactness c) {
  switch (c) {
    case Compactness::Compact: return "Compact";
    case Compactness::NotCompact: return "NotCompact";
    default: return "Inconclusive";
  }
}

namespace {

// Golden-section maximization of f on [a,b].
template <typename F>
double golden_max(F&& f, double a, double b, double tol = 1e-12) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol * (1.0 + std::abs(a) + std::abs(b))) {
    if (fc > fd) {
      b = d; d = c; fd = fc;
      c = b - gr * (b - a); fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + gr * (b - a); fd = f(d);
    }
  }
  return std::max(fc, fd);
}

// log W(e^{lr}) evaluated directly in the log domain so radii far beyond
// double range stay representable. May return +inf (stretched-exp far tail).
double log_weight_l(const WeightSpec& w, double lr) {
  const double l1p = lr > 36.0 ? lr : std::log1p(std::exp(lr));  // log(1+r)
  if (const auto* p = std::get_if<PowerWeight>(&w.w)) return p->beta * l1p;
  if (const auto* s = std::get_if<StretchedExpWeight>(&w.w)) {
    const double q = s->envelope_exponent();
    return std::log(s->c1) + s->beta * l1p + s->c3 * std::exp(q * l1p);
  }
  throw std::invalid_argument("classify: table variant has no radial form");
}

// The Psi_1 machinery assumes u^alpha / W(u) is unimodal in u, which holds
// for the radially monotone analytic weight families.
struct Psi1Calc {
  const WeightSpec& w;
  double alpha;
  double peak_lu = 0, peak_val = 0;

  Psi1Calc(const WeightSpec& w_, double alpha_) : w(w_), alpha(alpha_) {
    auto f = [&](double lu) { return alpha * lu - log_weight_l(w, lu); };
    peak_val = golden_max(f, -40.0, 60.0, 1e-13);
    // recover the argmax by a short scan + golden on the best bracket
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 400; ++i) {
      const double lu = -40.0 + 100.0 * i / 400.0;
      if (f(lu) > best) {
        best = f(lu);
        peak_lu = lu;
      }
    }
    peak_val = std::max(peak_val, golden_max(f, peak_lu - 0.5, peak_lu + 0.5, 1e-13));
  }

  // log Psi_1(e^{lr})
  double log_psi1(double lr) const {
    if (lr <= peak_lu) return peak_val;
    return alpha * lr - log_weight_l(w, lr);
  }

  // log of inf{ t : Psi_1(t) <= s }, bisection on the decreasing branch
  double log_psi1_inv(double ls) const {
    if (ls >= peak_val) return -40.0;
    double lo = peak_lu, hi = std::max(peak_lu + 1.0, 2.0);
    while (log_psi1(hi) > ls && hi < 1e9) hi *= 2.0;
    for (int it = 0; it < 120 && hi - lo > 1e-11 * (1.0 + std::abs(hi)); ++it) {
      const double mid = 0.5 * (lo + hi);
      (log_psi1(mid) <= ls ? hi : lo) = mid;
    }
    return hi;
  }

  // log beta_0(s) with c1 = c2 = 1: (1 + s^{-d/alpha}) Psi_2(Psi_1^{-1}(s^1))
  double log_beta0(double ls, int d) const {
    const double lr = log_psi1_inv(std::min(ls, 0.0));
    double lg = 2.0 * log_weight_l(w, lr);  // log Psi_2 = 2 log W, W nondecreasing
    const double e = -(d / alpha) * ls;
    lg += e > 0 ? e + std::log1p(std::exp(-e)) : std::log1p(std::exp(e));
    return lg;
  }

  // log beta_0^{-1}(r) given log r; beta_0 is decreasing in s.
  double log_beta0_inv(double log_r, int d) const {
    double lo = -1e7, hi = 60.0;
    if (log_beta0(hi, d) > log_r) return hi;
    for (int it = 0; it < 200 && hi - lo > 1e-9 * (1.0 + std::abs(lo)); ++it) {
      const double mid = 0.5 * (lo + hi);
      (log_beta0(mid, d) <= log_r ? hi : lo) = mid;
    }
    return hi;
  }
};

}  // namespace

double psi1(const WeightSpec& w, double alpha, double r) {
  Psi1Calc calc(w, alpha);
  return std::exp(calc.log_psi1(std::log(std::max(r, 1e-15))));
}

CompactnessVerdict classify_compactness(const WeightSpec& w, double alpha, int d) {
  CompactnessVerdict v;
  if (!w.is_radial_analytic()) return v;  // Inconclusive off the grid

  // Rule (ii): bounded W/(1+|x|)^alpha means not compact. Scan in the log
  // domain (stretched-exp tails overflow a plain double).
  double sup_lratio = std::log(w.eval_radius(0.0));
  bool unbounded = false;
  double prev_decade_max = -std::numeric_limits<double>::infinity();
  for (int dec = -2; dec <= 9; ++dec) {
    double m = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 32; ++i) {
      const double lr = (dec + i / 32.0) * std::log(10.0);
      const double l1p = lr > 36.0 ? lr : std::log1p(std::exp(lr));
      m = std::max(m, log_weight_l(w, lr) - alpha * l1p);
    }
    sup_lratio = std::max(sup_lratio, m);
    if (dec >= 7 && m > prev_decade_max + 1e-6) unbounded = true;
    prev_decade_max = m;
  }
  if (!unbounded) {
    v.verdict = Compactness::NotCompact;
    v.sup_ratio_W_over_power = std::exp(sup_lratio);
    return v;
  }

  // Rule (i): Psi_1 -> 0 plus convergence of int beta_0^{-1}(r)/r dr.
  // The vanishing gate is lenient (any decay over 8 decades); the integral
  // test makes the actual decision.
  Psi1Calc calc(w, alpha);
  const double lp12 = calc.log_psi1(std::log(1e12));
  const double lp4 = calc.log_psi1(std::log(1e4));
  v.psi1_limit = std::exp(lp12);
  if (!(lp12 < lp4 + std::log(0.5)))
    return v;  // Psi_1 does not vanish: criterion silent

  // Substitute r = e^u; integrand g(u) = beta_0^{-1}(e^u).
  auto g = [&](double u) { return std::exp(calc.log_beta0_inv(u, d)); };
  const double u0 = calc.log_beta0(std::log(0.5), d);  // start past beta_0(1/2)
  const double u1 = std::max(2.0 * u0, std::log(1e6));
  double head = 0;
  {
    const int m = 200;
    double prev = g(u0);
    for (int i = 1; i <= m; ++i) {
      const double u = u0 + (u1 - u0) * i / m;
      const double cur = g(u);
      head += 0.5 * (prev + cur) * (u1 - u0) / m;
      prev = cur;
    }
  }
  // Tail decay exponent of g(u) in u, fitted in the log domain so the far
  // samples survive even where g itself underflows.
  std::vector<double> lus, lgs;
  for (double u = u1; u <= 1e5; u *= 2.0) {
    const double lg = calc.log_beta0_inv(u, d);
    if (!std::isfinite(lg) || lg <= -9e6) break;
    lus.push_back(std::log(u));
    lgs.push_back(lg);
  }
  if (lus.size() < 3) return v;
  const LineFit tail = fit_line(lus, lgs);
  v.tail_decay_exponent = -tail.slope;
  if (v.tail_decay_exponent > 1.05) {
    v.integral_test_value = head + g(u1) * u1 / (v.tail_decay_exponent - 1.0);
    v.verdict = Compactness::Compact;
  }
  return v;
}

Eigen::VectorXd plateau_function(const Grid& grid, double l) {
  if (!(l > 0) || 2.0 * l >= grid.spec.R)
    throw std::invalid_argument("plateau_function: need 0 < 2l < R");
  Eigen::VectorXd f(grid.size());
  for (long i = 0; i < grid.size(); ++i) {
    const double r = grid.radii(i);
    f(i) = std::clamp(2.0 - r / l, 0.0, 1.0);
  }
  return f;
}

namespace {

Eigen::VectorXd gaussian_bump(const Grid& grid, double center, double width) {
  Eigen::VectorXd f(grid.size());
  const double cutoff = 0.8 * grid.spec.R;
  for (long i = 0; i < grid.size(); ++i) {
    double dx2 = (grid.coords[i][0] - center) * (grid.coords[i][0] - center);
    if (grid.spec.d == 2) dx2 += grid.coords[i][1] * grid.coords[i][1];
    f(i) = grid.radii(i) >= cutoff ? 0.0 : std::exp(-dx2 / (2.0 * width * width));
  }
  return f;
}

}  // namespace

TestFamily build_test_family(const Grid& grid) {
  const double R = grid.spec.R;
  TestFamily fam;
  const double centers[5] = {0.0, R / 8, -R / 8, R / 4, 0.0};
  const double widths[5] = {R / 20, R / 20, R / 40, R / 10, R / 8};
  for (int k = 0; k < 5; ++k) {
    fam.members.push_back(gaussian_bump(grid, centers[k], widths[k]));
    fam.labels.push_back("gauss_" + std::to_string(k));
  }
  for (double frac : {1.0 / 32, 1.0 / 16, 3.0 / 32, 1.0 / 8, 3.0 / 16, 1.0 / 4}) {
    fam.members.push_back(plateau_function(grid, frac * R));
    fam.labels.push_back("plateau_" + std::to_string(frac * R));
  }
  for (double frac : {0.0, 1.0 / 16, 1.0 / 8, 1.0 / 4, 3.0 / 8}) {
    // spike at the node nearest to radius frac*R on the first axis
    long best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (long i = 0; i < grid.size(); ++i) {
      const double r2 = grid.spec.d == 2 ? grid.coords[i][1] : 0.0;
      const double dd = std::abs(grid.coords[i][0] - frac * R) + std::abs(r2);
      if (dd < bd) {
        bd = dd;
        best = i;
      }
    }
    Eigen::VectorXd e = Eigen::VectorXd::Zero(grid.size());
    e(best) = 1.0;
    fam.members.push_back(e);
    fam.labels.push_back("spike_" + std::to_string(frac * R));
  }
  const TestFamily scaling =
      build_scaling_family(grid, R / 16, {0.25, 0.5, 1.0, 2.0, 4.0});
  for (size_t i = 0; i < scaling.members.size(); ++i) {
    fam.members.push_back(scaling.members[i]);
    fam.labels.push_back(scaling.labels[i]);
  }
  return fam;
}

TestFamily build_scaling_family(const Grid& grid, double base_width,
                                const std::vector<double>& lambdas) {
  TestFamily fam;
  for (double lam : lambdas) {
    // u(lambda x) for Gaussian u means width base_width / lambda
    fam.members.push_back(gaussian_bump(grid, 0.0, base_width / lam));
    fam.labels.push_back("scale_" + std::to_string(lam));
  }
  return fam;
}

FalsifierSlopes falsifier_scalings(const DiscreteOperator& op,
                                   const std::vector<double>& l_list) {
  const Grid& grid = op.grid;
  for (double l : l_list)
    if (l > grid.spec.R / 4)
      throw std::invalid_argument("falsifier_scalings: l exceeds R/4");
  std::vector<double> mass, energy, psi_mass;
  for (double l : l_list) {
    const Eigen::VectorXd f = plateau_function(grid, l);
    mass.push_back((f.array().square() * op.mu.array()).sum());
    energy.push_back(dirichlet_energy(op, f));
    double mp = 0;
    for (long i = 0; i < grid.size(); ++i)
      mp += f(i) * std::exp(-grid.radii(i)) * op.mu(i);
    psi_mass.push_back(mp * mp);
  }
  FalsifierSlopes s;
  s.mass = fit_loglog(l_list, mass);
  s.energy = fit_loglog(l_list, energy);
  s.psi_mass = fit_loglog(l_list, psi_mass);
  return s;
}

std::vector<double> super_poincare_empirical(const DiscreteOperator& op,
                                             const TestFamily& family,
                                             const std::vector<double>& s_list) {
  if (family.members.empty())
    throw std::invalid_argument("super_poincare_empirical: empty family");
  std::vector<double> m2, en, m1;
  for (const auto& f : family.members) {
    if (f.isZero()) throw std::invalid_argument("super_poincare_empirical: zero member");
    m2.push_back((f.array().square() * op.mu.array()).sum());
    en.push_back(dirichlet_energy(op, f));
    const double a = (f.array().abs() * op.mu.array()).sum();
    m1.push_back(a * a);
  }
  std::vector<double> beta_emp;
  for (double s : s_list) {
    if (!(s > 0)) throw std::invalid_argument("super_poincare_empirical: s must be > 0");
    double best = 0;
    for (size_t k = 0; k < m2.size(); ++k)
      best = std::max(best, std::max(0.0, m2[k] - s * en[k]) / m1[k]);
    beta_emp.push_back(best);
  }
  return beta_emp;
}

double beta0_predicted_slope(double alpha, double beta, int d) {
  return std::max(double(d) / alpha, 2.0 * beta / (beta - alpha));
}

RatioReport hardy_ratio(const DiscreteOperator& op, const TestFamily& family) {
  const Grid& grid = op.grid;
  const double vol = grid.cell_volume();
  const double reg = grid.h() / 2.0;
  RatioReport rep;
  for (const auto& f : family.members) {
    double num = 0;
    for (long i = 0; i < grid.size(); ++i)
      num += vol * f(i) * f(i) * std::pow(std::max(grid.radii(i), reg), -op.alpha);
    const double ratio = num / dirichlet_energy(op, f);
    rep.per_member.push_back(ratio);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
  }
  return rep;
}

NashExponents nash_exponents(NashRegime regime, double alpha, double beta, int d) {
  NashExponents e;
  if (regime == NashRegime::HighBeta) {
    e.p = (d + alpha) / d;
    e.q = 2.0 * alpha / d;
    e.theta = d;
  } else {
    if (!(beta > alpha && beta < 2 * alpha))
      throw std::invalid_argument("nash_exponents: mid regime needs alpha < beta < 2 alpha");
    e.theta = alpha * (d + beta - 2 * alpha) / (beta - alpha);
    e.p = (e.theta + alpha) / e.theta;
    e.q = 2.0 * alpha / e.theta;
  }
  return e;
}

RatioReport nash_ratio(const DiscreteOperator& op, const TestFamily& family,
                       NashRegime regime, double beta,
                       const Eigen::VectorXd& V) {
  const NashExponents e = nash_exponents(regime, op.alpha, beta, op.grid.spec.d);
  RatioReport rep;
  for (const auto& u : family.members) {
    if (u.isZero()) throw std::invalid_argument("nash_ratio: zero member");
    const double m2 = (u.array().square() * op.mu.array()).sum();
    const double mv = (u.array().abs() * V.array() * op.mu.array()).sum();
    const double ratio =
        std::pow(m2, e.p) / (dirichlet_energy(op, u) * std::pow(mv, e.q));
    rep.per_member.push_back(ratio);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
  }
  return rep;
}

double ckn_tau(double alpha, int d, double gamma) {
  const double rhs = 0.5 - alpha / (2.0 * d) - gamma / d;
  if (!(rhs > 0)) throw std::invalid_argument("ckn_tau: constraint has no solution");
  return 1.0 / rhs;
}

RatioReport ckn_ratio(const DiscreteOperator& op, const TestFamily& family,
                      double tau, double gamma) {
  const int d = op.grid.spec.d;
  if (std::abs(1.0 / tau + gamma / d - (0.5 - op.alpha / (2.0 * d))) > 1e-12)
    throw std::invalid_argument("ckn_ratio: (tau, gamma) violate the constraint");
  const Grid& grid = op.grid;
  const double vol = grid.cell_volume();
  const double reg = grid.h() / 2.0;
  RatioReport rep;
  for (const auto& u : family.members) {
    double s = 0;
    for (long i = 0; i < grid.size(); ++i) {
      const double wv = std::pow(std::max(grid.radii(i), reg), gamma) * std::abs(u(i));
      s += vol * std::pow(wv, tau);
    }
    const double norm2 = std::pow(s, 2.0 / tau);
    const double ratio = norm2 / dirichlet_energy(op, u);
    rep.per_member.push_back(ratio);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
  }
  return rep;
}

double lyapunov_check(const Spectrum& spec, const Eigen::VectorXd& V,
                      const std::vector<double>& t_list) {
  if (V.minCoeff() <= 0) throw std::invalid_argument("lyapunov_check: V must be positive");
  double worst = -std::numeric_limits<double>::infinity();
  for (double t : t_list) {
    const Eigen::VectorXd ptv = heat_apply(spec, V, t);
    worst = std::max(worst, (ptv.array() / V.array() - 1.0).maxCoeff());
  }
  return worst;
}

double converse_nash_rate(double gamma, double C, double r) {
  if (!(gamma > 0)) throw std::invalid_argument("converse_nash_rate: gamma must be > 0");
  if (!(C > 0) || !(r > 0)) throw std::invalid_argument("converse_nash_rate: bad input");
  auto obj = [&](double lt) {
    return r * std::exp(-lt) * (std::log(r / C) + gamma * lt);
  };
  return std::max(0.0, golden_max(obj, -40.0, 40.0));
}

std::vector<double> converse_nash_rate(double gamma, double C,
                                       const std::vector<double>& r_list) {
  std::vector<double> out;
  for (double r : r_list) out.push_back(converse_nash_rate(gamma, C, r));
  return out;
}

ExponentComparison exponent_check(double alpha, double beta, int d) {
  if (!(beta > alpha)) throw std::invalid_argument("exponent_check: requires beta > alpha");
  if (!(d > alpha)) throw std::invalid_argument("exponent_check: requires d > alpha");
  ExponentComparison c;
  c.kernel_exponent = (d + beta - 2 * alpha) / (beta - alpha);
  c.trace_exponent = d / alpha;
  const double diff = c.kernel_exponent - c.trace_exponent;
  c.larger = std::abs(diff) < 1e-12 ? 0 : (diff > 0 ? -1 : 1);
  const bool first_larger = diff > 1e-12;
  const bool two_alpha_larger = 2 * alpha > beta + 1e-12;
  c.equivalence_holds = first_larger == two_alpha_larger;
  return c;
}

}  // namespace fracheat
