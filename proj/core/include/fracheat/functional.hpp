#pragma once

#include <string>
#include <vector>

#include "fracheat/spectral.hpp"

namespace fracheat {

enum class Compactness { Compact, NotCompact, Inconclusive };

std::string to_string(Compactness c);

struct CompactnessVerdict {
  Compactness verdict = Compactness::Inconclusive;
  double psi1_limit = 0;              // Psi_1 at the far probe radius
  double integral_test_value = 0;     // head + extrapolated tail
  double tail_decay_exponent = 0;     // fitted decay of beta_0^{-1}(e^u) in u
  double sup_ratio_W_over_power = 0;  // sup W(x)/(1+|x|)^alpha when finite
};

/// Compactness decision procedure: growth rule first
/// (sup W/(1+|x|)^alpha < infinity => not compact), then the
/// Psi_1/Psi_2/beta_0 calculus with the integral convergence test.
/// Free constants are set to 1; only shapes are compared.
CompactnessVerdict classify_compactness(const WeightSpec& w, double alpha, int d);

/// Psi_1(r) = sup_{|x| >= r} |x|^alpha / W(x), by radial maximization.
double psi1(const WeightSpec& w, double alpha, double r);

struct TestFamily {
  std::vector<Eigen::VectorXd> members;
  std::vector<std::string> labels;
};

/// Fixed deterministic family: discrete Gaussians, plateau functions,
/// single-node spikes, and a scaling family; all supported inside the box.
TestFamily build_test_family(const Grid& grid);

/// Gaussian bump of unit width w scaled by lambda: u(lambda x).
TestFamily build_scaling_family(const Grid& grid, double base_width,
                                const std::vector<double>& lambdas);

/// Discrete plateau: 1 on |x| <= l, linear ramp to 0 at 2l.
Eigen::VectorXd plateau_function(const Grid& grid, double l);

struct FalsifierSlopes {
  LineFit mass;     // mu(f_l^2) vs l
  LineFit energy;   // D(f_l, f_l) vs l
  LineFit psi_mass; // mu(f_l psi)^2 vs l, psi = e^{-|x|}
};

FalsifierSlopes falsifier_scalings(const DiscreteOperator& op,
                                   const std::vector<double>& l_list);

/// beta_emp(s) = max over family of (mu(f^2) - s D(f,f))_+ / mu(|f|)^2.
std::vector<double> super_poincare_empirical(const DiscreteOperator& op,
                                             const TestFamily& family,
                                             const std::vector<double>& s_list);

/// Predicted log beta_0(s) vs log(1/s) slope for a power weight beta>alpha.
double beta0_predicted_slope(double alpha, double beta, int d);

struct RatioReport {
  double max_ratio = 0;
  std::vector<double> per_member;
};

/// max over family of int f^2 |x|^{-alpha} dx / D(f,f); |x| clamped at h/2.
RatioReport hardy_ratio(const DiscreteOperator& op, const TestFamily& family);

enum class NashRegime { HighBeta, MidBeta };  // beta >= 2 alpha / alpha < beta < 2 alpha

struct NashExponents {
  double p = 0;  // power on mu(u^2)
  double q = 0;  // power on mu(|u| V)
  double theta = 0;
};

NashExponents nash_exponents(NashRegime regime, double alpha, double beta, int d);

/// max over family of mu(u^2)^p / (D(u,u) mu(|u| V)^q).
RatioReport nash_ratio(const DiscreteOperator& op, const TestFamily& family,
                       NashRegime regime, double beta,
                       const Eigen::VectorXd& V);

/// max over family of || |x|^gamma u ||_{L^tau(dx)}^2 / D(u,u);
/// (tau, gamma) must satisfy 1/tau + gamma/d = 1/2 - alpha/(2d).
RatioReport ckn_ratio(const DiscreteOperator& op, const TestFamily& family,
                      double tau, double gamma);

/// Solves the CKN constraint for tau at given gamma.
double ckn_tau(double alpha, int d, double gamma);

/// max over t, i of (P_t V)_i / V_i - 1.
double lyapunov_check(const Spectrum& spec, const Eigen::VectorXd& V,
                      const std::vector<double>& t_list);

/// psi(r) = sup_{t>0} (r/t) log(r / (C t^{-gamma})), clamped at zero,
/// by golden-section maximization over log t.
double converse_nash_rate(double gamma, double C, double r);
std::vector<double> converse_nash_rate(double gamma, double C,
                                       const std::vector<double>& r_list);

struct ExponentComparison {
  double kernel_exponent = 0;  // (d + beta - 2 alpha) / (beta - alpha)
  double trace_exponent = 0;   // d / alpha
  int larger = 0;              // -1 first, +1 second, 0 equal
  bool equivalence_holds = false;  // first > second <=> 2 alpha > beta
};

ExponentComparison exponent_check(double alpha, double beta, int d);

}  // namespace fracheat
