#pragma once

#include <vector>

#include "fracheat/spectral.hpp"

namespace fracheat {

/// One time slice of the spectral heat kernel p_mu(t, x_i, x_j).
struct KernelSlice {
  double t = 0;
  Eigen::MatrixXd values;
};

/// values = sum_n e^{-lambda_n t} phi_n (x) phi_n(y). Requires either the
/// full spectrum or enough modes that the dropped tail is below 1e-12
/// relative to the leading term.
KernelSlice kernel_eval(const Spectrum& spec, double t);

/// max_ij values_ij / (V_i V_j); throws if nonpositive (spectral truncation).
double sup_ratio(const KernelSlice& slice, const Eigen::VectorXd& V);

struct SupRatioFit {
  LineFit fit;  // log-log slope of m(t) over the t grid
  std::vector<double> t;
  std::vector<double> m;
};

/// Builds one slice per t, computes m(t) = sup_ij p/(V V), fits the
/// time exponent. Every t must be at or above the resolution floor.
SupRatioFit sup_ratio_fit(const Spectrum& spec, const Eigen::VectorXd& V,
                          const std::vector<double>& ts, double t_floor);

/// Smallest time at which the grid resolves continuum kernel scaling: the
/// stable motion needs ~h^alpha to cross one cell, so slices below that
/// saturate toward the atomic 1/mu_i diagonal.
double resolution_floor(double h, double alpha);

struct IuRatio {
  double min_ratio = 0;  // min_ij values_ij / (phi_i phi_j)
  double max_ratio = 0;
};

IuRatio iu_min_ratio(const KernelSlice& slice, const Eigen::VectorXd& phi);

}  // namespace fracheat
