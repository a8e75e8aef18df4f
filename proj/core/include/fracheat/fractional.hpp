#pragma once

namespace fracheat {

/// c_{d,alpha} normalized so the Fourier symbol of the jump form equals
/// |xi|^alpha:
///   c_{d,alpha} = alpha 2^{alpha-1} Gamma((d+alpha)/2)
///                 / (pi^{d/2} Gamma(1-alpha/2)).
double normalization_constant(double alpha, int d);

/// Riesz-potential normalization: ((-Delta)^{alpha/2})^{-1} f =
/// riesz_constant * int f(y) |x-y|^{alpha-d} dy (d > alpha).
double riesz_constant(double alpha, int d);

struct FracParams {
  double alpha;
  int d;
  double c_norm;

  FracParams(double alpha_, int d_);
};

}  // namespace fracheat
