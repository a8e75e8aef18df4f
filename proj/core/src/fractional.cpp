#include "fracheat/fractional.hpp"

#include <cmath>
#include <stdexcept>

namespace fracheat {

double normalization_constant(double alpha, int d) {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw std::invalid_argument("normalization_constant: alpha must lie in (0,2)");
  if (d < 1) throw std::invalid_argument("normalization_constant: d must be >= 1");
  return alpha * std::pow(2.0, alpha - 1.0) * std::tgamma((d + alpha) / 2.0) /
         (std::pow(M_PI, d / 2.0) * std::tgamma(1.0 - alpha / 2.0));
}

double riesz_constant(double alpha, int d) {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw std::invalid_argument("riesz_constant: alpha must lie in (0,2)");
  if (!(d > alpha)) throw std::invalid_argument("riesz_constant: requires d > alpha");
  return std::tgamma((d - alpha) / 2.0) /
         (std::pow(2.0, alpha) * std::pow(M_PI, d / 2.0) * std::tgamma(alpha / 2.0));
}

FracParams::FracParams(double alpha_, int d_) : alpha(alpha_), d(d_) {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw std::invalid_argument("FracParams: alpha must lie in (0,2)");
  if (!(d > alpha)) throw std::invalid_argument("FracParams: requires d > alpha");
  c_norm = normalization_constant(alpha, d);
}

}  // namespace fracheat
