#pragma once

#include <vector>

namespace fracheat {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};

/// Ordinary least squares y ~ a + b x.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Least-squares slope of log(y) vs log(x); all inputs must be positive.
LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

std::vector<double> logspace(double lo, double hi, int n);

}  // namespace fracheat
