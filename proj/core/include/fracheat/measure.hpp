#pragma once

#include "fracheat/grid.hpp"
#include "fracheat/weight.hpp"

namespace fracheat {

/// Discrete reference measure mu_i = h^d / W(x_i).
struct Measure {
  Eigen::VectorXd mu;

  double total() const { return mu.sum(); }
};

Measure build_measure(const Grid& grid, const WeightSpec& w);

}  // namespace fracheat
