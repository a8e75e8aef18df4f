#pragma once

#include <variant>
#include <vector>

#include "fracheat/grid.hpp"

namespace fracheat {

/// W(x) = (1+|x|)^beta
struct PowerWeight {
  double beta = 0.0;
};

/// One concrete representative of the envelope class
///   c1 (1+|x|)^beta <= W(x) <= c2 exp[c3 (1+|x|)^{(beta-alpha)/delta}],
/// realized as W(x) = c1 (1+|x|)^beta exp[c3 (1+|x|)^{(beta-alpha)/delta}].
/// The compactness classifier consumes only the envelope parameters.
struct StretchedExpWeight {
  double beta = 1.0;
  double delta = 2.0;
  double alpha = 0.5;
  double c1 = 1.0;
  double c3 = 1.0;

  double envelope_exponent() const { return (beta - alpha) / delta; }
};

/// Tabulated values tied to a fixed grid; rejects off-grid evaluation.
struct TableWeight {
  std::vector<Point> coords;
  std::vector<double> values;
  int d = 1;
};

struct WeightSpec {
  std::variant<PowerWeight, StretchedExpWeight, TableWeight> w;

  double operator()(const Point& x, int d) const { return eval_radius(norm_of(x, d), x, d); }
  double eval_radius(double r) const;  // radial variants only
  bool is_radial_analytic() const { return !std::holds_alternative<TableWeight>(w); }
  void validate() const;

 private:
  double eval_radius(double r, const Point& x, int d) const;
};

double weight_eval(const WeightSpec& w, const Point& x, int d);

/// W evaluated at every grid node.
Eigen::VectorXd weight_on_grid(const WeightSpec& w, const Grid& grid);

}  // namespace fracheat
