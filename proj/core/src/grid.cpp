#include "fracheat/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace fracheat {

double GridSpec::cell_volume() const {
  return std::pow(spacing(), d);
}

long GridSpec::n_nodes() const {
  long n = 1;
  for (int k = 0; k < d; ++k) n *= n_per_axis;
  return n;
}

void GridSpec::validate() const {
  if (d != 1 && d != 2) throw std::invalid_argument("grid: d must be 1 or 2");
  if (R <= 0) throw std::invalid_argument("grid: R must be positive");
  if (n_per_axis < 3) throw std::invalid_argument("grid: n_per_axis must be >= 3");
  if (n_per_axis % 2 == 0) throw std::invalid_argument("grid: n_per_axis must be odd");
}

Grid build_grid(const GridSpec& spec) {
  spec.validate();
  Grid g;
  g.spec = spec;
  const long n = spec.n_nodes();
  const double h = spec.spacing();
  g.coords.resize(n);
  g.radii.resize(n);
  if (spec.d == 1) {
    for (long i = 0; i < n; ++i) {
      g.coords[i] = {-spec.R + i * h, 0.0};
      g.radii(i) = std::abs(g.coords[i][0]);
    }
  } else {
    long idx = 0;
    for (int i = 0; i < spec.n_per_axis; ++i) {
      for (int j = 0; j < spec.n_per_axis; ++j, ++idx) {
        g.coords[idx] = {-spec.R + i * h, -spec.R + j * h};
        g.radii(idx) = norm_of(g.coords[idx], 2);
      }
    }
  }
  return g;
}

long Grid::origin_index() const {
  const long mid = spec.n_per_axis / 2;
  return spec.d == 1 ? mid : mid * spec.n_per_axis + mid;
}

}  // namespace fracheat
