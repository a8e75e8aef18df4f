#include "fracheat/measure.hpp"

#include <stdexcept>

namespace fracheat {

Measure build_measure(const Grid& grid, const WeightSpec& w) {
  const double vol = grid.cell_volume();
  Eigen::VectorXd wv = weight_on_grid(w, grid);
  Measure m;
  m.mu.resize(grid.size());
  for (long i = 0; i < grid.size(); ++i) {
    if (!(wv(i) >= 1.0) || !std::isfinite(wv(i)))
      throw std::runtime_error("measure: weight must be finite and >= 1 on the grid");
    m.mu(i) = vol / wv(i);
  }
  return m;
}

}  // namespace fracheat
