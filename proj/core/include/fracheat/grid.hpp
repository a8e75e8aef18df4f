#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

namespace fracheat {

using Point = std::array<double, 2>;

/// Uniform truncated lattice on [-R,R]^d, d in {1,2}. The node count per
/// axis is odd so the origin is always a grid node.
struct GridSpec {
  int d = 1;
  double R = 1.0;
  int n_per_axis = 3;

  double spacing() const { return 2.0 * R / (n_per_axis - 1); }
  double cell_volume() const;
  long n_nodes() const;
  void validate() const;
};

struct Grid {
  GridSpec spec;
  std::vector<Point> coords;  // lexicographic, node 0 at (-R,...,-R)
  Eigen::VectorXd radii;      // Euclidean norms |x_i|

  double h() const { return spec.spacing(); }
  double cell_volume() const { return spec.cell_volume(); }
  long size() const { return static_cast<long>(coords.size()); }
  long origin_index() const;
};

Grid build_grid(const GridSpec& spec);

inline double norm_of(const Point& x, int d) {
  double s = 0;
  for (int k = 0; k < d; ++k) s += x[k] * x[k];
  return std::sqrt(s);
}

inline double dist(const Point& a, const Point& b, int d) {
  double s = 0;
  for (int k = 0; k < d; ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

}  // namespace fracheat
