#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "fracheat/grid.hpp"
#include "fracheat/spectral.hpp"
#include "fracheat/weight.hpp"

namespace fracheat {

/// One-sided a-stable positive variable, a in (0,1), normalized so that
/// E[exp(-u S)] = exp(-u^a). Kanter's representation.
double kanter_sample(double a, std::mt19937_64& rng);

/// Path of the rotationally symmetric alpha-stable process in parent time,
/// sampled on the step grid 0, ds, 2 ds, ...
struct StablePath {
  double ds = 0;
  std::vector<Point> x;  // x[j] = position at parent time j * ds
};

/// Subordinated-Gaussian increments: dX = sqrt(2 dS) Z with dS a positive
/// (alpha/2)-stable increment over ds. The Fourier symbol of one step is
/// exp(-ds |xi|^alpha).
StablePath sample_stable_path(const Point& x0, int d, double s_end, double ds,
                              double alpha, std::uint64_t seed);

struct TimeChanged {
  std::vector<Point> x;    // position at each requested mu-time
  bool horizon_ok = true;  // clock reached the last t point before s_end
};

/// Additive functional A accumulated by the left-endpoint rule
/// A += ds / W(X_s); the position at mu-time t is X at the first grid time
/// with A >= t.
TimeChanged time_change(const StablePath& path, int d, const WeightSpec& w,
                        const std::vector<double>& t_points);

struct PathEnsemble {
  long n_paths = 0;
  double ds = 0;
  std::uint64_t seed = 0;
  std::vector<double> t_points;
  // positions[k][p] = path p at t_points[k]; valid iff n_recorded[p] > k
  std::vector<std::vector<Point>> positions;
  std::vector<int> n_recorded;
  std::vector<char> killed;        // exited the box
  long insufficient_horizon = 0;   // unkilled paths whose clock fell short
};

/// Streams paths one at a time (never stores a full parent-time path):
/// per-path RNG derived from (seed, path index), kill on first exit of the
/// closed box [-box_halfwidth, box_halfwidth]^d at step granularity.
PathEnsemble simulate_ensemble(const Point& x0, int d, const WeightSpec& w,
                               double box_halfwidth, double alpha,
                               const std::vector<double>& t_points,
                               long n_paths, double s_end, double ds,
                               std::uint64_t seed);

struct CompareResult {
  double tv = 0;            // total variation, killed mass as an extra cell
  double tv_stderr = 0;
  double survival_emp = 0;
  double survival_spectral = 0;
  long survivors = 0;
  std::vector<double> cell_centers;
  std::vector<double> empirical_mass;
  std::vector<double> spectral_mass;
  std::vector<double> mass_stderr;
};

/// Histograms X^mu at t_points[t_index] over ~n_cells coarse cells
/// (intervals of the first coordinate in 1D, radial annuli in 2D) and
/// compares with the spectral sub-probability sum_j p(t, x0, x_j) mu_j.
/// Refuses when fewer than 1000 paths survive.
CompareResult empirical_compare(const PathEnsemble& ens, const Spectrum& spec,
                                const Grid& grid, long x0_index,
                                std::size_t t_index, int n_cells);

}  // namespace fracheat
