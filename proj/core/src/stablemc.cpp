#include "fracheat/stablemc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fracheat {

namespace {

// strictly inside (0,1)
inline double uniform01(std::mt19937_64& rng) {
  return (rng() >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

struct GaussianDraw {
  bool has_spare = false;
  double spare = 0;
  double operator()(std::mt19937_64& rng) {
    if (has_spare) {
      has_spare = false;
      return spare;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform01(rng)));
    const double th = 2.0 * M_PI * uniform01(rng);
    spare = r * std::sin(th);
    has_spare = true;
    return r * std::cos(th);
  }
};

inline std::uint64_t splitmix64(std::uint64_t& s) {
  std::uint64_t z = (s += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::mt19937_64 path_rng(std::uint64_t seed, std::uint64_t path_index) {
  std::uint64_t s = seed ^ (path_index * 0xD6E8FEB86659FD93ULL + 1);
  const std::uint64_t a = splitmix64(s), b = splitmix64(s);
  std::seed_seq seq{std::uint32_t(a), std::uint32_t(a >> 32), std::uint32_t(b),
                    std::uint32_t(b >> 32)};
  return std::mt19937_64(seq);
}

inline bool in_box(const Point& x, int d, double half) {
  if (std::abs(x[0]) > half) return false;
  return d == 1 || std::abs(x[1]) <= half;
}

void check_mc_params(int d, double alpha, double ds) {
  if (d != 1 && d != 2) throw std::invalid_argument("stablemc: d must be 1 or 2");
  if (!(alpha > 0 && alpha < 2))
    throw std::invalid_argument("stablemc: alpha must lie in (0, 2)");
  if (!(ds > 0)) throw std::invalid_argument("stablemc: ds must be positive");
}

}  // namespace

double kanter_sample(double a, std::mt19937_64& rng) {
  if (!(a > 0 && a < 1))
    throw std::invalid_argument("kanter_sample: a must lie in (0, 1)");
  const double u = M_PI * uniform01(rng);
  const double e = -std::log(uniform01(rng));
  const double b = std::pow(std::sin(a * u), a) *
                   std::pow(std::sin((1.0 - a) * u), 1.0 - a) / std::sin(u);
  return std::pow(b, 1.0 / a) * std::pow(e, -(1.0 - a) / a);
}

StablePath sample_stable_path(const Point& x0, int d, double s_end, double ds,
                              double alpha, std::uint64_t seed) {
  check_mc_params(d, alpha, ds);
  if (!(s_end > 0)) throw std::invalid_argument("sample_stable_path: s_end <= 0");
  const long n_steps = long(std::llround(std::ceil(s_end / ds - 1e-12)));
  const double a = alpha / 2.0;
  const double step_scale = std::pow(ds, 1.0 / a);

  std::mt19937_64 rng = path_rng(seed, 0);
  GaussianDraw gauss;
  StablePath path;
  path.ds = ds;
  path.x.reserve(n_steps + 1);
  Point x = x0;
  path.x.push_back(x);
  for (long j = 0; j < n_steps; ++j) {
    const double dS = step_scale * kanter_sample(a, rng);
    const double sd = std::sqrt(2.0 * dS);
    x[0] += sd * gauss(rng);
    if (d == 2) x[1] += sd * gauss(rng);
    path.x.push_back(x);
  }
  return path;
}

TimeChanged time_change(const StablePath& path, int d, const WeightSpec& w,
                        const std::vector<double>& t_points) {
  if (!std::is_sorted(t_points.begin(), t_points.end()))
    throw std::invalid_argument("time_change: t_points must be sorted");
  TimeChanged out;
  std::size_t k = 0;
  while (k < t_points.size() && t_points[k] <= 0) {
    out.x.push_back(path.x.front());
    ++k;
  }
  double A = 0;
  for (std::size_t j = 0; j + 1 < path.x.size() && k < t_points.size(); ++j) {
    A += path.ds / weight_eval(w, path.x[j], d);
    while (k < t_points.size() && A >= t_points[k]) {
      out.x.push_back(path.x[j + 1]);
      ++k;
    }
  }
  out.horizon_ok = k == t_points.size();
  return out;
}

PathEnsemble simulate_ensemble(const Point& x0, int d, const WeightSpec& w,
                               double box_halfwidth, double alpha,
                               const std::vector<double>& t_points,
                               long n_paths, double s_end, double ds,
                               std::uint64_t seed) {
  check_mc_params(d, alpha, ds);
  if (!(box_halfwidth > 0))
    throw std::invalid_argument("simulate_ensemble: box_halfwidth <= 0");
  if (n_paths < 1) throw std::invalid_argument("simulate_ensemble: n_paths < 1");
  if (t_points.empty() || !std::is_sorted(t_points.begin(), t_points.end()))
    throw std::invalid_argument("simulate_ensemble: t_points must be sorted, nonempty");
  if (!in_box(x0, d, box_halfwidth))
    throw std::invalid_argument("simulate_ensemble: x0 outside the box");

  const long n_steps = long(std::llround(std::ceil(s_end / ds - 1e-12)));
  const double a = alpha / 2.0;
  const double step_scale = std::pow(ds, 1.0 / a);
  const std::size_t nT = t_points.size();

  PathEnsemble ens;
  ens.n_paths = n_paths;
  ens.ds = ds;
  ens.seed = seed;
  ens.t_points = t_points;
  ens.positions.assign(nT, std::vector<Point>(n_paths, Point{0, 0}));
  ens.n_recorded.assign(n_paths, 0);
  ens.killed.assign(n_paths, 0);

  for (long p = 0; p < n_paths; ++p) {
    std::mt19937_64 rng = path_rng(seed, std::uint64_t(p) + 1);
    GaussianDraw gauss;
    Point x = x0;
    double A = 0;
    std::size_t k = 0;
    while (k < nT && t_points[k] <= 0) {
      ens.positions[k][p] = x;
      ++k;
    }
    for (long j = 0; j < n_steps && k < nT; ++j) {
      const double A_new = A + ds / weight_eval(w, x, d);
      const double dS = step_scale * kanter_sample(a, rng);
      const double sd = std::sqrt(2.0 * dS);
      Point xn = x;
      xn[0] += sd * gauss(rng);
      if (d == 2) xn[1] += sd * gauss(rng);
      if (!in_box(xn, d, box_halfwidth)) {
        ens.killed[p] = 1;
        break;
      }
      while (k < nT && A_new >= t_points[k]) {
        ens.positions[k][p] = xn;
        ++k;
      }
      A = A_new;
      x = xn;
    }
    ens.n_recorded[p] = int(k);
    if (!ens.killed[p] && k < nT) ++ens.insufficient_horizon;
  }
  return ens;
}

CompareResult empirical_compare(const PathEnsemble& ens, const Spectrum& spec,
                                const Grid& grid, long x0_index,
                                std::size_t t_index, int n_cells) {
  if (t_index >= ens.t_points.size())
    throw std::invalid_argument("empirical_compare: t_index out of range");
  if (x0_index < 0 || x0_index >= grid.size())
    throw std::invalid_argument("empirical_compare: x0_index out of range");
  if (n_cells < 2) throw std::invalid_argument("empirical_compare: n_cells < 2");
  const int d = grid.spec.d;
  const double half = grid.spec.R + grid.h() / 2.0;
  const double t = ens.t_points[t_index];

  // cell coordinate: first coordinate in 1D, radius in 2D
  const double c_lo = d == 1 ? -half : 0.0;
  const double c_hi = d == 1 ? half : half * std::sqrt(2.0);
  const double cw = (c_hi - c_lo) / n_cells;
  auto cell_of = [&](const Point& x) {
    const double c = d == 1 ? x[0] : norm_of(x, d);
    return std::min<long>(n_cells - 1,
                          std::max<long>(0, long((c - c_lo) / cw)));
  };

  CompareResult res;
  res.cell_centers.resize(n_cells);
  for (int c = 0; c < n_cells; ++c) res.cell_centers[c] = c_lo + (c + 0.5) * cw;
  res.empirical_mass.assign(n_cells, 0.0);
  res.spectral_mass.assign(n_cells, 0.0);
  res.mass_stderr.assign(n_cells, 0.0);

  long survivors = 0;
  for (long p = 0; p < ens.n_paths; ++p) {
    if (std::size_t(ens.n_recorded[p]) <= t_index) continue;
    ++survivors;
    res.empirical_mass[cell_of(ens.positions[t_index][p])] += 1.0;
  }
  if (survivors < 1000)
    throw std::runtime_error("empirical_compare: only " +
                             std::to_string(survivors) +
                             " surviving paths (< 1000)");
  res.survivors = survivors;
  const double n = double(ens.n_paths);
  for (int c = 0; c < n_cells; ++c) {
    res.empirical_mass[c] /= n;
    res.mass_stderr[c] =
        std::sqrt(res.empirical_mass[c] * (1.0 - res.empirical_mass[c]) / n);
  }
  res.survival_emp = survivors / n;

  // spectral row: p_mu(t, x0, x_j) = sum_m e^{-lambda_m t} phi_m(x0) phi_m(x_j)
  const Eigen::VectorXd coef =
      ((-t * spec.lambdas.array()).exp() *
       spec.phis.row(x0_index).transpose().array())
          .matrix();
  const Eigen::VectorXd row = spec.phis * coef;
  // spread each node's mass over its cell footprint of width h so nodes
  // sitting exactly on a histogram boundary are split, matching the
  // continuum positions of the sampled paths
  const double hw = grid.h() / 2.0;
  for (long j = 0; j < grid.size(); ++j) {
    const double m = row(j) * spec.mu(j);
    res.survival_spectral += m;
    const double c = d == 1 ? grid.coords[j][0] : norm_of(grid.coords[j], d);
    const double lo = std::max(c - hw, c_lo), hi = std::min(c + hw, c_hi);
    if (hi <= lo) {
      res.spectral_mass[cell_of(grid.coords[j])] += m;
      continue;
    }
    const long b0 = std::min<long>(n_cells - 1, std::max<long>(0, long((lo - c_lo) / cw)));
    const long b1 = std::min<long>(n_cells - 1, std::max<long>(0, long((hi - c_lo) / cw)));
    for (long b = b0; b <= b1; ++b) {
      const double seg = std::min(hi, c_lo + (b + 1) * cw) - std::max(lo, c_lo + b * cw);
      if (seg > 0) res.spectral_mass[b] += m * seg / (hi - lo);
    }
  }

  double tv = std::abs(res.survival_emp - res.survival_spectral);
  double var = res.survival_emp * (1.0 - res.survival_emp) / n;
  for (int c = 0; c < n_cells; ++c) {
    tv += std::abs(res.empirical_mass[c] - res.spectral_mass[c]);
    var += res.mass_stderr[c] * res.mass_stderr[c];
  }
  res.tv = 0.5 * tv;
  res.tv_stderr = 0.5 * std::sqrt(var);
  return res;
}

}  // namespace fracheat
