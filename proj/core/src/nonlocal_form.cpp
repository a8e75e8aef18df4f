#include "fracheat/nonlocal_form.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace fracheat {

namespace {

// Distance from interior point x to the boundary of [-Rb,Rb]^2 along
// direction theta.
double ray_exit_distance(const Point& x, double Rb, double theta) {
  const double dir[2] = {std::cos(theta), std::sin(theta)};
  double t = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 2; ++k) {
    if (dir[k] > 1e-15) t = std::min(t, (Rb - x[k]) / dir[k]);
    else if (dir[k] < -1e-15) t = std::min(t, (-Rb - x[k]) / dir[k]);
  }
  return t;
}

double kill_2d(const Point& x, double Rb, double alpha, double c_norm) {
  // Polar reduction: the radial integral of r^{-2-alpha} * r dr from the
  // box exit distance to infinity is r_b(theta)^{-alpha} / alpha.
  std::vector<double> cuts;
  for (double sx : {-1.0, 1.0})
    for (double sy : {-1.0, 1.0})
      cuts.push_back(std::atan2(sy * Rb - x[1], sx * Rb - x[0]));
  cuts.push_back(-M_PI);
  cuts.push_back(M_PI);
  std::sort(cuts.begin(), cuts.end());

  using boost::math::quadrature::gauss_kronrod;
  double total = 0.0;
  for (size_t s = 0; s + 1 < cuts.size(); ++s) {
    if (cuts[s + 1] - cuts[s] < 1e-14) continue;
    total += gauss_kronrod<double, 31>::integrate(
        [&](double th) { return std::pow(ray_exit_distance(x, Rb, th), -alpha); },
        cuts[s], cuts[s + 1], 12, 1e-8);
  }
  return c_norm / alpha * total;
}

}  // namespace

double killing_rate(const Point& x, int d, double Rb, double alpha, double c_norm) {
  if (d == 1) {
    const double a = Rb - x[0], b = Rb + x[0];
    if (a <= 0 || b <= 0) throw std::invalid_argument("killing_rate: point outside box");
    return c_norm / alpha * (std::pow(a, -alpha) + std::pow(b, -alpha));
  }
  if (std::abs(x[0]) >= Rb || std::abs(x[1]) >= Rb)
    throw std::invalid_argument("killing_rate: point outside box");
  return kill_2d(x, Rb, alpha, c_norm);
}

DiscreteOperator assemble_form(const Grid& grid, const FracParams& frac,
                               const WeightSpec& w) {
  if (grid.spec.d != frac.d) throw std::invalid_argument("assemble_form: dimension mismatch");
  if (!(frac.d > frac.alpha)) throw std::invalid_argument("assemble_form: requires d > alpha");
  if (grid.spec.n_per_axis < 3) throw std::invalid_argument("assemble_form: grid too small");

  DiscreteOperator op;
  op.grid = grid;
  op.alpha = frac.alpha;
  op.c_norm = frac.c_norm;
  op.W = weight_on_grid(w, grid);
  op.mu = build_measure(grid, w).mu;

  const long n = grid.size();
  const int d = grid.spec.d;
  const double h = grid.h();
  const double vol = grid.cell_volume();
  const double coeff = frac.c_norm * vol * vol;
  const double ex = d + frac.alpha;

  // Pairwise distances are lattice offsets; precompute the kernel per offset.
  const int na = grid.spec.n_per_axis;
  Eigen::MatrixXd kernel_tab;
  Eigen::VectorXd kernel_tab1;
  if (d == 1) {
    kernel_tab1.resize(na);
    kernel_tab1(0) = 0.0;
    for (int k = 1; k < na; ++k) kernel_tab1(k) = coeff * std::pow(k * h, -ex);
  } else {
    kernel_tab.resize(na, na);
    kernel_tab(0, 0) = 0.0;
    for (int a = 0; a < na; ++a)
      for (int b = 0; b < na; ++b) {
        if (a == 0 && b == 0) continue;
        kernel_tab(a, b) = coeff * std::pow(h * std::hypot(double(a), double(b)), -ex);
      }
  }

  op.Q.setZero(n, n);
  op.kill.resize(n);
  const double Rb = op.box_halfwidth();
  for (long i = 0; i < n; ++i)
    op.kill(i) = killing_rate(grid.coords[i], d, Rb, frac.alpha, frac.c_norm);

  for (long i = 0; i < n; ++i) {
    double row = 0.0;
    for (long j = i + 1; j < n; ++j) {
      double kij;
      if (d == 1) {
        kij = kernel_tab1(j - i);
      } else {
        const int ai = int(i / na), bi = int(i % na);
        const int aj = int(j / na), bj = int(j % na);
        kij = kernel_tab(std::abs(ai - aj), std::abs(bi - bj));
      }
      op.Q(i, j) = -kij;
      op.Q(j, i) = -kij;
    }
    for (long j = 0; j < n; ++j)
      if (j != i) row -= op.Q(i, j);
    op.Q(i, i) = row + vol * op.kill(i);
  }
  return op;
}

double dirichlet_energy(const DiscreteOperator& op, const Eigen::VectorXd& f) {
  if (f.size() != op.size()) throw std::invalid_argument("dirichlet_energy: size mismatch");
  if (!f.allFinite()) throw std::invalid_argument("dirichlet_energy: non-finite input");
  return f.dot(op.Q * f);
}

namespace {
constexpr char kMagic[8] = {'F', 'H', 'O', 'P', '0', '0', '0', '1'};
}

void save_operator(const DiscreteOperator& op, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_operator: cannot open " + path);
  out.write(kMagic, sizeof(kMagic));
  const int32_t d = op.grid.spec.d, na = op.grid.spec.n_per_axis;
  const int64_t n = op.size();
  out.write(reinterpret_cast<const char*>(&d), 4);
  out.write(reinterpret_cast<const char*>(&na), 4);
  out.write(reinterpret_cast<const char*>(&n), 8);
  out.write(reinterpret_cast<const char*>(&op.grid.spec.R), 8);
  out.write(reinterpret_cast<const char*>(&op.alpha), 8);
  out.write(reinterpret_cast<const char*>(&op.c_norm), 8);
  out.write(reinterpret_cast<const char*>(op.Q.data()), n * n * 8);
  out.write(reinterpret_cast<const char*>(op.kill.data()), n * 8);
  out.write(reinterpret_cast<const char*>(op.mu.data()), n * 8);
  out.write(reinterpret_cast<const char*>(op.W.data()), n * 8);
  if (!out) throw std::runtime_error("save_operator: write failed");
}

DiscreteOperator load_operator(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_operator: cannot open " + path);
  char magic[8];
  in.read(magic, 8);
  if (std::memcmp(magic, kMagic, 8) != 0)
    throw std::runtime_error("load_operator: bad magic/version in " + path);
  int32_t d, na;
  int64_t n;
  double R, alpha, c_norm;
  in.read(reinterpret_cast<char*>(&d), 4);
  in.read(reinterpret_cast<char*>(&na), 4);
  in.read(reinterpret_cast<char*>(&n), 8);
  in.read(reinterpret_cast<char*>(&R), 8);
  in.read(reinterpret_cast<char*>(&alpha), 8);
  in.read(reinterpret_cast<char*>(&c_norm), 8);
  DiscreteOperator op;
  op.grid = build_grid({int(d), R, int(na)});
  op.alpha = alpha;
  op.c_norm = c_norm;
  op.Q.resize(n, n);
  op.kill.resize(n);
  op.mu.resize(n);
  op.W.resize(n);
  in.read(reinterpret_cast<char*>(op.Q.data()), n * n * 8);
  in.read(reinterpret_cast<char*>(op.kill.data()), n * 8);
  in.read(reinterpret_cast<char*>(op.mu.data()), n * 8);
  in.read(reinterpret_cast<char*>(op.W.data()), n * 8);
  if (!in) throw std::runtime_error("load_operator: truncated file " + path);
  return op;
}

}  // namespace fracheat
