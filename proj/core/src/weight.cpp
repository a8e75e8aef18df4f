#include "fracheat/weight.hpp"

#include <cmath>
#include <stdexcept>

namespace fracheat {

namespace {

double stretched_value(const StretchedExpWeight& s, double r) {
  return s.c1 * std::pow(1.0 + r, s.beta) *
         std::exp(s.c3 * std::pow(1.0 + r, s.envelope_exponent()));
}

}  // namespace

double WeightSpec::eval_radius(double r) const {
  if (const auto* p = std::get_if<PowerWeight>(&w)) return std::pow(1.0 + r, p->beta);
  if (const auto* s = std::get_if<StretchedExpWeight>(&w)) return stretched_value(*s, r);
  throw std::invalid_argument("weight: table variant has no radial form");
}

double WeightSpec::eval_radius(double r, const Point& x, int d) const {
  if (const auto* t = std::get_if<TableWeight>(&w)) {
    const double tol = 1e-9;
    for (size_t i = 0; i < t->coords.size(); ++i) {
      if (dist(t->coords[i], x, t->d) <= tol) return t->values[i];
    }
    throw std::invalid_argument("weight: table variant evaluated off-grid");
  }
  (void)d;
  return eval_radius(r);
}

void WeightSpec::validate() const {
  if (const auto* p = std::get_if<PowerWeight>(&w)) {
    if (p->beta < 0) throw std::invalid_argument("weight: power beta must be >= 0");
  } else if (const auto* s = std::get_if<StretchedExpWeight>(&w)) {
    if (s->delta <= 1) throw std::invalid_argument("weight: stretched-exp delta must be > 1");
    if (s->c1 < 1 || s->c3 <= 0)
      throw std::invalid_argument("weight: stretched-exp needs c1 >= 1, c3 > 0 (W >= 1)");
    if (s->beta <= s->alpha)
      throw std::invalid_argument("weight: stretched-exp needs beta > alpha");
  } else if (const auto* t = std::get_if<TableWeight>(&w)) {
    if (t->coords.size() != t->values.size() || t->values.empty())
      throw std::invalid_argument("weight: table size mismatch");
    for (double v : t->values)
      if (!(v >= 1.0) || !std::isfinite(v))
        throw std::invalid_argument("weight: table values must satisfy W >= 1");
  }
}

double weight_eval(const WeightSpec& w, const Point& x, int d) {
  for (int k = 0; k < d; ++k)
    if (!std::isfinite(x[k])) throw std::invalid_argument("weight: non-finite point");
  return w(x, d);
}

Eigen::VectorXd weight_on_grid(const WeightSpec& w, const Grid& grid) {
  const long n = grid.size();
  Eigen::VectorXd out(n);
  for (long i = 0; i < n; ++i) out(i) = w(grid.coords[i], grid.spec.d);
  return out;
}

}  // namespace fracheat
