#include "poisym/numeric.hpp"

#include <cmath>

#include "poisym/errors.hpp"

namespace poisym {

double sinhc(double t) {
  const double t2 = t * t;
  if (std::abs(t) < 1e-3) return 1.0 + t2 / 6.0 * (1.0 + t2 / 20.0 * (1.0 + t2 / 42.0));
  return std::sinh(t) / t;
}

double asinhc(double t) {
  const double t2 = t * t;
  if (std::abs(t) < 1e-3) return 1.0 - t2 / 6.0 + 3.0 * t2 * t2 / 40.0 - 5.0 * t2 * t2 * t2 / 112.0;
  return std::asinh(t) / t;
}

double cosh_minus_sinhc_over_t(double t) {
  const double t2 = t * t;
  // cosh t - sinh t / t = t^2/3 + t^4/30 + t^6/840 + ...
  if (std::abs(t) < 1e-2) return t / 3.0 * (1.0 + t2 / 10.0 * (1.0 + t2 / 28.0));
  return (std::cosh(t) - std::sinh(t) / t) / t;
}

double loglog_slope(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw ContractViolation("loglog_slope: need at least two paired samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const auto n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0) || !(ys[i] > 0))
      throw NumericDomainError("loglog_slope: non-positive sample", static_cast<int>(i));
    const double lx = std::log(xs[i]), ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Eigen::VectorXd SampleGenerator::box(int dim, double lo, double hi) {
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = uniform(lo, hi);
  return v;
}

}  // namespace poisym
