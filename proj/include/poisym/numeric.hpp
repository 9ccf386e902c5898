#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

#include <Eigen/Dense>

namespace poisym {

/// sinh(t)/t, continuous at t = 0.
double sinhc(double t);

/// asinh(t)/t, continuous at t = 0.
double asinhc(double t);

/// (cosh(t) - sinh(t)/t)/t, continuous at t = 0 (value t/3 + O(t^3)).
double cosh_minus_sinhc_over_t(double t);

/// Central-difference step for coordinate value `xi`: scale * max(1, |xi|).
inline double fd_step(double xi, double scale) { return scale * std::max(1.0, std::abs(xi)); }

inline constexpr double kGradientStepScale = 1e-6;
inline constexpr double kJacobiStepScale = 1e-4;

/// Least-squares slope of log(ys) against log(xs). Requires positive data.
double loglog_slope(std::span<const double> xs, std::span<const double> ys);

/// Seeded generator for certificate sample points.
///
/// Uses std::mt19937_64, whose output sequence is fixed by the C++ standard,
/// and converts to doubles by taking the top 53 bits, so the stream is
/// identical on every conforming platform (std distributions are not).
class SampleGenerator {
 public:
  static constexpr std::string_view kName = "mt19937_64/top53-uniform";
  static constexpr int kVersion = 1;

  explicit SampleGenerator(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  Eigen::VectorXd box(int dim, double lo = -1.0, double hi = 1.0);

 private:
  std::mt19937_64 engine_;
};

}  // namespace poisym
