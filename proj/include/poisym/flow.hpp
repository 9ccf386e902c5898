#pragma once

#include <functional>
#include <vector>

#include "poisym/bivector.hpp"

namespace poisym {

struct StepControl {
  double h = 1e-3;
  double tol = 1e-8;
};

inline constexpr double kMinStep = 1e-12;

/// Optional post-step correction (e.g. pulling a state back onto a constraint
/// surface). Returns the constraint deviation seen before any correction.
struct ProjectionOutcome {
  double deviation = 0.0;
  bool corrected = false;
};
using StepProjection = std::function<ProjectionOutcome(Point&)>;

struct Trajectory {
  std::vector<double> times;
  std::vector<Point> points;
  std::vector<double> step_errors;  // Richardson estimate per accepted step; step_errors[k] belongs to points[k+1]

  std::vector<double> projection_times;  // times at which the post-step projection fired
  double max_projection_deviation = 0.0;

  double hamiltonian_drift = 0.0;
  double drift_bound = 0.0;
  bool drift_within_bound() const { return hamiltonian_drift <= drift_bound; }

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }
};

/// Generic ODE right-hand side x' = F(x).
using VectorField = std::function<Eigen::VectorXd(const Point&)>;

/// Fixed-step classical RK4. Each step of length h is also taken as two steps of h/2;
/// the difference (divided by 15) is the per-step error estimate. Steps whose estimate
/// exceeds `step.tol` are bisected until it does not; the two-half-step value is kept.
/// The nominal step is shrunk slightly so that t_end is hit exactly.
Trajectory integrate_ode(const VectorField& field, const Point& x0, double t_end, const StepControl& step,
                         const StepProjection& project = {});

/// Integrates x' = {H, x} and records the drift of H against the bound 10 * tol * t_end.
Trajectory integrate_flow(const BivectorSpec& biv, const ScalarField& H, const Point& x0, double t_end,
                          const StepControl& step = {}, const StepProjection& project = {});

/// max_k |f(x_k) - f(x_0)|
double conservation_drift(const Trajectory& traj, const ScalarField& f);

/// Sampled curve in a chart, e.g. a projection of a trajectory.
struct Curve {
  std::vector<double> params;
  std::vector<Point> points;
  std::size_t size() const { return points.size(); }
};

/// Largest distance of a curve's points from the least-squares line through them.
double affine_deviation(const Curve& curve);

}  // namespace poisym
