#include "poisym/flow.hpp"

#include <cmath>
#include <string>

#include "poisym/errors.hpp"

namespace poisym {

namespace {

Point rk4(const VectorField& field, const Point& x, double h) {
  const Eigen::VectorXd k1 = field(x);
  const Eigen::VectorXd k2 = field(x + 0.5 * h * k1);
  const Eigen::VectorXd k3 = field(x + 0.5 * h * k2);
  const Eigen::VectorXd k4 = field(x + h * k3);
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

double scaled_error(const Point& fine, const Point& coarse) {
  double err = 0.0;
  for (Eigen::Index i = 0; i < fine.size(); ++i)
    err = std::max(err, std::abs(fine[i] - coarse[i]) / std::max(1.0, std::abs(fine[i])));
  return err / 15.0;
}

class Stepper {
 public:
  Stepper(const VectorField& field, const StepControl& step, const StepProjection& project, Trajectory& out)
      : field_(field), step_(step), project_(project), out_(out) {}

  // Advances state from t0 to t1, bisecting as needed.
  void advance(Point& state, double t0, double t1) {
    const double h = t1 - t0;
    const Point coarse = rk4(field_, state, h);
    const Point fine = rk4(field_, rk4(field_, state, 0.5 * h), 0.5 * h);
    if (!fine.allFinite() || !coarse.allFinite())
      throw DivergenceError("integration produced a non-finite state", out_.times.back());
    const double err = scaled_error(fine, coarse);
    if (err > step_.tol) {
      if (0.5 * h < kMinStep)
        throw StiffnessError("step size underflow below 1e-12 at t = " + std::to_string(t0), t0);
      const double mid = t0 + 0.5 * h;
      advance(state, t0, mid);
      advance(state, mid, t1);
      return;
    }
    state = fine;
    if (project_) {
      const ProjectionOutcome outcome = project_(state);
      out_.max_projection_deviation = std::max(out_.max_projection_deviation, outcome.deviation);
      if (outcome.corrected) out_.projection_times.push_back(t1);
    }
    out_.times.push_back(t1);
    out_.points.push_back(state);
    out_.step_errors.push_back(err);
  }

 private:
  const VectorField& field_;
  const StepControl& step_;
  const StepProjection& project_;
  Trajectory& out_;
};

}  // namespace

Trajectory integrate_ode(const VectorField& field, const Point& x0, double t_end, const StepControl& step,
                         const StepProjection& project) {
  if (!(t_end > 0.0)) throw ContractViolation("integrate: t_end must be positive");
  if (!x0.allFinite()) throw ContractViolation("integrate: initial state must be finite");
  if (!(step.h > 0.0) || !(step.tol > 0.0)) throw ContractViolation("integrate: h and tol must be positive");

  Trajectory traj;
  traj.times.push_back(0.0);
  traj.points.push_back(x0);

  const auto n = static_cast<long>(std::ceil(t_end / step.h - 1e-9));
  Point state = x0;
  Stepper stepper(field, step, project, traj);
  for (long k = 0; k < n; ++k) {
    const double t0 = t_end * static_cast<double>(k) / static_cast<double>(n);
    const double t1 = (k + 1 == n) ? t_end : t_end * static_cast<double>(k + 1) / static_cast<double>(n);
    stepper.advance(state, t0, t1);
  }
  return traj;
}

Trajectory integrate_flow(const BivectorSpec& biv, const ScalarField& H, const Point& x0, double t_end,
                          const StepControl& step, const StepProjection& project) {
  if (x0.size() != biv.dim()) throw ContractViolation("integrate_flow: initial point dimension mismatch");
  const VectorField field = [&](const Point& x) { return hamiltonian_vector_field(biv, H, x); };
  Trajectory traj = integrate_ode(field, x0, t_end, step, project);
  traj.hamiltonian_drift = conservation_drift(traj, H);
  traj.drift_bound = 10.0 * step.tol * std::abs(t_end);
  return traj;
}

double conservation_drift(const Trajectory& traj, const ScalarField& f) {
  if (traj.empty()) throw ContractViolation("conservation_drift: empty trajectory");
  const double f0 = f(traj.points.front());
  double drift = 0.0;
  for (const Point& x : traj.points) drift = std::max(drift, std::abs(f(x) - f0));
  return drift;
}

double affine_deviation(const Curve& curve) {
  if (curve.size() < 2) return 0.0;
  const Eigen::Index dim = curve.points.front().size();
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
  for (const Point& p : curve.points) mean += p;
  mean /= static_cast<double>(curve.size());
  Eigen::MatrixXd centered(curve.size(), dim);
  for (std::size_t k = 0; k < curve.size(); ++k) centered.row(static_cast<Eigen::Index>(k)) = (curve.points[k] - mean).transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  const Eigen::VectorXd direction = svd.matrixV().col(0);
  double worst = 0.0;
  for (Eigen::Index k = 0; k < centered.rows(); ++k) {
    const Eigen::VectorXd r = centered.row(k).transpose();
    worst = std::max(worst, (r - r.dot(direction) * direction).norm());
  }
  return worst;
}

}  // namespace poisym
