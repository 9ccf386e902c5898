#include "poisym/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "poisym/bivector.hpp"
#include "poisym/errors.hpp"
#include "poisym/flow.hpp"
#include "poisym/groupoid.hpp"
#include "poisym/numeric.hpp"
#include "poisym/sl2c.hpp"
#include "poisym/spacetime.hpp"
#include "poisym/su2_free_motion.hpp"

namespace poisym {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Certificate thresholds.
constexpr double kJacobiThreshold = 1e-6;
constexpr double kPushforwardThreshold = 1e-5;
constexpr double kCurveThreshold = 1e-6;
constexpr double kCollinearThreshold = 1e-9;
constexpr double kDetThreshold = 1e-8;
constexpr double kMomentumDriftThreshold = 1e-6;
constexpr double kBodyVelocityThreshold = 1e-5;
constexpr double kClosedFormThreshold = 1e-7;
constexpr double kPipelineThreshold = 1e-6;
constexpr double kDualPathThreshold = 1e-6;
constexpr double kExactThreshold = 1e-12;
constexpr double kOddnessThreshold = 1e-12;

enum class ParamKind { real, positive, nonnegative, integer };

struct ParamSpec {
  const char* name;
  double fallback;
  ParamKind kind;
  int minimum = 0;  // integers only
};

const std::vector<ParamSpec>& param_specs(Model model) {
  static const std::vector<ParamSpec> minkowski = {
      {"epsilon", 0.5, ParamKind::real},        {"mass", 1.0, ParamKind::positive},
      {"alpha", 0.3, ParamKind::real},          {"beta", 2.0, ParamKind::real},
      {"p_min", -6.0, ParamKind::real},         {"p_max", 6.0, ParamKind::real},
      {"p_samples", 121, ParamKind::integer, 2}, {"q_plus", 0.7, ParamKind::real},
      {"q_minus", -0.5, ParamKind::real},       {"p_plus", 0.9, ParamKind::real},
      {"t_end", 2.0, ParamKind::positive},      {"step", 1e-3, ParamKind::positive},
      {"tol", 1e-8, ParamKind::positive},       {"certificate_points", 100, ParamKind::integer, 1},
  };
  static const std::vector<ParamSpec> kappa = {
      {"epsilon", 0.5, ParamKind::real},          {"mass", 1.0, ParamKind::positive},
      {"spatial_dim", 3, ParamKind::integer, 1},  {"momentum", 1.0, ParamKind::nonnegative},
      {"p_min", 0.0, ParamKind::nonnegative},     {"p_max", 3.0, ParamKind::nonnegative},
      {"p_samples", 31, ParamKind::integer, 2},   {"profile_samples", 64, ParamKind::integer, 32},
      {"duration", 10.0, ParamKind::positive},    {"t_end", 2.0, ParamKind::positive},
      {"step", 1e-3, ParamKind::positive},        {"tol", 1e-8, ParamKind::positive},
      {"certificate_points", 100, ParamKind::integer, 1},
  };
  static const std::vector<ParamSpec> su2 = {
      {"epsilon", 0.2, ParamKind::real},       {"t_end", 1.0, ParamKind::positive},
      {"step", 1e-3, ParamKind::positive},     {"tol", 1e-8, ParamKind::positive},
      {"momentum_x", 0.3, ParamKind::real},    {"momentum_y", -0.2, ParamKind::real},
      {"momentum_z", 0.5, ParamKind::real},    {"rotation_x", 0.1, ParamKind::real},
      {"rotation_y", 0.2, ParamKind::real},    {"rotation_z", -0.3, ParamKind::real},
      {"certificate_points", 100, ParamKind::integer, 1},
  };
  switch (model) {
    case Model::minkowski2d:
      return minkowski;
    case Model::kappa:
      return kappa;
    case Model::su2:
      return su2;
  }
  return su2;
}

const ParamSpec* find_param(Model model, const std::string& name) {
  for (const ParamSpec& s : param_specs(model))
    if (name == s.name) return &s;
  return nullptr;
}

void validate_param(const ParamSpec& spec, double v) {
  const std::string path = std::string("params.") + spec.name;
  if (!std::isfinite(v)) throw UsageError(path, "must be a finite number");
  switch (spec.kind) {
    case ParamKind::real:
      break;
    case ParamKind::positive:
      if (!(v > 0.0)) throw UsageError(path, "must be positive");
      break;
    case ParamKind::nonnegative:
      if (v < 0.0) throw UsageError(path, "must be non-negative");
      break;
    case ParamKind::integer:
      if (v != std::floor(v)) throw UsageError(path, "must be an integer");
      if (v < spec.minimum) throw UsageError(path, "must be at least " + std::to_string(spec.minimum));
      break;
  }
}

std::vector<OutputKind> allowed_outputs(Model model) {
  switch (model) {
    case Model::minkowski2d:
      return {OutputKind::trajectory, OutputKind::projection, OutputKind::scattering, OutputKind::certificate};
    case Model::kappa:
      return {OutputKind::trajectory, OutputKind::profile, OutputKind::certificate};
    case Model::su2:
      return {OutputKind::trajectory, OutputKind::projection, OutputKind::certificate};
  }
  return {};
}

std::optional<OutputKind> parse_output(const std::string& s) {
  for (OutputKind k : {OutputKind::trajectory, OutputKind::projection, OutputKind::profile, OutputKind::certificate,
                       OutputKind::scattering})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

FreeHamiltonian parse_hamiltonian(const std::string& s) {
  if (s == "H") return FreeHamiltonian::standard;
  if (s == "H'") return FreeHamiltonian::symplectomorphic;
  if (s == "H''") return FreeHamiltonian::normalized;
  throw UsageError("params.hamiltonian", "expected one of \"H\", \"H'\", \"H''\"");
}

// ---------------------------------------------------------------------------
// Artifact helpers
// ---------------------------------------------------------------------------

Check below(const std::string& name, double value, double threshold) {
  return {name, value, threshold, value < threshold};
}

Check at_most(const std::string& name, double value, double threshold) {
  return {name, value, threshold, value <= threshold};
}

std::vector<double> linear_grid(double lo, double hi, int n) {
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return g;
}

int int_param(const ScenarioConfig& c, const std::string& name) { return static_cast<int>(c.param(name)); }

StepControl step_control(const ScenarioConfig& c) { return {c.param("step"), c.param("tol")}; }

std::vector<Point> box_points(SampleGenerator& rng, int count, int dim) {
  std::vector<Point> pts;
  for (int i = 0; i < count; ++i) pts.push_back(rng.box(dim));
  return pts;
}

Check jacobi_check(const std::string& name, const BivectorSpec& biv, const std::vector<Point>& pts) {
  const JacobiCertificate cert = jacobi_certificate(biv, pts);
  return {name, cert.max_residual, kJacobiThreshold, cert.passes(kJacobiThreshold)};
}

double relative_gap(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

// Max over points of the gap between the pushforward of the canonical structure on
// T*M through a groupoid projection and (sign) times the base bivector.
double projection_pushforward_gap(const AbelianRSpec& r, const BivectorSpec& base, Side side,
                                  const std::vector<Point>& phase_points) {
  const int n = r.dim();
  const BivectorSpec canonical = canonical_bivector(n);
  const double sign = side == Side::left ? 1.0 : -1.0;
  const auto map = [&r, n, side](const Point& xp) -> Eigen::VectorXd {
    return groupoid_projection(r, xp.head(n), xp.tail(n), side);
  };
  double worst = 0.0;
  for (const Point& xp : phase_points) {
    const Eigen::MatrixXd pushed = pushforward_bracket(canonical, map, xp);
    worst = std::max(worst, relative_gap(pushed, sign * base.matrix(map(xp))));
  }
  return worst;
}

Table make_table(std::string name, std::vector<std::string> columns) {
  Table t;
  t.name = std::move(name);
  t.columns = std::move(columns);
  return t;
}

// ---------------------------------------------------------------------------
// minkowski2d
// ---------------------------------------------------------------------------

Artifact minkowski_trajectory(const ScenarioConfig& c) {
  const Minkowski2DSpec spec(c.param("epsilon"), c.param("mass"));
  const Minkowski2DSpec classical_spec(0.0, c.param("mass"));
  const ScatteringCurveSpec curve{c.param("alpha"), c.param("beta")};
  const std::vector<double> grid = linear_grid(c.param("p_min"), c.param("p_max"), int_param(c, "p_samples"));
  const Curve deformed = parametric_trajectory_2d(spec, curve, grid);
  const Curve classical = parametric_trajectory_2d(classical_spec, curve, grid);

  Artifact a;
  a.kind = OutputKind::trajectory;
  Table t = make_table("minkowski2d_trajectory",
                       {"p", "q_plus", "q_minus", "q0", "q1", "q_plus_classical", "q_minus_classical"});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point& q = deformed.points[i];
    const Point& q0 = classical.points[i];
    t.rows.push_back({grid[i], q[0], q[1], 0.5 * (q[0] + q[1]), 0.5 * (q[0] - q[1]), q0[0], q0[1]});
  }
  a.tables.push_back(std::move(t));
  const ScatteringData s = scattering_data(spec, curve);
  a.summary = {{"alpha", curve.alpha},
               {"beta", curve.beta},
               {"v_in", s.v_in},
               {"v_out", s.v_out},
               {"classical_limit_deviation", minkowski2d_limit_deviation(spec, curve, grid)}};
  return a;
}

Artifact minkowski_projection(const ScenarioConfig& c) {
  const Minkowski2DSpec spec(c.param("epsilon"), c.param("mass"));
  const AbelianRSpec r = minkowski2d_r(spec);
  const ScalarField H = minkowski2d_free_hamiltonian(spec);
  const Point x0 = minkowski2d_shell_point(spec, c.param("q_plus"), c.param("q_minus"), c.param("p_plus"));
  const Trajectory traj = integrate_flow(canonical_bivector(2), H, x0, c.param("t_end"), step_control(c));
  const Curve left = project_trajectory(r, traj, Side::left);
  const Curve right = project_trajectory(r, traj, Side::right);

  const CurveLocation start = minkowski2d_curve_location(spec, x0);
  const double m2 = spec.mass * spec.mass;
  double location_drift = 0.0;
  double curve_gap = 0.0;
  Artifact a;
  a.kind = OutputKind::projection;
  Table t = make_table("minkowski2d_projection", {"t", "q_plus", "q_minus", "p_plus", "p_minus", "left_plus",
                                                  "left_minus", "right_plus", "right_minus", "shell_residual"});
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const Point& x = traj.points[k];
    const auto P = deformed_momenta(spec, x);
    const CurveLocation loc = minkowski2d_curve_location(spec, x);
    location_drift = std::max(location_drift, std::abs(loc.curve.alpha - start.curve.alpha) +
                                                  std::abs(loc.curve.beta - start.curve.beta));
    const Curve expected = parametric_trajectory_2d(spec, start.curve, {loc.parameter});
    curve_gap = std::max(curve_gap, (expected.points[0] - x.head(2)).norm());
    t.rows.push_back({traj.times[k], x[0], x[1], x[2], x[3], left.points[k][0], left.points[k][1],
                      right.points[k][0], right.points[k][1], P[0] * P[1] - m2});
  }
  a.tables.push_back(std::move(t));

  a.checks.push_back(at_most("hamiltonian_drift", traj.hamiltonian_drift, traj.drift_bound));
  a.checks.push_back(below("curve_constant_drift", location_drift, kCurveThreshold));
  a.checks.push_back(below("parametric_curve_deviation", curve_gap, kCurveThreshold));
  a.summary = {{"alpha", start.curve.alpha},  {"beta", start.curve.beta},
               {"samples", traj.size()},      {"hamiltonian_drift", traj.hamiltonian_drift},
               {"drift_bound", traj.drift_bound}};
  if (spec.epsilon != 0.0) {
    const double expected_constant = -1.0 / (spec.epsilon * spec.epsilon * m2);
    for (const auto& [label, curve] : {std::pair<std::string, const Curve*>{"left", &left}, {"right", &right}}) {
      const HyperbolaFit fit = fit_hyperbola(*curve);
      a.summary[label + "_c_plus"] = fit.c_plus;
      a.summary[label + "_c_minus"] = fit.c_minus;
      a.summary[label + "_constant"] = fit.constant;
      a.checks.push_back(below(label + "_hyperbola_variation", fit.constant_variation, kCurveThreshold));
      a.checks.push_back(below(label + "_hyperbola_constant_error",
                               std::abs(fit.constant - expected_constant) / std::abs(expected_constant),
                               kCurveThreshold));
    }
  }
  return a;
}

Artifact minkowski_scattering(const ScenarioConfig& c) {
  const Minkowski2DSpec spec(c.param("epsilon"), c.param("mass"));
  std::vector<ScatteringCurveSpec> curves{{c.param("alpha"), c.param("beta")}};
  for (double alpha : {-1.0, -0.5, 0.0, 0.5, 1.0})
    for (double beta : {-2.0, -1.0, 0.0, 1.0, 2.0}) curves.push_back({alpha, beta});

  Artifact a;
  a.kind = OutputKind::scattering;
  Table t = make_table("minkowski2d_scattering", {"alpha", "beta", "v_in", "v_out", "v_in_numeric", "v_out_numeric",
                                                  "v_in_circular", "v_out_circular"});
  double mismatch = 0.0;
  double oddness = 0.0;
  for (const ScatteringCurveSpec& curve : curves) {
    const ScatteringData closed = scattering_data(spec, curve);
    const ScatteringData numeric = scattering_limits_numerical(spec, curve);
    const ScatteringData circular = scattering_data(spec, curve, ScatteringMap::circular);
    const ScatteringData mirrored = scattering_data(spec, {curve.alpha, -curve.beta});
    mismatch = std::max({mismatch, std::abs(closed.v_in - numeric.v_in), std::abs(closed.v_out - numeric.v_out)});
    oddness = std::max(oddness, std::abs((closed.v_out - closed.v_in) + (mirrored.v_out - mirrored.v_in)));
    t.rows.push_back({curve.alpha, curve.beta, closed.v_in, closed.v_out, numeric.v_in, numeric.v_out, circular.v_in,
                      circular.v_out});
  }
  a.tables.push_back(std::move(t));
  a.checks.push_back(below("numerical_limit_mismatch", mismatch, kCurveThreshold));
  a.checks.push_back(below("velocity_change_oddness", oddness, kOddnessThreshold));
  a.summary = {{"curves", curves.size()}};
  return a;
}

Artifact minkowski_certificate(const ScenarioConfig& c) {
  const Minkowski2DSpec spec(c.param("epsilon"), c.param("mass"));
  const AbelianRSpec r = minkowski2d_r(spec);
  SampleGenerator rng(c.seed);
  const int n = int_param(c, "certificate_points");
  const std::vector<Point> base_pts = box_points(rng, n, 2);
  const std::vector<Point> phase_pts = box_points(rng, n, 4);
  const BivectorSpec base = minkowski2d_bivector(spec);

  Artifact a;
  a.kind = OutputKind::certificate;
  a.checks.push_back(jacobi_check("jacobi_base", base, base_pts));
  a.checks.push_back(jacobi_check("jacobi_shifted", shifted_bivector(lifted_r_bivector(r)), phase_pts));
  a.checks.push_back(below("r_bivector_gap",
                           [&] {
                             double worst = 0.0;
                             const BivectorSpec rb = r_bivector(r);
                             for (const Point& x : base_pts) worst = std::max(worst, relative_gap(rb.matrix(x), base.matrix(x)));
                             return worst;
                           }(),
                           kExactThreshold));
  a.checks.push_back(
      below("left_projection_poisson", projection_pushforward_gap(r, base, Side::left, phase_pts), kPushforwardThreshold));
  a.checks.push_back(below("right_projection_anti_poisson",
                           projection_pushforward_gap(r, base, Side::right, phase_pts), kPushforwardThreshold));
  a.summary = {{"points", n}, {"jacobi_vacuous", jacobi_certificate(base, base_pts).vacuous}};
  return a;
}

// ---------------------------------------------------------------------------
// kappa
// ---------------------------------------------------------------------------

std::vector<std::string> prefixed(const std::string& prefix, int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

Artifact kappa_trajectory(const ScenarioConfig& c) {
  const KappaSpec spec(c.param("epsilon"), int_param(c, "spatial_dim"));
  const int n = spec.dim();
  const double mass = c.param("mass");
  const double pmag = c.param("momentum");
  const AbelianRSpec r = kappa_r(spec);

  // H = 1/2 g^{ij} p_i p_j with signature (+, -, ..., -); the shell is H = m^2 / 2.
  const ScalarField H(
      [n](const Point& xp) {
        double v = xp[n] * xp[n];
        for (int k = 1; k < n; ++k) v -= xp[n + k] * xp[n + k];
        return 0.5 * v;
      },
      [n](const Point& xp) {
        Eigen::VectorXd g = Eigen::VectorXd::Zero(2 * n);
        g[n] = xp[n];
        for (int k = 1; k < n; ++k) g[n + k] = -xp[n + k];
        return g;
      });
  Point x0 = Point::Zero(2 * n);
  for (int i = 0; i < n; ++i) x0[i] = 0.25 * i * (i % 2 == 0 ? 1.0 : -1.0);
  x0[n] = std::sqrt(pmag * pmag + mass * mass);
  x0[n + 1] = -pmag;
  const Trajectory traj = integrate_flow(canonical_bivector(n), H, x0, c.param("t_end"), step_control(c));
  const Curve base = base_projection(traj);
  const Curve left = project_trajectory(r, traj, Side::left);
  const Curve right = project_trajectory(r, traj, Side::right);

  std::vector<std::string> columns{"t"};
  for (const char* prefix : {"x", "left_x", "right_x"})
    for (const std::string& name : prefixed(prefix, n)) columns.push_back(name);
  Table t = make_table("kappa_trajectory", columns);
  for (std::size_t k = 0; k < traj.size(); ++k) {
    std::vector<double> row{traj.times[k]};
    for (const Curve* curve : {&base, &left, &right})
      for (int i = 0; i < n; ++i) row.push_back(curve->points[k][i]);
    t.rows.push_back(std::move(row));
  }

  const std::vector<double> grid = linear_grid(c.param("p_min"), c.param("p_max"), int_param(c, "p_samples"));
  Artifact a;
  a.kind = OutputKind::trajectory;
  a.tables.push_back(std::move(t));
  a.checks.push_back(at_most("hamiltonian_drift", traj.hamiltonian_drift, traj.drift_bound));
  a.checks.push_back(below("base_collinearity", affine_deviation(base), kCollinearThreshold));
  a.checks.push_back(below("left_collinearity", affine_deviation(left), kCollinearThreshold));
  a.checks.push_back(below("right_collinearity", affine_deviation(right), kCollinearThreshold));
  a.summary = {
      {"samples", traj.size()},
      {"classical_limit_deviation", kappa_limit_deviation(spec, mass, ProfileProjection::left, grid)},
      {"classical_deviation_ordinary", kappa_limit_deviation(spec, mass, ProfileProjection::ordinary, grid)},
      {"classical_deviation_right", kappa_limit_deviation(spec, mass, ProfileProjection::right, grid)},
  };
  return a;
}

Artifact kappa_profile(const ScenarioConfig& c) {
  const KappaSpec spec(c.param("epsilon"), int_param(c, "spatial_dim"));
  const double mass = c.param("mass");
  const std::vector<double> grid = linear_grid(c.param("p_min"), c.param("p_max"), int_param(c, "p_samples"));
  const ProfileOptions options{int_param(c, "profile_samples"), c.param("duration")};
  const auto ordinary = velocity_momentum_profile(spec, mass, ProfileProjection::ordinary, grid, options);
  const auto left = velocity_momentum_profile(spec, mass, ProfileProjection::left, grid, options);
  const auto right = velocity_momentum_profile(spec, mass, ProfileProjection::right, grid, options);

  Artifact a;
  a.kind = OutputKind::profile;
  Table t = make_table("kappa_profile", {"momentum", "v_ordinary", "v_left", "v_right"});
  for (std::size_t i = 0; i < ordinary.size(); ++i)
    t.rows.push_back({ordinary[i].momentum, ordinary[i].velocity, left[i].velocity, right[i].velocity});
  a.tables.push_back(std::move(t));
  a.summary = {{"monotonic_ordinary", is_monotonic(ordinary)},
               {"monotonic_left", is_monotonic(left)},
               {"monotonic_right", is_monotonic(right)}};
  return a;
}

Artifact kappa_certificate(const ScenarioConfig& c) {
  const KappaSpec spec(c.param("epsilon"), int_param(c, "spatial_dim"));
  const AbelianRSpec r = kappa_r(spec);
  const BivectorSpec base = kappa_bivector(spec);
  SampleGenerator rng(c.seed);
  const int count = int_param(c, "certificate_points");
  const std::vector<Point> base_pts = box_points(rng, count, spec.dim());
  const std::vector<Point> phase_pts = box_points(rng, count, 2 * spec.dim());

  double r_gap = 0.0;
  const BivectorSpec rb = r_bivector(r);
  for (const Point& x : base_pts) r_gap = std::max(r_gap, relative_gap(rb.matrix(x), base.matrix(x)));

  Artifact a;
  a.kind = OutputKind::certificate;
  a.checks.push_back(jacobi_check("jacobi_base", base, base_pts));
  a.checks.push_back(below("r_bivector_gap", r_gap, kExactThreshold));
  a.checks.push_back(
      below("left_projection_poisson", projection_pushforward_gap(r, base, Side::left, phase_pts), kPushforwardThreshold));
  a.checks.push_back(below("right_projection_anti_poisson",
                           projection_pushforward_gap(r, base, Side::right, phase_pts), kPushforwardThreshold));
  a.summary = {{"points", count}};
  return a;
}

// ---------------------------------------------------------------------------
// su2
// ---------------------------------------------------------------------------

struct SU2Run {
  double epsilon = 0.0;
  FreeHamiltonian kind = FreeHamiltonian::standard;
  LinearMomentum momentum;
  SU2Element u0 = SU2Element::identity();
  SB2Element B0 = SB2Element::identity();
  Mat2 omega = Mat2::Zero();
  std::vector<double> times;
  std::vector<Mat2> states;
  std::size_t renormalizations = 0;
  double det_drift = 0.0;  // largest |det A - 1| seen between renormalizations
  double hamiltonian_drift = 0.0;
  double drift_bound = 0.0;
};

SU2Run su2_run(const ScenarioConfig& c) {
  SU2Run run;
  run.epsilon = c.param("epsilon");
  run.kind = parse_hamiltonian(c.hamiltonian);
  run.momentum = {c.param("momentum_x"), c.param("momentum_y"), c.param("momentum_z")};
  run.u0 = SU2Element::from_rotation(c.param("rotation_x"), c.param("rotation_y"), c.param("rotation_z"));
  const double t_end = c.param("t_end");
  if (run.epsilon == 0.0) {
    // Undeformed baseline: B = I and constant body velocity from the linear momentum.
    if (run.kind == FreeHamiltonian::standard)
      throw UsageError("params.hamiltonian", "\"H\" generates no motion at epsilon = 0; use \"H'\" or \"H''\"");
    run.omega = body_velocity_from_linear(run.momentum, 0.0, run.kind);
    const auto steps = static_cast<long>(std::ceil(t_end / c.param("step") - 1e-9));
    for (long k = 0; k <= steps; ++k) {
      const double t = t_end * static_cast<double>(k) / static_cast<double>(steps);
      run.times.push_back(t);
      run.states.push_back(run.u0.matrix() * expm2(t * run.omega));
    }
    return run;
  }
  run.B0 = sb2_from_momentum(momentum_isomorphism(run.momentum, run.epsilon), run.epsilon);
  run.omega = body_velocity(run.B0, run.epsilon, run.kind);
  const SL2CElement A0(run.u0.matrix() * run.B0.matrix());
  FreeMotionOptions options;
  options.step = step_control(c);
  options.kind = run.kind;
  const Trajectory traj = integrate_free_motion(A0, run.epsilon, options, t_end);
  run.times = traj.times;
  for (const Point& p : traj.points) run.states.push_back(matrix_from_real(p));
  run.renormalizations = traj.projection_times.size();
  run.det_drift = traj.max_projection_deviation;
  run.hamiltonian_drift = traj.hamiltonian_drift;
  run.drift_bound = traj.drift_bound;
  return run;
}

Mat2 su2_closed_form(const SU2Run& run, double t) {
  return run.u0.matrix() * expm2(t * run.omega) * run.B0.matrix();
}

Artifact su2_trajectory(const ScenarioConfig& c, const SU2Run& run) {
  Artifact a;
  a.kind = OutputKind::trajectory;
  Table t = make_table("su2_trajectory", {"t", "re_a", "im_a", "re_b", "im_b", "re_c", "im_c", "re_d", "im_d", "rho",
                                          "re_n", "im_n", "H", "det_residual"});
  const double eps = run.epsilon;
  const double h = 0.5 * run.momentum.radius() * run.momentum.radius();
  double det_max = 0.0;
  double momentum_drift = 0.0;
  double closed_t1 = 0.0;
  double closed_max = 0.0;
  double pipeline = 0.0;
  for (std::size_t k = 0; k < run.times.size(); ++k) {
    const Mat2& A = run.states[k];
    const double tk = run.times[k];
    const IwasawaFactors f = iwasawa_unchecked(A);
    const double det_res = std::abs(A.determinant() - 1.0);
    const double H = free_hamiltonian(A);
    det_max = std::max(det_max, det_res);
    momentum_drift = std::max(momentum_drift, std::abs(f.B.rho() - run.B0.rho()) + std::abs(f.B.n() - run.B0.n()));
    const double gap = (A - su2_closed_form(run, tk)).norm();
    closed_max = std::max(closed_max, gap);
    if (tk <= 1.0 + 1e-12) closed_t1 = std::max(closed_t1, gap);
    // H = cosh(2 eps sqrt(2 h)) with h read back from the momentum factor.
    double h_now = h;
    if (eps != 0.0) {
      const LinearMomentum lin = momentum_isomorphism_inverse(momentum_from_sb2(f.B, eps), eps);
      h_now = 0.5 * lin.radius() * lin.radius();
    }
    pipeline = std::max(pipeline, std::abs(H - std::cosh(2.0 * eps * std::sqrt(2.0 * h_now))));
    t.rows.push_back({tk, A(0, 0).real(), A(0, 0).imag(), A(0, 1).real(), A(0, 1).imag(), A(1, 0).real(),
                      A(1, 0).imag(), A(1, 1).real(), A(1, 1).imag(), f.B.rho(), f.B.n().real(), f.B.n().imag(), H,
                      det_res});
  }
  a.tables.push_back(std::move(t));
  a.checks.push_back(below("det_drift_between_renormalizations", run.det_drift, kDetThreshold));
  a.checks.push_back(below("momentum_drift", momentum_drift, kMomentumDriftThreshold));
  a.checks.push_back(below("closed_form_deviation_t1", closed_t1, kClosedFormThreshold));
  a.checks.push_back(at_most("hamiltonian_drift", run.hamiltonian_drift, run.drift_bound));
  a.checks.push_back(below("hamiltonian_relation", pipeline, kPipelineThreshold));

  const HamiltonianSet rel = hamiltonian_relations(RelationInput::h, h, eps);
  a.summary = {{"samples", run.times.size()},
               {"renormalizations", run.renormalizations},
               {"det_residual_max", det_max},
               {"momentum_drift_max", momentum_drift},
               {"closed_form_deviation_max", closed_max},
               {"h", h},
               {"H2", rel.H2},
               {"classical_limit_deviation", std::abs(rel.H2 - h)}};
  (void)c;
  return a;
}

Artifact su2_projection(const SU2Run& run) {
  Artifact a;
  a.kind = OutputKind::projection;
  Table t = make_table("su2_projection", {"t", "re_alpha", "im_alpha", "re_gamma", "im_gamma", "re_alpha_closed",
                                          "im_alpha_closed", "re_gamma_closed", "im_gamma_closed",
                                          "body_velocity_error"});
  std::vector<Mat2> u;
  for (const Mat2& A : run.states) u.push_back(iwasawa_unchecked(A).u.matrix());
  double body_gap = 0.0;
  double config_gap = 0.0;
  const std::size_t n = u.size();
  for (std::size_t k = 0; k < n; ++k) {
    double err = std::numeric_limits<double>::quiet_NaN();
    if (k > 0 && k + 1 < n) {
      const Mat2 du = (u[k + 1] - u[k - 1]) / (run.times[k + 1] - run.times[k - 1]);
      err = (u[k].adjoint() * du - run.omega).cwiseAbs().maxCoeff();
      body_gap = std::max(body_gap, err);
    }
    const Mat2 closed = run.u0.matrix() * expm2(run.times[k] * run.omega);
    config_gap = std::max(config_gap, (u[k] - closed).norm());
    t.rows.push_back({run.times[k], u[k](0, 0).real(), u[k](0, 0).imag(), u[k](1, 0).real(), u[k](1, 0).imag(),
                      closed(0, 0).real(), closed(0, 0).imag(), closed(1, 0).real(), closed(1, 0).imag(), err});
  }
  a.tables.push_back(std::move(t));
  a.checks.push_back(below("body_velocity_mismatch", body_gap, kBodyVelocityThreshold));
  a.checks.push_back(below("configuration_deviation", config_gap, kClosedFormThreshold));
  a.summary = {{"omega_norm", run.omega.norm()}};
  return a;
}

SL2CElement random_unimodular(SampleGenerator& rng) {
  const Eigen::VectorXd v = rng.box(3);
  const SU2Element u = SU2Element::from_rotation(v[0], v[1], v[2]);
  const double rho = std::exp(rng.uniform(-1.0, 1.0));
  const cplx n(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
  return SL2CElement(u.matrix() * SB2Element(rho, n).matrix());
}

Artifact su2_certificate(const ScenarioConfig& c) {
  const double eps = c.param("epsilon");
  const FreeHamiltonian kind = parse_hamiltonian(c.hamiltonian);
  SampleGenerator rng(c.seed);
  const int count = int_param(c, "certificate_points");

  Artifact a;
  a.kind = OutputKind::certificate;
  a.checks.push_back(jacobi_check("jacobi_sl2c", sl2c_bivector(eps), box_points(rng, count, 8)));
  a.checks.push_back(jacobi_check("jacobi_momentum", momentum_bivector(eps), box_points(rng, count, 3)));
  a.checks.push_back(jacobi_check("jacobi_linear", linear_bivector(), box_points(rng, count, 3)));

  // Dual path: closed-form right-hand side against the table's hamiltonian vector field.
  if (eps != 0.0 || kind == FreeHamiltonian::standard) {
    const BivectorSpec biv = sl2c_bivector(eps);
    const ScalarField H = free_hamiltonian_field(kind, eps);
    double dual = 0.0;
    for (int i = 0; i < count; ++i) {
      const SL2CElement A = random_unimodular(rng);
      const Eigen::VectorXd field = hamiltonian_vector_field(biv, H, A.to_real());
      const Eigen::VectorXd rhs = real_from_matrix(flow_rhs(A.matrix(), eps, kind));
      dual = std::max(dual, (field - rhs).cwiseAbs().maxCoeff());
    }
    a.checks.push_back(below("dual_path_mismatch", dual, kDualPathThreshold));
  }

  double equilibrium = 0.0;
  for (int i = 0; i < count; ++i) {
    const Eigen::VectorXd v = rng.box(3);
    const Mat2 u = SU2Element::from_rotation(v[0], v[1], v[2]).matrix();
    equilibrium = std::max(equilibrium, flow_rhs(u, eps, FreeHamiltonian::standard).norm());
  }
  a.checks.push_back(below("equilibrium_rhs", equilibrium, kExactThreshold));

  if (eps != 0.0) {
    const BivectorSpec linear = linear_bivector();
    const BivectorSpec momentum = momentum_bivector(eps);
    const auto iso = [eps](const Point& x) -> Eigen::VectorXd {
      const MomentumPoint m = momentum_isomorphism({x[0], x[1], x[2]}, eps);
      return Eigen::Vector3d(m.zeta, m.w.real(), m.w.imag());
    };
    double push = 0.0;
    double casimir = 0.0;
    int accepted = 0;
    while (accepted < count) {
      const Point x = rng.box(3);
      if (x[0] * x[0] + x[1] * x[1] < 1e-2) continue;  // stay off the axis x = y = 0
      ++accepted;
      push = std::max(push, relative_gap(pushforward_bracket(linear, iso, x), momentum.matrix(iso(x))));
      const LinearMomentum lin{x[0], x[1], x[2]};
      const double R = std::sqrt(casimir_R2(momentum_isomorphism(lin, eps), eps));
      casimir = std::max(casimir, std::abs(eps * R - std::sinh(eps * lin.radius())) / std::max(1.0, eps * R));
    }
    a.checks.push_back(below("isomorphism_pushforward", push, kPushforwardThreshold));
    a.checks.push_back(below("casimir_relation", casimir, kExactThreshold));

    double roundtrip = 0.0;
    for (int i = 0; i < count; ++i) {
      const double h = rng.uniform(0.0, 2.0);
      const HamiltonianSet ref = hamiltonian_relations(RelationInput::h, h, eps);
      for (const auto& [input, value] : {std::pair{RelationInput::H, ref.H}, std::pair{RelationInput::R2, ref.R2},
                                         std::pair{RelationInput::H2, ref.H2}}) {
        const HamiltonianSet back = hamiltonian_relations(input, value, eps);
        roundtrip = std::max({roundtrip, std::abs(back.h - ref.h) / std::max(1.0, ref.h),
                              std::abs(back.H - ref.H) / std::max(1.0, ref.H),
                              std::abs(back.R2 - ref.R2) / std::max(1.0, ref.R2)});
      }
    }
    a.checks.push_back(below("relation_roundtrip", roundtrip, kExactThreshold));
  }
  a.summary = {{"points", count}};
  return a;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

json number_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json check_json(const Check& ch) {
  return {{"name", ch.name}, {"value", number_json(ch.value)}, {"threshold", ch.threshold}, {"pass", ch.pass}};
}

std::string table_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_number(row[i]);
    out += '\n';
  }
  return out;
}

std::string table_json(const Table& t) {
  json rows = json::array();
  for (const auto& row : t.rows) {
    json r = json::array();
    for (double v : row) r.push_back(number_json(v));
    rows.push_back(std::move(r));
  }
  return json{{"name", t.name}, {"columns", t.columns}, {"rows", std::move(rows)}}.dump(2) + "\n";
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError("out", "cannot write " + path.string());
  out << content;
  if (!out) throw UsageError("out", "failed writing " + path.string());
}

// Prepares out_dir so that after the run it holds exactly the files listed in the new
// manifest: files recorded by a previous manifest are removed, anything else is refused.
void prepare_out_dir(const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) throw UsageError("out", "cannot create directory " + out_dir.string());
  std::set<std::string> owned;
  const fs::path manifest = out_dir / "manifest.json";
  if (fs::exists(manifest)) {
    std::ifstream in(manifest);
    json old = json::parse(in, nullptr, false);
    if (!old.is_discarded() && old.contains("files") && old["files"].is_array())
      for (const auto& f : old["files"])
        if (f.is_string()) owned.insert(f.get<std::string>());
    owned.insert("manifest.json");
  }
  for (const auto& entry : fs::directory_iterator(out_dir)) {
    const std::string name = entry.path().filename().string();
    if (!owned.count(name))
      throw UsageError("out", "directory contains a file not produced by a previous run: " + name);
  }
  for (const std::string& name : owned) fs::remove(out_dir / name, ec);
}

const char* extension(Format f) { return f == Format::csv ? ".csv" : ".json"; }

json rng_json(std::uint64_t seed) {
  return {{"name", std::string(SampleGenerator::kName)}, {"version", SampleGenerator::kVersion}, {"seed", seed}};
}

// Scalar summaries of one scenario, keyed "<output>.<field>".
std::map<std::string, double> scalar_summary(const std::vector<Artifact>& artifacts) {
  std::map<std::string, double> out;
  for (const Artifact& a : artifacts) {
    const std::string prefix = to_string(a.kind) + ".";
    for (const auto& [key, value] : a.summary.items()) {
      if (value.is_boolean())
        out[prefix + key] = value.get<bool>() ? 1.0 : 0.0;
      else if (value.is_number())
        out[prefix + key] = value.get<double>();
    }
    for (const Check& ch : a.checks) out[prefix + ch.name] = ch.value;
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Public API
// ---------------------------------------------------------------------------

std::string to_string(Model m) {
  switch (m) {
    case Model::minkowski2d:
      return "minkowski2d";
    case Model::kappa:
      return "kappa";
    case Model::su2:
      return "su2";
  }
  return "";
}

std::string to_string(OutputKind k) {
  switch (k) {
    case OutputKind::trajectory:
      return "trajectory";
    case OutputKind::projection:
      return "projection";
    case OutputKind::profile:
      return "profile";
    case OutputKind::certificate:
      return "certificate";
    case OutputKind::scattering:
      return "scattering";
  }
  return "";
}

Model parse_model(const std::string& s) {
  for (Model m : {Model::minkowski2d, Model::kappa, Model::su2})
    if (to_string(m) == s) return m;
  throw UsageError("model", "unknown model \"" + s + "\" (expected minkowski2d, kappa or su2)");
}

Format parse_format(const std::string& s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw UsageError("format", "expected csv or json");
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool Artifact::passes() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

ScenarioConfig ScenarioConfig::from_json(const json& j) {
  if (!j.is_object()) throw UsageError("", "config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key != "model" && key != "params" && key != "outputs" && key != "seed" && key != "description")
      throw UsageError(key, "unknown key");
  }
  ScenarioConfig c;
  if (!j.contains("model") || !j["model"].is_string()) throw UsageError("model", "required string");
  c.model = parse_model(j["model"].get<std::string>());

  if (j.contains("description") && !j["description"].is_string())
    throw UsageError("description", "must be a string");

  if (j.contains("seed")) {
    const json& s = j["seed"];
    if (!s.is_number_integer() || (s.is_number_integer() && !s.is_number_unsigned() && s.get<std::int64_t>() < 0))
      throw UsageError("seed", "must be a non-negative integer");
    c.seed = s.get<std::uint64_t>();
  }

  for (const ParamSpec& spec : param_specs(c.model)) c.params[spec.name] = spec.fallback;
  if (j.contains("params")) {
    const json& p = j["params"];
    if (!p.is_object()) throw UsageError("params", "must be an object");
    for (const auto& [key, value] : p.items()) {
      const std::string path = "params." + key;
      if (key == "hamiltonian" && c.model == Model::su2) {
        if (!value.is_string()) throw UsageError(path, "must be a string");
        c.hamiltonian = value.get<std::string>();
        parse_hamiltonian(c.hamiltonian);
        continue;
      }
      const ParamSpec* spec = find_param(c.model, key);
      if (!spec) throw UsageError(path, "unknown parameter for model " + to_string(c.model));
      if (!value.is_number()) throw UsageError(path, "must be a number");
      const double v = value.get<double>();
      validate_param(*spec, v);
      c.params[key] = v;
    }
  }

  if (j.contains("outputs")) {
    const json& o = j["outputs"];
    if (!o.is_array()) throw UsageError("outputs", "must be an array");
    const std::vector<OutputKind> allowed = allowed_outputs(c.model);
    for (std::size_t i = 0; i < o.size(); ++i) {
      const std::string path = "outputs[" + std::to_string(i) + "]";
      if (!o[i].is_string()) throw UsageError(path, "must be a string");
      const auto kind = parse_output(o[i].get<std::string>());
      if (!kind) throw UsageError(path, "unknown output \"" + o[i].get<std::string>() + "\"");
      if (std::find(allowed.begin(), allowed.end(), *kind) == allowed.end())
        throw UsageError(path, "output \"" + to_string(*kind) + "\" is not available for model " + to_string(c.model));
      if (std::find(c.outputs.begin(), c.outputs.end(), *kind) != c.outputs.end())
        throw UsageError(path, "duplicate output \"" + to_string(*kind) + "\"");
      c.outputs.push_back(*kind);
    }
  }
  return c;
}

ScenarioConfig ScenarioConfig::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("config", "cannot open " + path.string());
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw UsageError("config", "not valid JSON: " + path.string());
  return from_json(j);
}

json ScenarioConfig::to_json() const {
  json params_json = json::object();
  for (const auto& [k, v] : params) params_json[k] = v;
  if (model == Model::su2) params_json["hamiltonian"] = hamiltonian;
  json outputs_json = json::array();
  for (OutputKind k : outputs) outputs_json.push_back(to_string(k));
  return {{"model", to_string(model)}, {"params", params_json}, {"outputs", outputs_json}, {"seed", seed}};
}

double ScenarioConfig::param(const std::string& name) const {
  const auto it = params.find(name);
  if (it == params.end()) throw UsageError("params." + name, "not defined for model " + to_string(model));
  return it->second;
}

ScenarioConfig ScenarioConfig::with_param(const std::string& name, double value) const {
  const ParamSpec* spec = find_param(model, name);
  if (!spec) throw UsageError("params." + name, "unknown parameter for model " + to_string(model));
  validate_param(*spec, value);
  ScenarioConfig c = *this;
  c.params[name] = value;
  return c;
}

std::vector<Artifact> evaluate(const ScenarioConfig& config) {
  std::vector<Artifact> out;
  std::optional<SU2Run> su2;
  const auto su2_data = [&]() -> const SU2Run& {
    if (!su2) su2 = su2_run(config);
    return *su2;
  };
  for (OutputKind kind : config.outputs) {
    switch (config.model) {
      case Model::minkowski2d:
        if (kind == OutputKind::trajectory) out.push_back(minkowski_trajectory(config));
        if (kind == OutputKind::projection) out.push_back(minkowski_projection(config));
        if (kind == OutputKind::scattering) out.push_back(minkowski_scattering(config));
        if (kind == OutputKind::certificate) out.push_back(minkowski_certificate(config));
        break;
      case Model::kappa:
        if (kind == OutputKind::trajectory) out.push_back(kappa_trajectory(config));
        if (kind == OutputKind::profile) out.push_back(kappa_profile(config));
        if (kind == OutputKind::certificate) out.push_back(kappa_certificate(config));
        break;
      case Model::su2:
        if (kind == OutputKind::trajectory) out.push_back(su2_trajectory(config, su2_data()));
        if (kind == OutputKind::projection) out.push_back(su2_projection(su2_data()));
        if (kind == OutputKind::certificate) out.push_back(su2_certificate(config));
        break;
    }
  }
  return out;
}

RunManifest run(const ScenarioConfig& config, const fs::path& out_dir, Format format) {
  const std::vector<Artifact> artifacts = evaluate(config);
  prepare_out_dir(out_dir);

  RunManifest result;
  json artifacts_json = json::array();
  for (const Artifact& a : artifacts) {
    json files = json::array();
    for (const Table& t : a.tables) {
      const std::string name = t.name + extension(format);
      write_file(out_dir / name, format == Format::csv ? table_csv(t) : table_json(t));
      files.push_back(name);
      result.files.push_back(name);
    }
    json checks = json::array();
    for (const Check& ch : a.checks) checks.push_back(check_json(ch));
    artifacts_json.push_back(
        {{"kind", to_string(a.kind)}, {"files", files}, {"summary", a.summary}, {"checks", checks}, {"pass", a.passes()}});
    result.all_checks_pass = result.all_checks_pass && a.passes();
  }
  result.files.push_back("manifest.json");
  result.document = {{"tool", kToolName},
                     {"version", kToolVersion},
                     {"config", config.to_json()},
                     {"rng", rng_json(config.seed)},
                     {"format", format == Format::csv ? "csv" : "json"},
                     {"artifacts", artifacts_json},
                     {"files", result.files},
                     {"all_checks_pass", result.all_checks_pass}};
  write_file(out_dir / "manifest.json", result.document.dump(2) + "\n");
  return result;
}

int default_worker_count() {
  if (const char* env = std::getenv("POISYM_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<int>(std::min<long>(v, 256));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

SweepResult sweep(const ScenarioConfig& config, const std::string& parameter, const std::vector<double>& values,
                  const fs::path& out_dir, Format format, int workers) {
  if (!find_param(config.model, parameter))
    throw UsageError("params." + parameter, "unknown parameter for model " + to_string(config.model));
  if (values.empty()) throw UsageError("values", "at least one value required");
  std::vector<ScenarioConfig> configs;
  for (std::size_t i = 0; i < values.size(); ++i) {
    try {
      configs.push_back(config.with_param(parameter, values[i]));
    } catch (const UsageError& e) {
      throw UsageError("values[" + std::to_string(i) + "]", e.what());
    }
  }

  struct RowResult {
    bool ok = false;
    bool checks_pass = false;
    std::string error;
    std::map<std::string, double> scalars;
  };
  std::vector<RowResult> rows(values.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      try {
        const std::vector<Artifact> artifacts = evaluate(configs[i]);
        rows[i].scalars = scalar_summary(artifacts);
        rows[i].checks_pass = std::all_of(artifacts.begin(), artifacts.end(), [](const Artifact& a) { return a.passes(); });
        rows[i].ok = true;
      } catch (const std::exception& e) {
        rows[i].error = e.what();
      }
    }
  };
  const int pool = std::max(1, std::min<int>(workers, static_cast<int>(rows.size())));
  std::vector<std::thread> threads;
  for (int w = 1; w < pool; ++w) threads.emplace_back(worker);
  worker();
  for (std::thread& t : threads) t.join();

  std::set<std::string> column_set;
  for (const RowResult& r : rows)
    for (const auto& [k, v] : r.scalars) column_set.insert(k);
  const std::vector<std::string> columns(column_set.begin(), column_set.end());

  prepare_out_dir(out_dir);
  SweepResult result;
  json failures = json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].ok) failures.push_back({{"index", i}, {"value", values[i]}, {"error", rows[i].error}});
    if (!rows[i].ok || !rows[i].checks_pass) result.all_ok = false;
  }
  const auto status = [](const RowResult& r) { return !r.ok ? "failed" : (r.checks_pass ? "ok" : "check_failed"); };

  const std::string file = std::string("sweep") + extension(format);
  if (format == Format::csv) {
    std::string out = parameter + ",status";
    for (const std::string& col : columns) out += "," + col;
    out += '\n';
    for (std::size_t i = 0; i < rows.size(); ++i) {
      out += format_number(values[i]) + "," + status(rows[i]);
      for (const std::string& col : columns) {
        out += ',';
        const auto it = rows[i].scalars.find(col);
        if (it != rows[i].scalars.end()) out += format_number(it->second);
      }
      out += '\n';
    }
    write_file(out_dir / file, out);
  } else {
    json table_rows = json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      json r = {{parameter, values[i]}, {"status", status(rows[i])}};
      for (const std::string& col : columns) {
        const auto it = rows[i].scalars.find(col);
        r[col] = it != rows[i].scalars.end() ? number_json(it->second) : json(nullptr);
      }
      table_rows.push_back(std::move(r));
    }
    write_file(out_dir / file, json{{"parameter", parameter}, {"rows", table_rows}}.dump(2) + "\n");
  }

  // log-log convergence slopes in epsilon of every classical-limit column, when all rows are usable.
  json slopes = json::object();
  for (const std::string& col : columns) {
    if (parameter != "epsilon") break;
    const std::string suffix = "classical_limit_deviation";
    if (col.size() < suffix.size() || col.compare(col.size() - suffix.size(), suffix.size(), suffix) != 0) continue;
    std::vector<double> xs, ys;
    bool usable = rows.size() >= 2;
    for (std::size_t i = 0; i < rows.size() && usable; ++i) {
      const auto it = rows[i].scalars.find(col);
      usable = rows[i].ok && it != rows[i].scalars.end() && values[i] > 0.0 && it->second > 0.0;
      if (usable) {
        xs.push_back(std::abs(values[i]));
        ys.push_back(it->second);
      }
    }
    if (usable) slopes[col] = loglog_slope(xs, ys);
  }

  result.files = {file, "manifest.json"};
  result.manifest = {{"tool", kToolName},
                     {"version", kToolVersion},
                     {"config", config.to_json()},
                     {"rng", rng_json(config.seed)},
                     {"parameter", parameter},
                     {"values", values},
                     {"rows", rows.size()},
                     {"failures", failures},
                     {"convergence_slopes", slopes},
                     {"files", result.files},
                     {"all_ok", result.all_ok}};
  write_file(out_dir / "manifest.json", result.manifest.dump(2) + "\n");
  return result;
}

CertificateReport certify(Model model, double epsilon, std::uint64_t seed) {
  json j = {{"model", to_string(model)}, {"params", {{"epsilon", epsilon}}}, {"outputs", {"certificate"}}, {"seed", seed}};
  const ScenarioConfig config = ScenarioConfig::from_json(j);
  const std::vector<Artifact> artifacts = evaluate(config);
  CertificateReport report;
  json checks = json::array();
  for (const Artifact& a : artifacts)
    for (const Check& ch : a.checks) {
      checks.push_back(check_json(ch));
      report.all_checks_pass = report.all_checks_pass && ch.pass;
    }
  report.document = {{"tool", kToolName},
                     {"version", kToolVersion},
                     {"model", to_string(model)},
                     {"epsilon", epsilon},
                     {"rng", rng_json(seed)},
                     {"checks", checks},
                     {"all_checks_pass", report.all_checks_pass}};
  return report;
}

}  // namespace poisym
