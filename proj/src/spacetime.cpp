#include "poisym/spacetime.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "poisym/errors.hpp"
#include "poisym/numeric.hpp"

namespace poisym {

Minkowski2DSpec::Minkowski2DSpec(double eps, double m) : epsilon(eps), mass(m) {
  if (!(m > 0.0)) throw ContractViolation("Minkowski2DSpec: mass must be positive");
  if (!std::isfinite(eps)) throw ContractViolation("Minkowski2DSpec: epsilon must be finite");
}

BivectorSpec minkowski2d_bivector(const Minkowski2DSpec& spec) {
  const double eps = spec.epsilon;
  return BivectorSpec::from_components({"x+", "x-"}, {{0, 1, [eps](const Point& x) { return eps * x[0] * x[1]; }}});
}

AbelianRSpec minkowski2d_r(const Minkowski2DSpec& spec) {
  return AbelianRSpec(spec.epsilon, GeneratorField::scaling(2, {0}), GeneratorField::scaling(2, {1}));
}

namespace {

// (2 / (eps q)) sinh(eps q p / 2), written so that q = 0 and eps = 0 are regular.
double deformed_momentum(double eps, double q, double p) { return p * sinhc(0.5 * eps * q * p); }

void require_phase_point(const Point& qp) {
  if (qp.size() != 4) throw ContractViolation("expected a phase point (q+, q-, p+, p-)");
}

}  // namespace

std::array<double, 2> deformed_momenta(const Minkowski2DSpec& spec, const Point& qp) {
  require_phase_point(qp);
  return {deformed_momentum(spec.epsilon, qp[0], qp[2]), deformed_momentum(spec.epsilon, qp[1], qp[3])};
}

ScalarField minkowski2d_free_hamiltonian(const Minkowski2DSpec& spec) {
  const double eps = spec.epsilon;
  auto value = [eps](const Point& qp) {
    return deformed_momentum(eps, qp[0], qp[2]) * deformed_momentum(eps, qp[1], qp[3]);
  };
  auto gradient = [eps](const Point& qp) {
    Eigen::VectorXd g(4);
    const double u_plus = 0.5 * eps * qp[0] * qp[2];
    const double u_minus = 0.5 * eps * qp[1] * qp[3];
    const double P_plus = qp[2] * sinhc(u_plus);
    const double P_minus = qp[3] * sinhc(u_minus);
    // dP/dq = p sinhc'(u) eps p / 2,  dP/dp = cosh(u)
    g[0] = P_minus * qp[2] * cosh_minus_sinhc_over_t(u_plus) * 0.5 * eps * qp[2];
    g[1] = P_plus * qp[3] * cosh_minus_sinhc_over_t(u_minus) * 0.5 * eps * qp[3];
    g[2] = P_minus * std::cosh(u_plus);
    g[3] = P_plus * std::cosh(u_minus);
    return g;
  };
  return ScalarField(value, gradient);
}

Point minkowski2d_shell_point(const Minkowski2DSpec& spec, double q_plus, double q_minus, double p_plus) {
  const double P_plus = deformed_momentum(spec.epsilon, q_plus, p_plus);
  if (P_plus == 0.0) throw NumericDomainError("shell point: P+ vanishes, no p- puts the point on the shell");
  const double P_minus = spec.mass * spec.mass / P_plus;
  const double p_minus = P_minus * asinhc(0.5 * spec.epsilon * q_minus * P_minus);
  Point qp(4);
  qp << q_plus, q_minus, p_plus, p_minus;
  return qp;
}

CurveLocation minkowski2d_curve_location(const Minkowski2DSpec& spec, const Point& qp) {
  const auto [P_plus, P_minus] = deformed_momenta(spec, qp);
  if (!(P_plus * P_minus > 0.0)) throw NumericDomainError("curve location: point is not on a timelike shell");
  const double sign = P_plus > 0.0 ? 1.0 : -1.0;
  const double J1 = qp[0] * qp[2];
  const double J2 = qp[1] * qp[3];
  CurveLocation loc;
  // Parametric curve with e^alpha / m = 1/|P+|; the shell mass is taken from the point itself.
  loc.curve.alpha = std::log(std::sqrt(P_plus * P_minus) / std::abs(P_plus));
  loc.curve.beta = sign * (J1 - J2);
  loc.parameter = sign * J1;
  return loc;
}

Curve hyperbola_curve(const Minkowski2DSpec& spec, double c_plus, double c_minus,
                      const std::vector<double>& x_plus_grid) {
  if (!(c_plus * c_minus < 0.0)) throw ContractViolation("hyperbola_curve: requires c+ c- < 0");
  if (spec.epsilon == 0.0) throw NumericDomainError("hyperbola_curve: the curve degenerates at eps = 0");
  const double k = 1.0 / (spec.epsilon * spec.epsilon * spec.mass * spec.mass);
  Curve curve;
  for (double xp : x_plus_grid) {
    if (xp == c_plus) throw ContractViolation("hyperbola_curve: grid hits the asymptote x+ = c+");
    Point x(2);
    x << xp, c_minus - k / (xp - c_plus);
    curve.params.push_back(xp);
    curve.points.push_back(x);
  }
  return curve;
}

double hyperbola_residual(const Minkowski2DSpec& spec, double c_plus, double c_minus, const Point& x) {
  const double k = 1.0 / (spec.epsilon * spec.epsilon * spec.mass * spec.mass);
  return std::abs((x[0] - c_plus) * (x[1] - c_minus) + k) / k;
}

HyperbolaFit fit_hyperbola(const Curve& curve) {
  if (curve.size() < 3) throw EstimationError("fit_hyperbola: need at least three samples");
  // x+ x- = a x+ + b x- + k  <=>  (x+ - b)(x- - a) = k + a b
  const auto n = static_cast<Eigen::Index>(curve.size());
  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Point& x = curve.points[static_cast<std::size_t>(i)];
    design.row(i) << x[0], x[1], 1.0;
    rhs[i] = x[0] * x[1];
  }
  const Eigen::Vector3d coef = design.colPivHouseholderQr().solve(rhs);
  HyperbolaFit fit;
  fit.c_minus = coef[0];
  fit.c_plus = coef[1];
  fit.constant = coef[2] + coef[0] * coef[1];
  for (const Point& x : curve.points) {
    const double c = (x[0] - fit.c_plus) * (x[1] - fit.c_minus);
    fit.constant_variation = std::max(fit.constant_variation, std::abs(c - fit.constant) / std::abs(fit.constant));
  }
  return fit;
}

Curve parametric_trajectory_2d(const Minkowski2DSpec& spec, const ScatteringCurveSpec& curve,
                               const std::vector<double>& p_grid) {
  const double eps = spec.epsilon;
  const double m = spec.mass;
  Curve out;
  for (double p : p_grid) {
    // sinh(eps p / 2) / ((eps/2) m) = (p/m) sinhc(eps p / 2); eps = 0 gives the straight line.
    Point q(2);
    q << std::exp(curve.alpha) * (p / m) * sinhc(0.5 * eps * p),
        std::exp(-curve.alpha) * ((p - curve.beta) / m) * sinhc(0.5 * eps * (p - curve.beta));
    out.params.push_back(p);
    out.points.push_back(q);
  }
  return out;
}

ScatteringData scattering_data(const Minkowski2DSpec& spec, const ScatteringCurveSpec& curve, ScatteringMap map) {
  const double shift = 0.25 * spec.epsilon * curve.beta;
  const auto T = [map](double s) { return map == ScatteringMap::hyperbolic ? std::tanh(s) : std::tan(s); };
  return {T(curve.alpha - shift), T(curve.alpha + shift)};
}

ScatteringData scattering_limits_numerical(const Minkowski2DSpec& spec, const ScatteringCurveSpec& curve,
                                           double reach) {
  const double p_far = spec.epsilon == 0.0 ? 1e10 : reach / spec.epsilon;
  const Curve c = parametric_trajectory_2d(spec, curve, {-p_far, p_far});
  const auto velocity = [](const Point& q) { return (q[0] - q[1]) / (q[0] + q[1]); };
  return {velocity(c.points[0]), velocity(c.points[1])};
}

double minkowski2d_limit_deviation(const Minkowski2DSpec& spec, const ScatteringCurveSpec& curve,
                                   const std::vector<double>& p_grid) {
  const Curve deformed = parametric_trajectory_2d(spec, curve, p_grid);
  const Curve classical = parametric_trajectory_2d(Minkowski2DSpec(0.0, spec.mass), curve, p_grid);
  double worst = 0.0;
  for (std::size_t i = 0; i < p_grid.size(); ++i)
    worst = std::max(worst, (deformed.points[i] - classical.points[i]).norm());
  return worst;
}

KappaSpec::KappaSpec(double eps, int spatial) : epsilon(eps), spatial_dim(spatial) {
  if (spatial < 1) throw ContractViolation("KappaSpec: spatial_dim must be at least 1");
}

BivectorSpec kappa_bivector(const KappaSpec& spec) {
  std::vector<std::string> names;
  for (int i = 0; i < spec.dim(); ++i) names.push_back("x" + std::to_string(i));
  const double eps = spec.epsilon;
  return BivectorSpec(std::move(names), [eps](const Point& x, Eigen::MatrixXd& m) {
    for (Eigen::Index k = 1; k < x.size(); ++k) m(0, k) = eps * x[k];
  });
}

AbelianRSpec kappa_r(const KappaSpec& spec) {
  Eigen::VectorXd e0 = Eigen::VectorXd::Zero(spec.dim());
  e0[0] = 1.0;
  std::vector<int> spatial;
  for (int k = 1; k <= spec.spatial_dim; ++k) spatial.push_back(k);
  return AbelianRSpec(spec.epsilon, GeneratorField::translation(e0), GeneratorField::scaling(spec.dim(), spatial));
}

namespace {

double tail_velocity(const std::vector<Point>& points) {
  const std::size_t n = points.size();
  const std::size_t start = n - n / 4;
  const std::size_t count = n - start;
  if (count < 8) throw EstimationError("velocity profile: tail fit needs at least 8 samples");
  const Eigen::Index dim = points.front().size();
  double mean_t = 0.0;
  Eigen::VectorXd mean_x = Eigen::VectorXd::Zero(dim - 1);
  for (std::size_t i = start; i < n; ++i) {
    mean_t += points[i][0];
    mean_x += points[i].tail(dim - 1);
  }
  mean_t /= static_cast<double>(count);
  mean_x /= static_cast<double>(count);
  double var_t = 0.0;
  Eigen::VectorXd cov = Eigen::VectorXd::Zero(dim - 1);
  for (std::size_t i = start; i < n; ++i) {
    const double dt = points[i][0] - mean_t;
    var_t += dt * dt;
    cov += dt * (points[i].tail(dim - 1) - mean_x);
  }
  if (var_t == 0.0) return std::numeric_limits<double>::infinity();
  return (cov / var_t).norm();
}

}  // namespace

std::vector<ProfileRow> velocity_momentum_profile(const KappaSpec& spec, double mass, ProfileProjection projection,
                                                  std::vector<double> momentum_grid, const ProfileOptions& options) {
  if (!(mass > 0.0)) throw ContractViolation("velocity_momentum_profile: mass must be positive");
  if (options.samples < 2) throw ContractViolation("velocity_momentum_profile: need at least two samples");
  std::sort(momentum_grid.begin(), momentum_grid.end());
  const AbelianRSpec r = kappa_r(spec);
  const int dim = spec.dim();

  Point base(dim);
  for (int i = 0; i < dim; ++i) base[i] = 0.25 * i * (i % 2 == 0 ? 1.0 : -1.0);

  std::vector<ProfileRow> rows;
  for (double pmag : momentum_grid) {
    if (pmag < 0.0) throw ContractViolation("velocity_momentum_profile: momentum magnitudes must be non-negative");
    // Covector on the shell g^{ij} p_i p_j = m^2, signature (+, -, ..., -), moving along +x1.
    const double energy = std::sqrt(pmag * pmag + mass * mass);
    Eigen::VectorXd p = Eigen::VectorXd::Zero(dim);
    p[0] = energy;
    p[1] = -pmag;
    Eigen::VectorXd velocity = Eigen::VectorXd::Zero(dim);
    velocity[0] = energy;
    velocity[1] = pmag;

    std::vector<Point> points;
    for (int k = 0; k < options.samples; ++k) {
      const double s = options.duration * k / (options.samples - 1);
      const Point x = base + s * velocity;
      switch (projection) {
        case ProfileProjection::ordinary:
          points.push_back(x);
          break;
        case ProfileProjection::left:
          points.push_back(groupoid_projection(r, x, p, Side::left));
          break;
        case ProfileProjection::right:
          points.push_back(groupoid_projection(r, x, p, Side::right));
          break;
      }
    }
    rows.push_back({pmag, tail_velocity(points)});
  }
  return rows;
}

bool is_monotonic(const std::vector<ProfileRow>& profile) {
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (!std::isfinite(profile[i].velocity)) return false;
    if (i > 0 && profile[i].velocity < profile[i - 1].velocity) return false;
  }
  return true;
}

double kappa_limit_deviation(const KappaSpec& spec, double mass, ProfileProjection projection,
                             const std::vector<double>& momentum_grid) {
  double worst = 0.0;
  for (const ProfileRow& row : velocity_momentum_profile(spec, mass, projection, momentum_grid)) {
    const double classical = row.momentum / std::sqrt(row.momentum * row.momentum + mass * mass);
    worst = std::max(worst, std::abs(row.velocity - classical));
  }
  return worst;
}

}  // namespace poisym
