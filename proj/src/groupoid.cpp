#include "poisym/groupoid.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "poisym/errors.hpp"
#include "poisym/numeric.hpp"

namespace poisym {

GeneratorField GeneratorField::translation(Eigen::VectorXd direction) {
  GeneratorField g(Kind::translation, static_cast<int>(direction.size()));
  g.direction_ = std::move(direction);
  return g;
}

GeneratorField GeneratorField::linear(Eigen::MatrixXd generator) {
  if (generator.rows() != generator.cols()) throw ContractViolation("linear generator must be square");
  GeneratorField g(Kind::linear, static_cast<int>(generator.rows()));
  g.generator_ = std::move(generator);
  return g;
}

GeneratorField GeneratorField::scaling(int dim, std::vector<int> coords) {
  for (int c : coords)
    if (c < 0 || c >= dim) throw ContractViolation("scaling generator: coordinate out of range");
  GeneratorField g(Kind::scaling, dim);
  g.coords_ = std::move(coords);
  return g;
}

Eigen::VectorXd GeneratorField::value(const Point& x) const {
  if (x.size() != dim_) throw ContractViolation("generator: point dimension mismatch");
  switch (kind_) {
    case Kind::translation:
      return direction_;
    case Kind::linear:
      return generator_ * x;
    case Kind::scaling: {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(dim_);
      for (int c : coords_) v[c] = x[c];
      return v;
    }
  }
  return {};
}

Point GeneratorField::flow(const Point& x, double t) const {
  if (x.size() != dim_) throw ContractViolation("generator: point dimension mismatch");
  Point y = x;
  switch (kind_) {
    case Kind::translation:
      y += t * direction_;
      break;
    case Kind::linear:
      y = (t * generator_).exp() * x;
      break;
    case Kind::scaling: {
      const double factor = std::exp(t);
      for (int c : coords_) y[c] *= factor;
      break;
    }
  }
  if (!y.allFinite()) throw NumericDomainError("generator flow left the chart");
  return y;
}

Eigen::MatrixXd GeneratorField::jacobian() const {
  switch (kind_) {
    case Kind::translation:
      return Eigen::MatrixXd::Zero(dim_, dim_);
    case Kind::linear:
      return generator_;
    case Kind::scaling: {
      Eigen::MatrixXd d = Eigen::MatrixXd::Zero(dim_, dim_);
      for (int c : coords_) d(c, c) = 1.0;
      return d;
    }
  }
  return {};
}

Eigen::VectorXd GeneratorField::cotangent_lift(const Point& xp) const {
  if (xp.size() != 2 * dim_) throw ContractViolation("cotangent lift: expected a (x, p) point");
  Eigen::VectorXd v(2 * dim_);
  v.head(dim_) = value(xp.head(dim_));
  v.tail(dim_) = -jacobian().transpose() * xp.tail(dim_);
  return v;
}

AbelianRSpec::AbelianRSpec(double eps, GeneratorField x1, GeneratorField x2)
    : epsilon(eps), X1(std::move(x1)), X2(std::move(x2)) {
  if (X1.dim() != X2.dim()) throw ContractViolation("AbelianRSpec: generators act on different dimensions");
  SampleGenerator rng(0);
  std::vector<std::tuple<double, double, Point>> samples;
  for (int i = 0; i < 8; ++i) {
    const double s = rng.uniform(-1.0, 1.0), t = rng.uniform(-1.0, 1.0);
    samples.emplace_back(s, t, rng.box(X1.dim()));
  }
  if (commutator_defect(samples) >= kCommuteTolerance)
    throw ContractViolation("AbelianRSpec: generator flows do not commute");
}

RMatrixPart AbelianRSpec::part() const {
  switch (X1.degree() + X2.degree()) {
    case 0:
      return RMatrixPart::constant;
    case 1:
      return RMatrixPart::linear;
    default:
      return RMatrixPart::quadratic;
  }
}

double AbelianRSpec::commutator_defect(const std::vector<std::tuple<double, double, Point>>& samples) const {
  double worst = 0.0;
  for (const auto& [s, t, x] : samples) {
    const Point a = X1.flow(X2.flow(x, t), s);
    const Point b = X2.flow(X1.flow(x, s), t);
    worst = std::max(worst, (a - b).norm());
  }
  return worst;
}

namespace {

std::vector<std::string> base_names(int n) {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("x" + std::to_string(i));
  return names;
}

std::vector<std::string> phase_names(int n) {
  std::vector<std::string> names = base_names(n);
  for (int i = 0; i < n; ++i) names.push_back("p" + std::to_string(i));
  return names;
}

void wedge_into(double eps, const Eigen::VectorXd& u, const Eigen::VectorXd& v, Eigen::MatrixXd& m) {
  const auto n = u.size();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) m(i, j) = eps * (u[i] * v[j] - u[j] * v[i]);
}

}  // namespace

BivectorSpec r_bivector(const AbelianRSpec& r) {
  return BivectorSpec(base_names(r.dim()), [r](const Point& x, Eigen::MatrixXd& m) {
    wedge_into(r.epsilon, r.X1.value(x), r.X2.value(x), m);
  });
}

BivectorSpec lifted_r_bivector(const AbelianRSpec& r) {
  return BivectorSpec(phase_names(r.dim()), [r](const Point& xp, Eigen::MatrixXd& m) {
    wedge_into(r.epsilon, r.X1.cotangent_lift(xp), r.X2.cotangent_lift(xp), m);
  });
}

BivectorSpec canonical_bivector(int n) {
  if (n < 1) throw ContractViolation("canonical_bivector: n must be positive");
  return BivectorSpec(phase_names(n), [n](const Point&, Eigen::MatrixXd& m) {
    for (int i = 0; i < n; ++i) m(i, n + i) = 1.0;
  });
}

Eigen::MatrixXd shifted_bracket(const BivectorSpec& r_action, const Point& xp) {
  if (r_action.dim() % 2 != 0 || xp.size() != r_action.dim())
    throw ContractViolation("shifted_bracket: expected a bivector and point on a 2n chart");
  return canonical_bivector(r_action.dim() / 2).matrix(xp) + r_action.matrix(xp);
}

BivectorSpec shifted_bivector(const BivectorSpec& r_action) {
  if (r_action.dim() % 2 != 0) throw ContractViolation("shifted_bivector: expected a 2n chart");
  return BivectorSpec(r_action.coord_names(), [r_action](const Point& xp, Eigen::MatrixXd& m) {
    m = shifted_bracket(r_action, xp);
  });
}

double moment_J0(const Point& x, const Eigen::VectorXd& p, const GeneratorField& X) {
  if (x.size() != X.dim() || p.size() != X.dim()) throw ContractViolation("moment_J0: dimension mismatch");
  return p.dot(X.value(x));
}

MomentValue moments(const AbelianRSpec& r, const Point& x, const Eigen::VectorXd& p) {
  return {moment_J0(x, p, r.X1), moment_J0(x, p, r.X2)};
}

Point groupoid_projection(const AbelianRSpec& r, const Point& x, const MomentValue& J, Side side) {
  const double sign = side == Side::left ? 1.0 : -1.0;
  const double half = 0.5 * r.epsilon * sign;
  return r.X1.flow(r.X2.flow(x, half * J.J1), -half * J.J2);
}

Point groupoid_projection(const AbelianRSpec& r, const Point& x, const Eigen::VectorXd& p, Side side) {
  if (!x.allFinite() || !p.allFinite()) throw ContractViolation("groupoid_projection: non-finite input");
  return groupoid_projection(r, x, moments(r, x, p), side);
}

Curve project_trajectory(const AbelianRSpec& r, const Trajectory& traj, Side side) {
  const int n = r.dim();
  Curve curve;
  curve.params = traj.times;
  curve.points.reserve(traj.size());
  for (const Point& xp : traj.points) {
    if (xp.size() != 2 * n) throw ContractViolation("project_trajectory: points must carry (x, p)");
    curve.points.push_back(groupoid_projection(r, xp.head(n), xp.tail(n), side));
  }
  return curve;
}

Curve base_projection(const Trajectory& traj) {
  Curve curve;
  curve.params = traj.times;
  for (const Point& xp : traj.points) {
    if (xp.size() % 2 != 0) throw ContractViolation("base_projection: points must carry (x, p)");
    curve.points.push_back(xp.head(xp.size() / 2));
  }
  return curve;
}

}  // namespace poisym
