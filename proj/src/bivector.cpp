#include "poisym/bivector.hpp"

#include <cmath>
#include <set>

#include "poisym/errors.hpp"
#include "poisym/numeric.hpp"

namespace poisym {

namespace {

void require_dim(const BivectorSpec& biv, const Point& x, const char* op) {
  if (x.size() != biv.dim())
    throw ContractViolation(std::string(op) + ": point has dimension " + std::to_string(x.size()) +
                            ", bivector expects " + std::to_string(biv.dim()));
}

}  // namespace

ScalarField ScalarField::coordinate(int index) {
  return ScalarField([index](const Point& x) { return x[index]; },
                     [index](const Point& x) {
                       Eigen::VectorXd g = Eigen::VectorXd::Zero(x.size());
                       g[index] = 1.0;
                       return g;
                     });
}

ScalarField ScalarField::constant(double c) {
  return ScalarField([c](const Point&) { return c; },
                     [](const Point& x) { return Eigen::VectorXd::Zero(x.size()).eval(); });
}

Eigen::VectorXd ScalarField::gradient(const Point& x) const {
  if (gradient_) return gradient_(x);
  return numerical_gradient(x);
}

Eigen::VectorXd ScalarField::numerical_gradient(const Point& x) const {
  Eigen::VectorXd g(x.size());
  Point probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = fd_step(x[i], kGradientStepScale);
    probe[i] = x[i] + h;
    const double up = value_(probe);
    probe[i] = x[i] - h;
    const double down = value_(probe);
    probe[i] = x[i];
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

double ScalarField::gradient_mismatch(const Point& x) const {
  if (!gradient_) return 0.0;
  const Eigen::VectorXd analytic = gradient_(x);
  const Eigen::VectorXd numeric = numerical_gradient(x);
  const double scale = std::max(1.0, analytic.cwiseAbs().maxCoeff());
  return (analytic - numeric).cwiseAbs().maxCoeff() / scale;
}

BivectorSpec::BivectorSpec(std::vector<std::string> coord_names, Evaluator upper)
    : names_(std::move(coord_names)), upper_(std::move(upper)) {
  if (names_.empty()) throw ContractViolation("BivectorSpec: dimension must be at least 1");
  std::set<std::string> distinct(names_.begin(), names_.end());
  if (distinct.size() != names_.size())
    throw ContractViolation("BivectorSpec: coordinate names must be distinct");
  if (!upper_) throw ContractViolation("BivectorSpec: missing component evaluator");
}

BivectorSpec BivectorSpec::from_components(std::vector<std::string> coord_names,
                                           std::vector<std::tuple<int, int, Component>> components) {
  const int n = static_cast<int>(coord_names.size());
  for (const auto& [i, j, f] : components) {
    if (!(0 <= i && i < j && j < n))
      throw ContractViolation("BivectorSpec: component indices must satisfy 0 <= i < j < dim");
  }
  return BivectorSpec(std::move(coord_names),
                      [components = std::move(components)](const Point& x, Eigen::MatrixXd& m) {
                        for (const auto& [i, j, f] : components) m(i, j) = f(x);
                      });
}

BivectorSpec BivectorSpec::zero(std::vector<std::string> coord_names) {
  return BivectorSpec(std::move(coord_names), [](const Point&, Eigen::MatrixXd&) {});
}

Eigen::MatrixXd BivectorSpec::matrix(const Point& x) const {
  require_dim(*this, x, "BivectorSpec::matrix");
  const int n = dim();
  Eigen::MatrixXd upper = Eigen::MatrixXd::Zero(n, n);
  upper_(x, upper);
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double v = upper(i, j);
      if (!std::isfinite(v))
        throw NumericDomainError("bivector component pi^{" + names_[i] + "," + names_[j] + "} is not finite",
                                 i * n + j);
      full(i, j) = v;
      full(j, i) = -v;
    }
  }
  return full;
}

double BivectorSpec::component(int i, int j, const Point& x) const {
  if (i < 0 || j < 0 || i >= dim() || j >= dim()) throw ContractViolation("component index out of range");
  return matrix(x)(i, j);
}

double eval_bracket(const BivectorSpec& biv, const ScalarField& f, const ScalarField& g, const Point& x) {
  require_dim(biv, x, "eval_bracket");
  const Eigen::MatrixXd pi = biv.matrix(x);
  const Eigen::VectorXd df = f.gradient(x);
  const Eigen::VectorXd dg = g.gradient(x);
  double sum = 0.0;
  for (int i = 0; i < biv.dim(); ++i)
    for (int j = i + 1; j < biv.dim(); ++j) sum += pi(i, j) * (df[i] * dg[j] - df[j] * dg[i]);
  return sum;
}

double jacobi_residual(const BivectorSpec& biv, const Point& x, int i, int j, int k) {
  require_dim(biv, x, "jacobi_residual");
  const int n = biv.dim();
  if (i == j || j == k || i == k) throw ContractViolation("jacobi_residual: indices must be distinct");
  if (std::min({i, j, k}) < 0 || std::max({i, j, k}) >= n)
    throw ContractViolation("jacobi_residual: index out of range");

  const Eigen::MatrixXd pi = biv.matrix(x);
  // {x^a, pi^{bc}} = sum_l pi^{al} d_l pi^{bc}
  auto outer = [&](int a, int b, int c) {
    double acc = 0.0;
    Point probe = x;
    for (int l = 0; l < n; ++l) {
      if (pi(a, l) == 0.0) continue;
      const double h = fd_step(x[l], kJacobiStepScale);
      probe[l] = x[l] + h;
      const double up = biv.matrix(probe)(b, c);
      probe[l] = x[l] - h;
      const double down = biv.matrix(probe)(b, c);
      probe[l] = x[l];
      acc += pi(a, l) * (up - down) / (2.0 * h);
    }
    return acc;
  };
  return outer(i, j, k) + outer(j, k, i) + outer(k, i, j);
}

Eigen::VectorXd hamiltonian_vector_field(const BivectorSpec& biv, const ScalarField& H, const Point& x) {
  require_dim(biv, x, "hamiltonian_vector_field");
  // {H, x^i} = sum_a pi^{ai} d_a H
  return biv.matrix(x).transpose() * H.gradient(x);
}

JacobiCertificate jacobi_certificate(const BivectorSpec& biv, const std::vector<Point>& points) {
  JacobiCertificate cert;
  const int n = biv.dim();
  if (n < 3) {
    cert.vacuous = true;
    return cert;
  }
  for (const Point& x : points) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
          const double r = std::abs(jacobi_residual(biv, x, i, j, k));
          if (r > cert.max_residual || cert.worst_point.size() == 0) {
            cert.max_residual = std::max(cert.max_residual, r);
            cert.worst_point = x;
            cert.worst_triple = {i, j, k};
          }
        }
    ++cert.points_checked;
  }
  return cert;
}

Eigen::MatrixXd pushforward_bracket(const BivectorSpec& biv,
                                    const std::function<Eigen::VectorXd(const Point&)>& map,
                                    const Point& x) {
  require_dim(biv, x, "pushforward_bracket");
  const Eigen::VectorXd y0 = map(x);
  Eigen::MatrixXd jac(y0.size(), x.size());
  Point probe = x;
  for (Eigen::Index l = 0; l < x.size(); ++l) {
    const double h = fd_step(x[l], kGradientStepScale);
    probe[l] = x[l] + h;
    const Eigen::VectorXd up = map(probe);
    probe[l] = x[l] - h;
    const Eigen::VectorXd down = map(probe);
    probe[l] = x[l];
    jac.col(l) = (up - down) / (2.0 * h);
  }
  return jac * biv.matrix(x) * jac.transpose();
}

}  // namespace poisym
