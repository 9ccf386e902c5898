#pragma once

#include <array>
#include <functional>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

namespace poisym {

using Point = Eigen::VectorXd;

/// A real-valued function on a coordinate chart, optionally with an analytic gradient.
/// Without one, gradients come from central differences with step 1e-6 * max(1, |x_i|).
class ScalarField {
 public:
  using Evaluator = std::function<double(const Point&)>;
  using GradientEvaluator = std::function<Eigen::VectorXd(const Point&)>;

  ScalarField() = default;
  explicit ScalarField(Evaluator value, GradientEvaluator gradient = {})
      : value_(std::move(value)), gradient_(std::move(gradient)) {}

  static ScalarField coordinate(int index);
  static ScalarField constant(double c);

  double operator()(const Point& x) const { return value_(x); }
  bool has_analytic_gradient() const { return static_cast<bool>(gradient_); }
  Eigen::VectorXd gradient(const Point& x) const;
  Eigen::VectorXd numerical_gradient(const Point& x) const;

  /// Largest relative disagreement between the analytic and the finite-difference
  /// gradient at `x`; 0 when no analytic gradient is attached.
  double gradient_mismatch(const Point& x) const;

 private:
  Evaluator value_;
  GradientEvaluator gradient_;
};

/// Poisson bivector on a chart. Only the strict upper triangle pi^{ij}, i < j, is
/// ever read from the evaluator; the lower triangle is mirrored with a sign flip.
class BivectorSpec {
 public:
  /// Fills (at least) the strict upper triangle of a dim x dim matrix.
  using Evaluator = std::function<void(const Point&, Eigen::MatrixXd&)>;
  using Component = std::function<double(const Point&)>;

  BivectorSpec(std::vector<std::string> coord_names, Evaluator upper);

  /// Build from a sparse list of (i, j, pi^{ij}) with i < j; missing pairs are zero.
  static BivectorSpec from_components(std::vector<std::string> coord_names,
                                      std::vector<std::tuple<int, int, Component>> components);
  static BivectorSpec zero(std::vector<std::string> coord_names);

  int dim() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& coord_names() const { return names_; }

  /// Full antisymmetric matrix at x. Throws NumericDomainError (index = i * dim + j)
  /// on a non-finite component.
  Eigen::MatrixXd matrix(const Point& x) const;
  double component(int i, int j, const Point& x) const;

 private:
  std::vector<std::string> names_;
  Evaluator upper_;
};

/// {f, g}(x) = sum_{i<j} pi^{ij} (d_i f d_j g - d_j f d_i g).
double eval_bracket(const BivectorSpec& biv, const ScalarField& f, const ScalarField& g, const Point& x);

/// Cyclic sum {x^i,{x^j,x^k}} + {x^j,{x^k,x^i}} + {x^k,{x^i,x^j}} at x, with the
/// inner derivatives of pi taken by central differences (step 1e-4 * max(1, |x_l|)).
double jacobi_residual(const BivectorSpec& biv, const Point& x, int i, int j, int k);

/// Tangent vector of the flow generated by H, component i = {H, x^i}.
Eigen::VectorXd hamiltonian_vector_field(const BivectorSpec& biv, const ScalarField& H, const Point& x);

struct JacobiCertificate {
  bool vacuous = false;  // dim < 3: no distinct triples to test
  double max_residual = 0.0;
  Point worst_point;
  std::array<int, 3> worst_triple{0, 0, 0};
  int points_checked = 0;

  bool passes(double threshold) const { return vacuous || max_residual < threshold; }
};

/// Max |jacobi_residual| over every sorted triple and every supplied point.
JacobiCertificate jacobi_certificate(const BivectorSpec& biv, const std::vector<Point>& points);

/// Matrix of brackets of the image coordinates when the chart is mapped through
/// `map`: J pi J^T, with the Jacobian J taken by central differences.
Eigen::MatrixXd pushforward_bracket(const BivectorSpec& biv,
                                    const std::function<Eigen::VectorXd(const Point&)>& map,
                                    const Point& x);

}  // namespace poisym
