#pragma once

#include <vector>

#include "poisym/bivector.hpp"
#include "poisym/flow.hpp"

namespace poisym {

/// An analytically flowable vector field on R^n: a constant translation, a linear
/// field x -> L x, or a coordinate scaling sum_{k in S} x^k d_k.
class GeneratorField {
 public:
  enum class Kind { translation, linear, scaling };

  static GeneratorField translation(Eigen::VectorXd direction);
  static GeneratorField linear(Eigen::MatrixXd generator);
  static GeneratorField scaling(int dim, std::vector<int> coords);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }

  /// Polynomial degree of the coefficients: 0 for translations, 1 otherwise.
  int degree() const { return kind_ == Kind::translation ? 0 : 1; }

  /// Tangent vector X(x).
  Eigen::VectorXd value(const Point& x) const;

  /// Exact time-t flow map applied to x. Throws NumericDomainError if the image is not finite.
  Point flow(const Point& x, double t) const;

  /// Constant Jacobian dX (zero for translations).
  Eigen::MatrixXd jacobian() const;

  /// Cotangent lift to T*M = M x V*: (X(x), -dX^T p), on the 2n chart (x, p).
  Eigen::VectorXd cotangent_lift(const Point& xp) const;

 private:
  GeneratorField(Kind kind, int dim) : kind_(kind), dim_(dim) {}

  Kind kind_;
  int dim_;
  Eigen::VectorXd direction_;
  Eigen::MatrixXd generator_;
  std::vector<int> coords_;
};

/// Which summand of  /\^2 V  +  V /\ h  +  /\^2 h  an abelian r = eps X1 /\ X2 lives in
/// (constant, linear, quadratic part of pi_M respectively).
enum class RMatrixPart { constant, linear, quadratic };

/// Abelian r-matrix eps X1 /\ X2 with commuting generators.
struct AbelianRSpec {
  double epsilon = 0.0;
  GeneratorField X1;
  GeneratorField X2;

  static constexpr double kCommuteTolerance = 1e-9;

  /// Throws ContractViolation unless the flows commute on a fixed sample of (s, t, x).
  AbelianRSpec(double eps, GeneratorField x1, GeneratorField x2);

  int dim() const { return X1.dim(); }
  RMatrixPart part() const;

  /// max || Phi1_s Phi2_t x - Phi2_t Phi1_s x || over the given (s, t, x) samples.
  double commutator_defect(const std::vector<std::tuple<double, double, Point>>& samples) const;
};

/// pi_M = r_M: components eps (X1^i X2^j - X1^j X2^i).
BivectorSpec r_bivector(const AbelianRSpec& r);

/// r_{T*M} built from cotangent lifts of the generators, on the 2n chart (x, p).
BivectorSpec lifted_r_bivector(const AbelianRSpec& r);

/// Canonical structure pi_0 on the 2n chart (x, p): {x^i, p_j} = delta^i_j.
BivectorSpec canonical_bivector(int n);

/// pi_0 + r_action evaluated at a T*M point: the full matrix of coordinate brackets.
Eigen::MatrixXd shifted_bracket(const BivectorSpec& r_action, const Point& xp);

/// The shifted structure pi_0 + r_action as a bivector in its own right.
BivectorSpec shifted_bivector(const BivectorSpec& r_action);

/// <p, X(x)>
double moment_J0(const Point& x, const Eigen::VectorXd& p, const GeneratorField& X);

struct MomentValue {
  double J1 = 0.0;
  double J2 = 0.0;
};

MomentValue moments(const AbelianRSpec& r, const Point& x, const Eigen::VectorXd& p);

enum class Side { left, right };

/// (x, p)_L = exp(-1/2 r J0(x, p)) x and (x, p)_R = exp(+1/2 r J0(x, p)) x, with r read
/// as the map mu -> eps (<mu, X2> X1 - <mu, X1> X2). Left is Phi^{X1}_{-(eps/2) J2} o Phi^{X2}_{+(eps/2) J1}.
Point groupoid_projection(const AbelianRSpec& r, const Point& x, const Eigen::VectorXd& p, Side side);

/// Same, with the moment values supplied by the caller.
Point groupoid_projection(const AbelianRSpec& r, const Point& x, const MomentValue& J, Side side);

/// Pointwise groupoid projection of a T*M trajectory (points laid out as (x, p)).
Curve project_trajectory(const AbelianRSpec& r, const Trajectory& traj, Side side);

/// Ordinary cotangent projection (x, p) -> x.
Curve base_projection(const Trajectory& traj);

}  // namespace poisym
