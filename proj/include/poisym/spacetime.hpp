#pragma once

#include <vector>

#include "poisym/bivector.hpp"
#include "poisym/flow.hpp"
#include "poisym/groupoid.hpp"

namespace poisym {

// ---------------------------------------------------------------------------
// Two-dimensional Minkowski space-time in light-cone coordinates x+- = x0 +- x1,
// with {x+, x-} = eps x+ x-.
// ---------------------------------------------------------------------------

struct Minkowski2DSpec {
  double epsilon = 0.0;
  double mass = 1.0;

  Minkowski2DSpec(double eps, double m);
};

/// Constants (alpha, beta) of one curve in the parametric family q+-(p).
struct ScatteringCurveSpec {
  double alpha = 0.0;
  double beta = 0.0;
};

BivectorSpec minkowski2d_bivector(const Minkowski2DSpec& spec);

/// r = eps (x+ d+) /\ (x- d-).
AbelianRSpec minkowski2d_r(const Minkowski2DSpec& spec);

/// Deformed light-cone momenta P+- = (2 / (eps q+-)) sinh(eps q+- p+- / 2); P+- -> p+- as eps -> 0.
std::array<double, 2> deformed_momenta(const Minkowski2DSpec& spec, const Point& qp);

/// Free hamiltonian P+ P- on the chart (q+, q-, p+, p-) with the canonical structure.
/// Its level set P+ P- = m^2 is the mass shell: the cotangent projections of its
/// characteristics are the q+-(p) curves and their left/right groupoid projections
/// are the hyperbolas (x+ - c+)(x- - c-) = -1/(eps m)^2.
ScalarField minkowski2d_free_hamiltonian(const Minkowski2DSpec& spec);

/// Phase point (q+, q-, p+, p-) on the shell P+ P- = m^2, given q+-, p+ (p- is solved for).
Point minkowski2d_shell_point(const Minkowski2DSpec& spec, double q_plus, double q_minus, double p_plus);

/// Curve constants and curve parameter of the shell trajectory through a phase point.
struct CurveLocation {
  ScatteringCurveSpec curve;
  double parameter = 0.0;
};
CurveLocation minkowski2d_curve_location(const Minkowski2DSpec& spec, const Point& qp);

/// Samples x- on the branch (x+ - c+)(x- - c-) = -1/(eps m)^2 for each x+ in the grid.
Curve hyperbola_curve(const Minkowski2DSpec& spec, double c_plus, double c_minus,
                      const std::vector<double>& x_plus_grid);

/// |(x+ - c+)(x- - c-) + 1/(eps m)^2| relative to 1/(eps m)^2.
double hyperbola_residual(const Minkowski2DSpec& spec, double c_plus, double c_minus, const Point& x);

/// Least-squares fit of (x+ - c+)(x- - c-) = C to a curve.
struct HyperbolaFit {
  double c_plus = 0.0;
  double c_minus = 0.0;
  double constant = 0.0;
  /// max over samples of |(x+ - c+)(x- - c-) - C| / |C|
  double constant_variation = 0.0;
};
HyperbolaFit fit_hyperbola(const Curve& curve);

/// q+(p) = e^alpha sinh(eps p/2)/((eps/2) m), q-(p) = e^-alpha sinh(eps (p - beta)/2)/((eps/2) m).
Curve parametric_trajectory_2d(const Minkowski2DSpec& spec, const ScatteringCurveSpec& curve,
                               const std::vector<double>& p_grid);

/// Odd monotone map T in v_in = T(alpha - eps beta/4), v_out = T(alpha + eps beta/4).
/// `hyperbolic` is what the p -> -+inf limits of the parametric curves produce;
/// `circular` evaluates the printed tan form.
enum class ScatteringMap { hyperbolic, circular };

struct ScatteringData {
  double v_in = 0.0;
  double v_out = 0.0;
};

ScatteringData scattering_data(const Minkowski2DSpec& spec, const ScatteringCurveSpec& curve,
                               ScatteringMap map = ScatteringMap::hyperbolic);

/// q1/q0 evaluated on the parametric curve at eps p = -+ reach (eps != 0),
/// or at p = -+1e10 in the undeformed case.
ScatteringData scattering_limits_numerical(const Minkowski2DSpec& spec, const ScatteringCurveSpec& curve,
                                           double reach = 40.0);

/// max over the grid of the distance between the deformed and undeformed parametric curves.
double minkowski2d_limit_deviation(const Minkowski2DSpec& spec, const ScatteringCurveSpec& curve,
                                   const std::vector<double>& p_grid);

// ---------------------------------------------------------------------------
// kappa-deformation: pi_M = eps d0 /\ sum_k x^k d_k.
// ---------------------------------------------------------------------------

struct KappaSpec {
  double epsilon = 0.0;
  int spatial_dim = 3;

  KappaSpec(double eps, int spatial);
  int dim() const { return spatial_dim + 1; }
};

BivectorSpec kappa_bivector(const KappaSpec& spec);

/// X1 = d0 (translation), X2 = sum_k x^k d_k (spatial scaling).
AbelianRSpec kappa_r(const KappaSpec& spec);

enum class ProfileProjection { ordinary, left, right };

struct ProfileRow {
  double momentum = 0.0;
  double velocity = 0.0;
};

struct ProfileOptions {
  int samples = 64;
  double duration = 10.0;  // proper-time span of the sampled free line
};

/// Coordinate velocity |dx/dx0| against spatial momentum magnitude for free motion on the
/// shell p^2 = m^2, seen through the chosen projection. The velocity is the least-squares
/// slope over the last quarter of the samples. Rows are sorted by momentum.
std::vector<ProfileRow> velocity_momentum_profile(const KappaSpec& spec, double mass, ProfileProjection projection,
                                                  std::vector<double> momentum_grid, const ProfileOptions& options = {});

/// True when velocities are finite and non-decreasing along the (sorted) profile.
bool is_monotonic(const std::vector<ProfileRow>& profile);

/// max over the grid of |v(eps) - p/sqrt(p^2 + m^2)| for the chosen projection.
double kappa_limit_deviation(const KappaSpec& spec, double mass, ProfileProjection projection,
                             const std::vector<double>& momentum_grid);

}  // namespace poisym
