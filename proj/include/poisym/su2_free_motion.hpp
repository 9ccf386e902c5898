#pragma once

#include <array>

#include "poisym/bivector.hpp"
#include "poisym/flow.hpp"
#include "poisym/sl2c.hpp"

namespace poisym {

/// Coordinate brackets of the symplectic structure on SL(2, C) at a point, indexed
/// 0..3 for a, b, c, d: holomorphic[i][j] = {z_i, z_j}, mixed[i][j] = {conj(z_i), z_j}.
///
/// The ten listed mixed entries ({conj a, a}, {conj b, a}, ...) are taken verbatim; the
/// remaining six follow from reality of the structure, {conj x, y} = -conj({conj y, x}).
/// No pair is left undetermined by that rule.
struct SL2CBracketTable {
  std::array<std::array<cplx, 4>, 4> holomorphic{};
  std::array<std::array<cplx, 4>, 4> mixed{};
};

SL2CBracketTable sl2c_bracket_table(const Mat2& A, double epsilon);

/// The table expanded over the real chart (Re a, Im a, ..., Re d, Im d).
BivectorSpec sl2c_bivector(double epsilon);

/// H = 1/2 tr A^dagger A.
double free_hamiltonian(const Mat2& A);

/// Biinvariant hamiltonians in use: H itself, H' = 1/2 (arcosh(H) / 2 eps)^2, and
/// H'' = (H - 1) / (4 eps^2). All generate the same trajectories up to a constant
/// rescaling of time by f'(H).
enum class FreeHamiltonian { standard, symplectomorphic, normalized };

double hamiltonian_value(FreeHamiltonian kind, double H, double epsilon);
/// d f / d H for the chosen kind (1 for the standard one).
double hamiltonian_rate(FreeHamiltonian kind, double H, double epsilon);

/// The chosen hamiltonian as a field on the real 8-chart, with analytic gradient.
ScalarField free_hamiltonian_field(FreeHamiltonian kind, double epsilon);

/// dA/dt = i eps (H A + Y conj(A) Y) (times f'(H) for the non-standard kinds).
Mat2 flow_rhs(const Mat2& A, double epsilon, FreeHamiltonian kind = FreeHamiltonian::standard);

/// Omega = i eps (H I + Y conj(B) Y B^-1), the constant body velocity u^-1 du/dt.
Mat2 legendre_velocity(const SB2Element& B, double epsilon, double H);

/// Body velocity for the chosen hamiltonian, with H evaluated at B.
Mat2 body_velocity(const SB2Element& B, double epsilon, FreeHamiltonian kind);

/// A(t) = u0 exp(t Omega) B0.
Mat2 closed_form_motion(const SU2Element& u0, const SB2Element& B0, double epsilon, double t,
                        FreeHamiltonian kind = FreeHamiltonian::standard);

struct FreeMotionOptions {
  StepControl step{};
  FreeHamiltonian kind = FreeHamiltonian::standard;
  /// Renormalize A by det(A)^(-1/2) after a step once |det A - 1| exceeds this.
  double renormalize_above = 1e-10;
};

/// Integrates the free flow on the real 8-chart through the bracket table. The
/// trajectory's projection_times list every renormalization event and
/// max_projection_deviation is the largest |det A - 1| seen before correction.
Trajectory integrate_free_motion(const SL2CElement& A0, double epsilon, const FreeMotionOptions& options,
                                 double t_end);

// ---------------------------------------------------------------------------
// Momentum space SB(2): coordinates rho = e^{eps zeta}, n = 2 eps w, and the
// linear su(2)* coordinates (x, y, z).
// ---------------------------------------------------------------------------

struct MomentumPoint {
  double zeta = 0.0;
  cplx w{};
};

struct LinearMomentum {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double radius() const;
};

struct MomentumBrackets {
  cplx zeta_w;  // {zeta, w} = -i w
  cplx wbar_w;  // {conj w, w} = i sinh(2 eps zeta) / eps
};

MomentumBrackets momentum_bracket(const MomentumPoint& pt, double epsilon);

/// Bivector on (zeta, Re w, Im w).
BivectorSpec momentum_bivector(double epsilon);

/// Linear structure on (x, y, z): {x, y} = z, {z, x} = y, {z, y} = -x.
BivectorSpec linear_bivector();

/// zeta = z, w = (1/eps) sqrt((sinh^2 eps r - sinh^2 eps z) / (r^2 - z^2)) (x + i y).
MomentumPoint momentum_isomorphism(const LinearMomentum& lin, double epsilon);
LinearMomentum momentum_isomorphism_inverse(const MomentumPoint& pt, double epsilon);

/// R^2 = |w|^2 + (sinh(eps zeta) / eps)^2.
double casimir_R2(const MomentumPoint& pt, double epsilon);

SB2Element sb2_from_momentum(const MomentumPoint& pt, double epsilon);
MomentumPoint momentum_from_sb2(const SB2Element& B, double epsilon);

/// Body velocity for momentum given in linear coordinates. At eps = 0 this is the
/// undeformed limit (i/2)((z, x + i y), (x - i y, -z)) for H' and H'', and 0 for H.
Mat2 body_velocity_from_linear(const LinearMomentum& lin, double epsilon, FreeHamiltonian kind);

enum class RelationInput { H, h, R2, H2 };

struct HamiltonianSet {
  double H = 1.0;        // 1/2 tr A^dagger A
  double h = 0.0;        // 1/2 r^2
  double R2 = 0.0;       // Casimir of the momentum structure
  double H2 = 0.0;       // H'' = R^2 / 2
  double H_prime = 0.0;  // 1/2 (arcosh(H) / 2 eps)^2, equal to h
};

/// Closed-form conversions H = 1 + 2 eps^2 R^2 = cosh(2 eps sqrt(2 h)), eps R = sinh(eps r).
HamiltonianSet hamiltonian_relations(RelationInput input, double value, double epsilon);

}  // namespace poisym
