#include "poisym/su2_free_motion.hpp"

#include <cmath>

#include "poisym/errors.hpp"
#include "poisym/numeric.hpp"

namespace poisym {

namespace {

constexpr cplx kI(0.0, 1.0);

void require_deformed(FreeHamiltonian kind, double epsilon) {
  if (kind != FreeHamiltonian::standard && epsilon == 0.0)
    throw ContractViolation("H' and H'' are singular at eps = 0 on SL(2, C); use the linear-momentum form");
}

}  // namespace

SL2CBracketTable sl2c_bracket_table(const Mat2& A, double epsilon) {
  const cplx a = A(0, 0), b = A(0, 1), c = A(1, 0), d = A(1, 1);
  const cplx ie = kI * epsilon;
  enum { ia, ib, ic, id };
  SL2CBracketTable t;

  auto& h = t.holomorphic;
  auto set_h = [&h](int i, int j, cplx v) {
    h[i][j] = v;
    h[j][i] = -v;
  };
  set_h(ia, ib, -ie * a * b);
  set_h(ia, ic, ie * a * c);
  set_h(ia, id, 0.0);
  set_h(ib, ic, 2.0 * ie * a * d);
  set_h(ib, id, ie * b * d);
  set_h(ic, id, -ie * c * d);

  auto& m = t.mixed;
  m[ia][ia] = ie * (std::norm(a) + 2.0 * std::norm(c));
  m[ib][ib] = ie * (std::norm(b) + 2.0 * std::norm(a) + 2.0 * std::norm(d));
  m[ic][ic] = ie * std::norm(c);
  m[id][id] = ie * (std::norm(d) + 2.0 * std::norm(c));
  m[ib][ia] = 2.0 * ie * c * std::conj(d);
  m[ic][ia] = 0.0;
  m[id][ia] = -ie * a * std::conj(d);
  m[ic][ib] = -ie * b * std::conj(c);
  m[id][ib] = 2.0 * ie * a * std::conj(c);
  m[id][ic] = 0.0;
  // {conj x, y} = -conj({conj y, x})
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) m[i][j] = -std::conj(m[j][i]);
  return t;
}

BivectorSpec sl2c_bivector(double epsilon) {
  std::vector<std::string> names = {"Re a", "Im a", "Re b", "Im b", "Re c", "Im c", "Re d", "Im d"};
  return BivectorSpec(std::move(names), [epsilon](const Point& v, Eigen::MatrixXd& P) {
    const SL2CBracketTable t = sl2c_bracket_table(matrix_from_real(v), epsilon);
    // With z = u + i v:  {z_i, z_j} = h,  {conj z_i, z_j} = m  give
    // {u_i, u_j} = Re(h + m)/2, {v_i, v_j} = Re(m - h)/2, {u_i, v_j} = Im(h + m)/2, {v_i, u_j} = Im(h - m)/2.
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        const cplx h = t.holomorphic[i][j];
        const cplx m = t.mixed[i][j];
        P(2 * i, 2 * j) = 0.5 * (h + m).real();
        P(2 * i + 1, 2 * j + 1) = 0.5 * (m - h).real();
        P(2 * i, 2 * j + 1) = 0.5 * (h + m).imag();
        P(2 * i + 1, 2 * j) = 0.5 * (h - m).imag();
      }
    }
  });
}

double free_hamiltonian(const Mat2& A) { return 0.5 * A.squaredNorm(); }

double hamiltonian_value(FreeHamiltonian kind, double H, double epsilon) {
  switch (kind) {
    case FreeHamiltonian::standard:
      return H;
    case FreeHamiltonian::symplectomorphic: {
      require_deformed(kind, epsilon);
      const double r = std::acosh(H) / (2.0 * epsilon);
      return 0.5 * r * r;
    }
    case FreeHamiltonian::normalized:
      require_deformed(kind, epsilon);
      return (H - 1.0) / (4.0 * epsilon * epsilon);
  }
  return H;
}

double hamiltonian_rate(FreeHamiltonian kind, double H, double epsilon) {
  switch (kind) {
    case FreeHamiltonian::standard:
      return 1.0;
    case FreeHamiltonian::symplectomorphic:
      require_deformed(kind, epsilon);
      // d/dH of 1/2 (arcosh H / 2 eps)^2 = arcosh(H) / (4 eps^2 sqrt(H^2 - 1))
      return 1.0 / (4.0 * epsilon * epsilon * sinhc(std::acosh(std::max(H, 1.0))));
    case FreeHamiltonian::normalized:
      require_deformed(kind, epsilon);
      return 1.0 / (4.0 * epsilon * epsilon);
  }
  return 1.0;
}

ScalarField free_hamiltonian_field(FreeHamiltonian kind, double epsilon) {
  require_deformed(kind, epsilon);
  return ScalarField(
      [kind, epsilon](const Point& v) { return hamiltonian_value(kind, 0.5 * v.squaredNorm(), epsilon); },
      [kind, epsilon](const Point& v) {
        return (hamiltonian_rate(kind, 0.5 * v.squaredNorm(), epsilon) * v).eval();
      });
}

Mat2 flow_rhs(const Mat2& A, double epsilon, FreeHamiltonian kind) {
  const Mat2& Y = y_matrix();
  const double H = free_hamiltonian(A);
  const double rate = hamiltonian_rate(kind, H, epsilon);
  return rate * kI * epsilon * (H * A + Y * A.conjugate() * Y);
}

Mat2 legendre_velocity(const SB2Element& B, double epsilon, double H) {
  const Mat2& Y = y_matrix();
  return kI * epsilon * (H * Mat2::Identity() + Y * B.matrix().conjugate() * Y * B.inverse());
}

Mat2 body_velocity(const SB2Element& B, double epsilon, FreeHamiltonian kind) {
  const double H = free_hamiltonian(B.matrix());
  return hamiltonian_rate(kind, H, epsilon) * legendre_velocity(B, epsilon, H);
}

Mat2 closed_form_motion(const SU2Element& u0, const SB2Element& B0, double epsilon, double t,
                        FreeHamiltonian kind) {
  return u0.matrix() * expm2(t * body_velocity(B0, epsilon, kind)) * B0.matrix();
}

Trajectory integrate_free_motion(const SL2CElement& A0, double epsilon, const FreeMotionOptions& options,
                                 double t_end) {
  const BivectorSpec biv = sl2c_bivector(epsilon);
  const ScalarField H = free_hamiltonian_field(options.kind, epsilon);
  const double threshold = options.renormalize_above;
  const StepProjection renormalize = [threshold](Point& v) {
    Mat2 A = matrix_from_real(v);
    const cplx det = A.determinant();
    const double deviation = std::abs(det - 1.0);
    if (deviation <= threshold) return ProjectionOutcome{deviation, false};
    A /= std::sqrt(det);
    v = real_from_matrix(A);
    return ProjectionOutcome{deviation, true};
  };
  return integrate_flow(biv, H, A0.to_real(), t_end, options.step, renormalize);
}

double LinearMomentum::radius() const { return std::sqrt(x * x + y * y + z * z); }

MomentumBrackets momentum_bracket(const MomentumPoint& pt, double epsilon) {
  // sinh(2 eps zeta) / eps = 2 zeta sinhc(2 eps zeta)
  return {-kI * pt.w, kI * 2.0 * pt.zeta * sinhc(2.0 * epsilon * pt.zeta)};
}

BivectorSpec momentum_bivector(double epsilon) {
  return BivectorSpec::from_components(
      {"zeta", "Re w", "Im w"},
      {{0, 1, [](const Point& p) { return p[2]; }},
       {0, 2, [](const Point& p) { return -p[1]; }},
       {1, 2, [epsilon](const Point& p) { return p[0] * sinhc(2.0 * epsilon * p[0]); }}});
}

BivectorSpec linear_bivector() {
  return BivectorSpec::from_components({"x", "y", "z"}, {{0, 1, [](const Point& p) { return p[2]; }},
                                                         {0, 2, [](const Point& p) { return -p[1]; }},
                                                         {1, 2, [](const Point& p) { return p[0]; }}});
}

namespace {

// (1/eps) sqrt((sinh^2 eps r - sinh^2 eps z) / (r^2 - z^2)), using
// sinh^2 A - sinh^2 B = sinh(A + B) sinh(A - B); regular on r = |z| and at eps = 0.
double isomorphism_factor(double r_plus_z, double r_minus_z, double epsilon) {
  return std::sqrt(sinhc(epsilon * r_plus_z) * sinhc(epsilon * r_minus_z));
}

std::pair<double, double> radial_sums(double r, double z, double planar2) {
  // r + z and r - z with the cancelling one rebuilt from planar2 = r^2 - z^2.
  if (z >= 0.0) {
    const double s = r + z;
    return {s, s > 0.0 ? planar2 / s : 0.0};
  }
  const double d = r - z;
  return {d > 0.0 ? planar2 / d : 0.0, d};
}

}  // namespace

MomentumPoint momentum_isomorphism(const LinearMomentum& lin, double epsilon) {
  const double planar2 = lin.x * lin.x + lin.y * lin.y;
  const double r = lin.radius();
  const auto [rpz, rmz] = radial_sums(r, lin.z, planar2);
  const double f = isomorphism_factor(rpz, rmz, epsilon);
  return {lin.z, f * cplx(lin.x, lin.y)};
}

LinearMomentum momentum_isomorphism_inverse(const MomentumPoint& pt, double epsilon) {
  const double R = std::sqrt(casimir_R2(pt, epsilon));
  const double r = R * asinhc(epsilon * R);
  const double z = pt.zeta;
  const double planar2 = std::max(0.0, (r - z) * (r + z));
  const auto [rpz, rmz] = radial_sums(r, z, planar2);
  const double f = isomorphism_factor(std::max(rpz, 0.0), std::max(rmz, 0.0), epsilon);
  const cplx planar = pt.w / f;
  return {planar.real(), planar.imag(), z};
}

double casimir_R2(const MomentumPoint& pt, double epsilon) {
  const double s = pt.zeta * sinhc(epsilon * pt.zeta);
  return std::norm(pt.w) + s * s;
}

SB2Element sb2_from_momentum(const MomentumPoint& pt, double epsilon) {
  return SB2Element(std::exp(epsilon * pt.zeta), 2.0 * epsilon * pt.w);
}

MomentumPoint momentum_from_sb2(const SB2Element& B, double epsilon) {
  if (epsilon == 0.0) throw NumericDomainError("momentum coordinates (zeta, w) are undefined at eps = 0");
  return {std::log(B.rho()) / epsilon, B.n() / (2.0 * epsilon)};
}

Mat2 body_velocity_from_linear(const LinearMomentum& lin, double epsilon, FreeHamiltonian kind) {
  if (epsilon != 0.0) return body_velocity(sb2_from_momentum(momentum_isomorphism(lin, epsilon), epsilon), epsilon, kind);
  if (kind == FreeHamiltonian::standard) return Mat2::Zero();
  Mat2 m;
  m << lin.z, cplx(lin.x, lin.y), cplx(lin.x, -lin.y), -lin.z;
  return 0.5 * kI * m;
}

HamiltonianSet hamiltonian_relations(RelationInput input, double value, double epsilon) {
  if (!std::isfinite(value)) throw NumericDomainError("hamiltonian_relations: non-finite input");
  HamiltonianSet out;
  double R2 = 0.0;
  switch (input) {
    case RelationInput::H:
      if (value < 1.0) throw NumericDomainError("hamiltonian_relations: H < 1 is impossible for det A = 1");
      if (epsilon == 0.0) throw NumericDomainError("hamiltonian_relations: H carries no momentum at eps = 0");
      R2 = (value - 1.0) / (2.0 * epsilon * epsilon);
      break;
    case RelationInput::h: {
      if (value < 0.0) throw NumericDomainError("hamiltonian_relations: h must be non-negative");
      const double r = std::sqrt(2.0 * value);
      const double R = r * sinhc(epsilon * r);
      R2 = R * R;
      break;
    }
    case RelationInput::R2:
      if (value < 0.0) throw NumericDomainError("hamiltonian_relations: R^2 must be non-negative");
      R2 = value;
      break;
    case RelationInput::H2:
      if (value < 0.0) throw NumericDomainError("hamiltonian_relations: H'' must be non-negative");
      R2 = 2.0 * value;
      break;
  }
  const double R = std::sqrt(R2);
  const double r = R * asinhc(epsilon * R);
  out.R2 = R2;
  out.H2 = 0.5 * R2;
  out.H = input == RelationInput::H ? value : 1.0 + 2.0 * epsilon * epsilon * R2;
  out.h = input == RelationInput::h ? value : 0.5 * r * r;
  out.H_prime = out.h;
  if (input == RelationInput::R2) out.R2 = value;
  if (input == RelationInput::H2) out.H2 = value;
  return out;
}

}  // namespace poisym
