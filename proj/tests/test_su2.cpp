#include <gtest/gtest.h>

#include <cmath>

#include "poisym/errors.hpp"
#include "poisym/flow.hpp"
#include "poisym/numeric.hpp"
#include "poisym/sl2c.hpp"
#include "poisym/su2_free_motion.hpp"
#include "test_support.hpp"

using namespace poisym;
using poisym::testing::random_unimodular;

namespace {

const cplx I(0.0, 1.0);

Mat2 diag(cplx a, cplx d) {
  Mat2 m = Mat2::Zero();
  m(0, 0) = a;
  m(1, 1) = d;
  return m;
}

double max_abs(const Mat2& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Iwasawa, IdentityFactors) {
  const IwasawaFactors f = iwasawa(SL2CElement::identity());
  EXPECT_LT(max_abs(f.u.matrix() - Mat2::Identity()), 1e-15);
  EXPECT_LT(max_abs(f.B.matrix() - Mat2::Identity()), 1e-15);
}

TEST(Iwasawa, UpperTriangularIsItsOwnMomentum) {
  const SB2Element B(2.5, cplx(0.3, -0.7));
  const IwasawaFactors f = iwasawa(SL2CElement(B.matrix()));
  EXPECT_LT(max_abs(f.u.matrix() - Mat2::Identity()), 1e-15);
  EXPECT_LT(max_abs(f.B.matrix() - B.matrix()), 1e-15);
}

TEST(Iwasawa, RoundTripOnRandomProducts) {
  SampleGenerator rng(51);
  for (int i = 0; i < 1000; ++i) {
    const Eigen::VectorXd v = rng.box(3);
    const SU2Element u = SU2Element::from_rotation(v[0], v[1], v[2]);
    const SB2Element B(std::exp(rng.uniform(-1, 1)), cplx(rng.uniform(-1, 1), rng.uniform(-1, 1)));
    const IwasawaFactors f = iwasawa(SL2CElement(u.matrix() * B.matrix()));
    ASSERT_LT(max_abs(f.u.matrix() - u.matrix()), 1e-10);
    ASSERT_LT(std::abs(f.B.rho() - B.rho()), 1e-10);
    ASSERT_LT(std::abs(f.B.n() - B.n()), 1e-10);
  }
}

TEST(Iwasawa, Preconditions) {
  EXPECT_THROW(SL2CElement(diag(2.0, 2.0)), ContractViolation);
  EXPECT_THROW(SB2Element(0.0, 0.0), ContractViolation);
  EXPECT_THROW(SU2Element(cplx(1.0, 0.0), cplx(0.1, 0.0)), ContractViolation);
}

TEST(Y, IntertwinesConjugationOnSU2) {
  SampleGenerator rng(52);
  const Mat2& Y = y_matrix();
  EXPECT_LT(max_abs(Y * Y + Mat2::Identity()), 1e-15);
  for (int i = 0; i < 20; ++i) {
    const Eigen::VectorXd v = rng.box(3);
    const Mat2 u = SU2Element::from_rotation(v[0], v[1], v[2]).matrix();
    EXPECT_LT(max_abs(Y * u.conjugate() - u * Y), 1e-14);
  }
}

TEST(Expm2, MatchesTaylorSeries) {
  SampleGenerator rng(53);
  for (int i = 0; i < 20; ++i) {
    Mat2 m;
    for (int k = 0; k < 4; ++k) m(k / 2, k % 2) = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
    Mat2 term = Mat2::Identity(), sum = Mat2::Identity();
    for (int k = 1; k < 40; ++k) {
      term = term * m / static_cast<double>(k);
      sum += term;
    }
    EXPECT_LT(max_abs(expm2(m) - sum), 1e-13);
  }
  EXPECT_LT(max_abs(expm2(Mat2::Zero()) - Mat2::Identity()), 1e-16);
}

TEST(BracketTable, ListedZeros) {
  SampleGenerator rng(54);
  for (int i = 0; i < 10; ++i) {
    const SL2CBracketTable t = sl2c_bracket_table(random_unimodular(rng).matrix(), 0.4);
    EXPECT_EQ(t.holomorphic[0][3], cplx(0.0));  // {a, d}
    EXPECT_EQ(t.mixed[3][2], cplx(0.0));        // {conj d, c}
  }
}

TEST(BracketTable, ValuesAtIdentity) {
  const double eps = 0.3;
  const SL2CBracketTable t = sl2c_bracket_table(Mat2::Identity(), eps);
  EXPECT_LT(std::abs(t.holomorphic[1][2] - 2.0 * I * eps), 1e-15);  // {b, c}
  EXPECT_LT(std::abs(t.mixed[0][0] - I * eps), 1e-15);              // {conj a, a}
  EXPECT_LT(std::abs(t.mixed[1][1] - 4.0 * I * eps), 1e-15);        // {conj b, b}
}

TEST(BracketTable, HolomorphicPartIsAntisymmetric) {
  SampleGenerator rng(55);
  const SL2CBracketTable t = sl2c_bracket_table(random_unimodular(rng).matrix(), 0.7);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      EXPECT_EQ(t.holomorphic[i][j], -t.holomorphic[j][i]);
      EXPECT_LT(std::abs(t.mixed[i][j] + std::conj(t.mixed[j][i])), 1e-15);
    }
}

TEST(BracketTable, RealifiedBivectorReproducesComplexBrackets) {
  SampleGenerator rng(56);
  const double eps = 0.45;
  const BivectorSpec biv = sl2c_bivector(eps);
  for (int n = 0; n < 10; ++n) {
    const SL2CElement A = random_unimodular(rng);
    const Eigen::MatrixXd P = biv.matrix(A.to_real());
    const SL2CBracketTable t = sl2c_bracket_table(A.matrix(), eps);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        // {z_i, z_j} = {x_i, x_j} - {y_i, y_j} + i({x_i, y_j} + {y_i, x_j})
        const cplx hol(P(2 * i, 2 * j) - P(2 * i + 1, 2 * j + 1), P(2 * i, 2 * j + 1) + P(2 * i + 1, 2 * j));
        // {conj z_i, z_j} = {x_i, x_j} + {y_i, y_j} + i({x_i, y_j} - {y_i, x_j})
        const cplx mix(P(2 * i, 2 * j) + P(2 * i + 1, 2 * j + 1), P(2 * i, 2 * j + 1) - P(2 * i + 1, 2 * j));
        EXPECT_LT(std::abs(hol - t.holomorphic[i][j]), 1e-13);
        EXPECT_LT(std::abs(mix - t.mixed[i][j]), 1e-13);
      }
  }
}

TEST(BracketTable, JacobiAtUnimodularPoints) {
  SampleGenerator rng(57);
  std::vector<Point> pts;
  for (int i = 0; i < 100; ++i) pts.push_back(random_unimodular(rng).to_real());
  EXPECT_LT(jacobi_certificate(sl2c_bivector(0.35), pts).max_residual, 1e-6);
}

TEST(BracketTable, DeterminantIsCasimir) {
  SampleGenerator rng(58);
  const BivectorSpec biv = sl2c_bivector(0.5);
  const ScalarField re_det([](const Point& v) { return matrix_from_real(v).determinant().real(); });
  const ScalarField im_det([](const Point& v) { return matrix_from_real(v).determinant().imag(); });
  for (int i = 0; i < 20; ++i) {
    const Point x = rng.box(8);
    for (int k = 0; k < 8; ++k) {
      EXPECT_NEAR(eval_bracket(biv, re_det, ScalarField::coordinate(k), x), 0.0, 1e-8);
      EXPECT_NEAR(eval_bracket(biv, im_det, ScalarField::coordinate(k), x), 0.0, 1e-8);
    }
  }
}

TEST(FreeHamiltonian, Values) {
  EXPECT_DOUBLE_EQ(free_hamiltonian(Mat2::Identity()), 1.0);
  EXPECT_DOUBLE_EQ(free_hamiltonian(diag(3.0, 1.0 / 3.0)), 0.5 * (9.0 + 1.0 / 9.0));
}

TEST(FreeHamiltonian, Biinvariance) {
  SampleGenerator rng(59);
  for (int i = 0; i < 100; ++i) {
    const Mat2 A = random_unimodular(rng).matrix();
    const Eigen::VectorXd v = rng.box(3), w = rng.box(3);
    const Mat2 u1 = SU2Element::from_rotation(v[0], v[1], v[2]).matrix();
    const Mat2 u2 = SU2Element::from_rotation(w[0], w[1], w[2]).matrix();
    EXPECT_LT(std::abs(free_hamiltonian(u1 * A * u2) - free_hamiltonian(A)), 1e-10);
  }
}

TEST(FlowRhs, SU2IsEquilibrium) {
  SampleGenerator rng(60);
  for (int i = 0; i < 100; ++i) {
    const Eigen::VectorXd v = rng.box(3);
    EXPECT_LT(flow_rhs(SU2Element::from_rotation(v[0], v[1], v[2]).matrix(), 0.7).norm(), 1e-12);
  }
}

TEST(FlowRhs, DiagonalExample) {
  const Mat2 rhs = flow_rhs(diag(2.0, 0.5), 1.0);
  EXPECT_LT(max_abs(rhs - I * diag(17.0 / 4 - 0.5, 17.0 / 16 - 2.0)), 1e-14);
}

TEST(FlowRhs, AgreesWithBracketTableField) {
  SampleGenerator rng(61);
  for (FreeHamiltonian kind :
       {FreeHamiltonian::standard, FreeHamiltonian::symplectomorphic, FreeHamiltonian::normalized}) {
    const double eps = 0.25;
    const BivectorSpec biv = sl2c_bivector(eps);
    const ScalarField H = free_hamiltonian_field(kind, eps);
    for (int i = 0; i < 100; ++i) {
      const SL2CElement A = random_unimodular(rng);
      const Eigen::VectorXd field = hamiltonian_vector_field(biv, H, A.to_real());
      EXPECT_LT((field - real_from_matrix(flow_rhs(A.matrix(), eps, kind))).cwiseAbs().maxCoeff(), 1e-6);
    }
  }
}

TEST(FlowRhs, DeformedKindsNeedNonzeroEpsilon) {
  EXPECT_THROW(flow_rhs(Mat2::Identity(), 0.0, FreeHamiltonian::normalized), ContractViolation);
  EXPECT_THROW(free_hamiltonian_field(FreeHamiltonian::symplectomorphic, 0.0), ContractViolation);
}

TEST(Legendre, RestSolution) {
  EXPECT_LT(max_abs(legendre_velocity(SB2Element::identity(), 0.4, 1.0)), 1e-15);
}

TEST(Legendre, DiagonalMomentum) {
  const double eps = 0.3, rho = 1.6;
  const double H = 0.5 * (rho * rho + 1.0 / (rho * rho));
  const Mat2 omega = legendre_velocity(SB2Element(rho, 0.0), eps, H);
  EXPECT_LT(max_abs(omega - I * eps * diag(H - 1.0 / (rho * rho), H - rho * rho)), 1e-14);
  EXPECT_LT(std::abs(omega.trace()), 1e-14);
}

TEST(Legendre, BodyVelocityIsInSu2) {
  SampleGenerator rng(62);
  for (int i = 0; i < 50; ++i) {
    const SB2Element B(std::exp(rng.uniform(-1, 1)), cplx(rng.uniform(-1, 1), rng.uniform(-1, 1)));
    const Mat2 omega = body_velocity(B, 0.3, FreeHamiltonian::standard);
    EXPECT_LT(max_abs(omega + omega.adjoint()), 1e-13);
    EXPECT_LT(std::abs(omega.trace()), 1e-13);
  }
}

TEST(FreeMotion, IntegratorMatchesClosedForm) {
  SampleGenerator rng(63);
  for (int i = 0; i < 5; ++i) {
    const SL2CElement A0 = random_unimodular(rng);
    const IwasawaFactors f = iwasawa(A0);
    const Trajectory traj = integrate_free_motion(A0, 0.2, {}, 1.0);
    EXPECT_LT((matrix_from_real(traj.points.back()) - closed_form_motion(f.u, f.B, 0.2, 1.0)).norm(), 1e-7);
    EXPECT_LT(traj.max_projection_deviation, 1e-8);
  }
}

TEST(FreeMotion, HamiltonianKindsRescaleTime) {
  const double eps = 0.3;
  const SL2CElement A0(SU2Element::from_rotation(0.1, 0.2, 0.3).matrix() * SB2Element(1.4, cplx(0.2, 0.5)).matrix());
  const IwasawaFactors f = iwasawa(A0);
  const double H = free_hamiltonian(A0.matrix());
  for (FreeHamiltonian kind : {FreeHamiltonian::symplectomorphic, FreeHamiltonian::normalized}) {
    const double rate = hamiltonian_rate(kind, H, eps);
    EXPECT_LT(max_abs(body_velocity(f.B, eps, kind) - rate * body_velocity(f.B, eps, FreeHamiltonian::standard)), 1e-14);
    FreeMotionOptions options;
    options.kind = kind;
    const Trajectory traj = integrate_free_motion(A0, eps, options, 0.5);
    EXPECT_LT((matrix_from_real(traj.points.back()) - closed_form_motion(f.u, f.B, eps, 0.5, kind)).norm(), 1e-7);
  }
}

TEST(FreeMotion, RenormalizationKeepsUnimodular) {
  const SL2CElement A0(SU2Element::from_rotation(0.3, 0.0, 0.1).matrix() * SB2Element(2.0, cplx(1.0, 0.5)).matrix());
  FreeMotionOptions options;
  options.step = {0.05, 1e-3};
  options.renormalize_above = 1e-12;
  const Trajectory traj = integrate_free_motion(A0, 0.5, options, 5.0);
  EXPECT_FALSE(traj.projection_times.empty());
  for (const Point& v : traj.points) EXPECT_LT(std::abs(matrix_from_real(v).determinant() - 1.0), 1e-12);
}

TEST(FreeMotion, UndeformedLimitOfBodyVelocity) {
  const LinearMomentum lin{0.3, -0.2, 0.5};
  const Mat2 limit = body_velocity_from_linear(lin, 0.0, FreeHamiltonian::normalized);
  Mat2 expected;
  expected << cplx(0.5, 0), cplx(0.3, -0.2), cplx(0.3, 0.2), cplx(-0.5, 0);
  expected *= 0.5 * I;
  EXPECT_LT(max_abs(limit - expected), 1e-15);
  std::vector<double> eps{1e-2, 5e-3, 2.5e-3}, dev;
  for (double e : eps) dev.push_back(max_abs(body_velocity_from_linear(lin, e, FreeHamiltonian::normalized) - expected));
  EXPECT_GT(dev[0], 0.0);
  EXPECT_NEAR(loglog_slope(eps, dev), 1.0, 0.2);
}

TEST(MomentumBracket, Zeros) {
  EXPECT_EQ(momentum_bracket({0.4, cplx(0.0)}, 0.3).zeta_w, cplx(0.0));
  EXPECT_EQ(momentum_bracket({0.0, cplx(0.2, 0.1)}, 0.3).wbar_w, cplx(0.0));
}

TEST(MomentumBracket, LinearLimit) {
  const double zeta = 0.7;
  const MomentumBrackets b = momentum_bracket({zeta, cplx(0.2, 0.1)}, 1e-6);
  EXPECT_LT(std::abs(b.wbar_w - 2.0 * I * zeta), 1e-9);
}

TEST(MomentumBracket, BivectorMatchesComplexBrackets) {
  SampleGenerator rng(64);
  const double eps = 0.6;
  const BivectorSpec biv = momentum_bivector(eps);
  for (int i = 0; i < 20; ++i) {
    const Point x = rng.box(3);
    const Eigen::MatrixXd P = biv.matrix(x);
    const MomentumBrackets b = momentum_bracket({x[0], cplx(x[1], x[2])}, eps);
    EXPECT_LT(std::abs(cplx(P(0, 1), P(0, 2)) - b.zeta_w), 1e-14);
    EXPECT_LT(std::abs(cplx(0.0, 2.0 * P(1, 2)) - b.wbar_w), 1e-14);
  }
}

TEST(MomentumIsomorphism, EquatorialPlane) {
  const double eps = 0.4, x = 0.6, y = -0.8;
  const double r = 1.0;
  const MomentumPoint m = momentum_isomorphism({x, y, 0.0}, eps);
  EXPECT_EQ(m.zeta, 0.0);
  EXPECT_LT(std::abs(m.w - (std::sinh(eps * r) / (eps * r)) * cplx(x, y)), 1e-15);
}

TEST(MomentumIsomorphism, IdentityInTheLimit) {
  const LinearMomentum lin{0.4, 0.1, 0.7};
  const MomentumPoint m = momentum_isomorphism(lin, 1e-8);
  EXPECT_NEAR(m.zeta, 0.7, 1e-14);
  EXPECT_LT(std::abs(m.w - cplx(0.4, 0.1)), 1e-12);
}

TEST(MomentumIsomorphism, RoundTrip) {
  SampleGenerator rng(65);
  for (int i = 0; i < 100; ++i) {
    const Eigen::VectorXd v = rng.box(3);
    const LinearMomentum lin{v[0], v[1], v[2]};
    const LinearMomentum back = momentum_isomorphism_inverse(momentum_isomorphism(lin, 0.7), 0.7);
    EXPECT_NEAR(back.x, lin.x, 1e-12);
    EXPECT_NEAR(back.y, lin.y, 1e-12);
    EXPECT_NEAR(back.z, lin.z, 1e-12);
  }
}

TEST(MomentumIsomorphism, PushforwardAtReferencePoint) {
  const double eps = 0.3;
  const auto iso = [eps](const Point& x) -> Eigen::VectorXd {
    const MomentumPoint m = momentum_isomorphism({x[0], x[1], x[2]}, eps);
    return Eigen::Vector3d(m.zeta, m.w.real(), m.w.imag());
  };
  Point x(3);
  x << 0.4, 0.1, 0.7;
  const Eigen::MatrixXd pushed = pushforward_bracket(linear_bivector(), iso, x);
  const Eigen::MatrixXd target = momentum_bivector(eps).matrix(iso(x));
  EXPECT_LT((pushed - target).cwiseAbs().maxCoeff(), 1e-5);
}

TEST(MomentumIsomorphism, CasimirRelation) {
  SampleGenerator rng(66);
  const double eps = 0.55;
  for (int i = 0; i < 100; ++i) {
    const Eigen::VectorXd v = rng.box(3);
    const LinearMomentum lin{v[0], v[1], v[2]};
    const double R = std::sqrt(casimir_R2(momentum_isomorphism(lin, eps), eps));
    EXPECT_NEAR(eps * R, std::sinh(eps * lin.radius()), 1e-12);
  }
}

TEST(MomentumIsomorphism, SB2Coordinates) {
  const MomentumPoint m{0.35, cplx(0.2, -0.4)};
  const double eps = 0.5;
  const SB2Element B = sb2_from_momentum(m, eps);
  EXPECT_NEAR(B.rho(), std::exp(eps * 0.35), 1e-15);
  EXPECT_LT(std::abs(B.n() - 2.0 * eps * m.w), 1e-15);
  const MomentumPoint back = momentum_from_sb2(B, eps);
  EXPECT_NEAR(back.zeta, m.zeta, 1e-15);
  EXPECT_LT(std::abs(back.w - m.w), 1e-15);
}

TEST(Relations, ZeroMomentum) {
  const HamiltonianSet s = hamiltonian_relations(RelationInput::h, 0.0, 0.3);
  EXPECT_EQ(s.H, 1.0);
  EXPECT_EQ(s.R2, 0.0);
  EXPECT_EQ(s.H2, 0.0);
}

TEST(Relations, RoundTrips) {
  SampleGenerator rng(67);
  for (int i = 0; i < 200; ++i) {
    const double eps = rng.uniform(0.05, 1.0);
    const HamiltonianSet ref = hamiltonian_relations(RelationInput::h, rng.uniform(0.0, 3.0), eps);
    EXPECT_NEAR(ref.H, std::cosh(2.0 * eps * std::sqrt(2.0 * ref.h)), 1e-12 * ref.H);
    EXPECT_NEAR(ref.H, 1.0 + 2.0 * eps * eps * ref.R2, 1e-12 * ref.H);
    EXPECT_NEAR(ref.H_prime, ref.h, 1e-12);
    for (RelationInput in : {RelationInput::H, RelationInput::R2, RelationInput::H2}) {
      const double value = in == RelationInput::H ? ref.H : in == RelationInput::R2 ? ref.R2 : ref.H2;
      const HamiltonianSet s = hamiltonian_relations(in, value, eps);
      EXPECT_NEAR(s.h, ref.h, 1e-12 * std::max(1.0, ref.h));
      EXPECT_NEAR(s.R2, ref.R2, 1e-12 * std::max(1.0, ref.R2));
      EXPECT_NEAR(s.H, ref.H, 1e-12 * ref.H);
    }
  }
}

TEST(Relations, SymplectomorphicHamiltonianEqualsLinearEnergy) {
  const double eps = 0.4, h = 0.8;
  const HamiltonianSet s = hamiltonian_relations(RelationInput::h, h, eps);
  EXPECT_NEAR(hamiltonian_value(FreeHamiltonian::symplectomorphic, s.H, eps), h, 1e-12);
  EXPECT_NEAR(hamiltonian_value(FreeHamiltonian::normalized, s.H, eps), s.H2, 1e-12);
}

TEST(Relations, DomainErrors) {
  EXPECT_THROW(hamiltonian_relations(RelationInput::H, 0.5, 0.3), NumericDomainError);
  EXPECT_THROW(hamiltonian_relations(RelationInput::h, -1.0, 0.3), NumericDomainError);
  EXPECT_THROW(hamiltonian_relations(RelationInput::H, 1.5, 0.0), NumericDomainError);
}

TEST(Relations, ClassicalLimitIsSecondOrder) {
  std::vector<double> eps{1e-2, 5e-3, 2.5e-3}, dev;
  for (double e : eps) {
    const HamiltonianSet s = hamiltonian_relations(RelationInput::h, 0.6, e);
    dev.push_back(std::abs(s.H2 - s.h));
  }
  EXPECT_NEAR(loglog_slope(eps, dev), 2.0, 0.2);
}

TEST(Relations, PipelineAlongFlow) {
  const double eps = 0.2;
  const LinearMomentum lin{0.3, -0.2, 0.5};
  const SB2Element B0 = sb2_from_momentum(momentum_isomorphism(lin, eps), eps);
  const SL2CElement A0(SU2Element::from_rotation(0.1, 0.2, -0.3).matrix() * B0.matrix());
  const Trajectory traj = integrate_free_motion(A0, eps, {}, 2.0);
  for (const Point& v : traj.points) {
    const Mat2 A = matrix_from_real(v);
    const LinearMomentum back =
        momentum_isomorphism_inverse(momentum_from_sb2(iwasawa_unchecked(A).B, eps), eps);
    const double h = 0.5 * back.radius() * back.radius();
    EXPECT_NEAR(free_hamiltonian(A), std::cosh(2.0 * eps * std::sqrt(2.0 * h)), 1e-6);
  }
}
