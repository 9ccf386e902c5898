#pragma once

#include <complex>

#include <Eigen/Dense>

namespace poisym {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;

/// Y = ((0, -1), (1, 0)); Y conj(u) = u Y for u in SU(2).
const Mat2& y_matrix();

/// exp(M) for a complex 2x2 matrix, closed form via Cayley-Hamilton:
/// with M = s I + N, tr N = 0, N^2 = q^2 I, exp(M) = e^s (cosh q I + (sinh q / q) N).
Mat2 expm2(const Mat2& m);

/// Complex 2x2 matrix with unit determinant; entries a, b / c, d.
class SL2CElement {
 public:
  static constexpr double kDetTolerance = 1e-9;

  /// Throws ContractViolation when |det - 1| > 1e-9.
  explicit SL2CElement(const Mat2& m);
  SL2CElement(cplx a, cplx b, cplx c, cplx d);

  static SL2CElement identity() { return SL2CElement(Mat2::Identity()); }

  const Mat2& matrix() const { return m_; }
  cplx a() const { return m_(0, 0); }
  cplx b() const { return m_(0, 1); }
  cplx c() const { return m_(1, 0); }
  cplx d() const { return m_(1, 1); }
  cplx det() const { return m_.determinant(); }

  /// (Re a, Im a, Re b, Im b, Re c, Im c, Re d, Im d)
  Eigen::VectorXd to_real() const;

 private:
  Mat2 m_;
};

/// Real 8-vector (Re a, Im a, ..., Re d, Im d) <-> complex matrix, no determinant check.
Mat2 matrix_from_real(const Eigen::VectorXd& v);
Eigen::VectorXd real_from_matrix(const Mat2& m);

/// u = ((alpha, -conj(gamma)), (gamma, conj(alpha))), |alpha|^2 + |gamma|^2 = 1.
class SU2Element {
 public:
  static constexpr double kUnitTolerance = 1e-10;

  SU2Element(cplx alpha, cplx gamma);
  static SU2Element identity() { return SU2Element(1.0, 0.0); }
  /// exp(i (v . sigma)) for a real 3-vector v.
  static SU2Element from_rotation(double vx, double vy, double vz);

  cplx alpha() const { return alpha_; }
  cplx gamma() const { return gamma_; }
  Mat2 matrix() const;

 private:
  cplx alpha_;
  cplx gamma_;
};

/// B = ((rho, n), (0, 1/rho)) with rho > 0.
class SB2Element {
 public:
  SB2Element(double rho, cplx n);
  static SB2Element identity() { return SB2Element(1.0, 0.0); }

  double rho() const { return rho_; }
  cplx n() const { return n_; }
  Mat2 matrix() const;
  Mat2 inverse() const;

 private:
  double rho_;
  cplx n_;
};

struct IwasawaFactors {
  SU2Element u;
  SB2Element B;
};

/// The unique factorization A = u B: rho = sqrt(|a|^2 + |c|^2), alpha = a/rho,
/// gamma = c/rho, n = conj(alpha) b + conj(gamma) d.
IwasawaFactors iwasawa(const SL2CElement& A);

/// Same factorization without the unit-determinant precondition (used on raw
/// integrator states, where det A = 1 only up to the integration error).
IwasawaFactors iwasawa_unchecked(const Mat2& A);

}  // namespace poisym
