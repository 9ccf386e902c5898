#include "poisym/sl2c.hpp"

#include <cmath>

#include "poisym/errors.hpp"
#include "poisym/numeric.hpp"

namespace poisym {

namespace {

// sinh(q)/q for complex q; even in q, so the square-root branch never matters.
cplx sinhc(cplx q) {
  if (std::abs(q) < 1e-3) {
    const cplx q2 = q * q;
    return 1.0 + q2 / 6.0 * (1.0 + q2 / 20.0 * (1.0 + q2 / 42.0));
  }
  return std::sinh(q) / q;
}

}  // namespace

const Mat2& y_matrix() {
  static const Mat2 y = [] {
    Mat2 m;
    m << 0.0, -1.0, 1.0, 0.0;
    return m;
  }();
  return y;
}

Mat2 expm2(const Mat2& m) {
  const cplx s = 0.5 * m.trace();
  const Mat2 n = m - s * Mat2::Identity();
  const cplx q = std::sqrt(-n.determinant());
  return std::exp(s) * (std::cosh(q) * Mat2::Identity() + sinhc(q) * n);
}

SL2CElement::SL2CElement(const Mat2& m) : m_(m) {
  if (!m.allFinite()) throw ContractViolation("SL2CElement: non-finite entry");
  if (std::abs(m.determinant() - 1.0) > kDetTolerance)
    throw ContractViolation("SL2CElement: determinant differs from 1 by more than 1e-9");
}

SL2CElement::SL2CElement(cplx a, cplx b, cplx c, cplx d)
    : SL2CElement([&] {
        Mat2 m;
        m << a, b, c, d;
        return m;
      }()) {}

Eigen::VectorXd SL2CElement::to_real() const { return real_from_matrix(m_); }

Mat2 matrix_from_real(const Eigen::VectorXd& v) {
  if (v.size() != 8) throw ContractViolation("expected 8 real coordinates (Re/Im of a, b, c, d)");
  Mat2 m;
  m << cplx(v[0], v[1]), cplx(v[2], v[3]), cplx(v[4], v[5]), cplx(v[6], v[7]);
  return m;
}

Eigen::VectorXd real_from_matrix(const Mat2& m) {
  Eigen::VectorXd v(8);
  v << m(0, 0).real(), m(0, 0).imag(), m(0, 1).real(), m(0, 1).imag(), m(1, 0).real(), m(1, 0).imag(),
      m(1, 1).real(), m(1, 1).imag();
  return v;
}

SU2Element::SU2Element(cplx alpha, cplx gamma) : alpha_(alpha), gamma_(gamma) {
  if (std::abs(std::norm(alpha) + std::norm(gamma) - 1.0) > kUnitTolerance)
    throw ContractViolation("SU2Element: |alpha|^2 + |gamma|^2 must equal 1");
}

SU2Element SU2Element::from_rotation(double vx, double vy, double vz) {
  const cplx i(0.0, 1.0);
  Mat2 gen;
  gen << i * vz, i * vx + vy, i * vx - vy, -i * vz;
  const Mat2 u = expm2(gen);
  return SU2Element(u(0, 0), u(1, 0));
}

Mat2 SU2Element::matrix() const {
  Mat2 m;
  m << alpha_, -std::conj(gamma_), gamma_, std::conj(alpha_);
  return m;
}

SB2Element::SB2Element(double rho, cplx n) : rho_(rho), n_(n) {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw ContractViolation("SB2Element: rho must be positive");
}

Mat2 SB2Element::matrix() const {
  Mat2 m;
  m << rho_, n_, 0.0, 1.0 / rho_;
  return m;
}

Mat2 SB2Element::inverse() const {
  Mat2 m;
  m << 1.0 / rho_, -n_, 0.0, rho_;
  return m;
}

IwasawaFactors iwasawa_unchecked(const Mat2& A) {
  const cplx a = A(0, 0), b = A(0, 1), c = A(1, 0), d = A(1, 1);
  const double rho = std::sqrt(std::norm(a) + std::norm(c));
  if (!(rho > 0.0)) throw NumericDomainError("iwasawa: first column vanishes");
  const cplx alpha = a / rho;
  const cplx gamma = c / rho;
  // Renormalize the unit vector once more so the SU(2) check sees round-off only.
  const double unit = std::sqrt(std::norm(alpha) + std::norm(gamma));
  const cplx n = std::conj(alpha) * b + std::conj(gamma) * d;
  return {SU2Element(alpha / unit, gamma / unit), SB2Element(rho, n)};
}

IwasawaFactors iwasawa(const SL2CElement& A) { return iwasawa_unchecked(A.matrix()); }

}  // namespace poisym
