#pragma once

// 2x2 complex algebra for the SU(2) blocks: Pauli basis, the generic gate
// form e^{i varphi} [[A e^{i phi}, B e^{i theta}], [-B e^{-i theta}, A e^{-i phi}]]
// and conversions between it and dense matrices.

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "hsu2/errors.hpp"

namespace hsu2 {

template <typename Scalar>
using Matrix2c = Eigen::Matrix<std::complex<Scalar>, 2, 2>;
using Matrix2cd = Matrix2c<double>;

class PauliIndex {
 public:
  explicit PauliIndex(int index) : index_(index) {
    if (index < 0 || index > 3) {
      throw DomainError("Pauli index must be in {0,1,2,3}, got " + std::to_string(index));
    }
  }
  int value() const { return index_; }

 private:
  int index_;
};

template <typename Scalar = double>
Matrix2c<Scalar> pauli(PauliIndex index) {
  using C = std::complex<Scalar>;
  const C one(1), zero(0), i(0, 1);
  Matrix2c<Scalar> m;
  switch (index.value()) {
    case 0: m << one, zero, zero, one; break;
    case 1: m << zero, one, one, zero; break;
    case 2: m << zero, -i, i, zero; break;
    default: m << one, zero, zero, -one; break;
  }
  return m;
}

/// sigma_q = -(q-2) sigma_1 + (q-1) sigma_2, the field generator inside a block.
template <typename Scalar = double>
Matrix2c<Scalar> sigma_q(int q) {
  if (q != 1 && q != 2) {
    throw DomainError("q must be 1 or 2, got " + std::to_string(q));
  }
  const Scalar c1 = -static_cast<Scalar>(q - 2);
  const Scalar c2 = static_cast<Scalar>(q - 1);
  return c1 * pauli<Scalar>(PauliIndex(1)) + c2 * pauli<Scalar>(PauliIndex(2));
}

/// Arg on the principal branch (-pi, pi].
template <typename Scalar>
Scalar principal_arg(const std::complex<Scalar>& z) {
  const Scalar a = std::arg(z);
  return a <= -std::numbers::pi_v<Scalar> ? a + 2 * std::numbers::pi_v<Scalar> : a;
}

/// Wraps an angle into (-pi, pi].
template <typename Scalar>
Scalar wrap_angle(Scalar x) {
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  Scalar r = std::remainder(x, 2 * pi);
  return r <= -pi ? r + 2 * pi : r;
}

/// ||U^dagger U - I||_F; accepts any 2x2 (or square) expression.
template <typename Derived>
typename Eigen::NumTraits<typename Derived::Scalar>::Real unitarity_defect(
    const Eigen::MatrixBase<Derived>& u) {
  const auto n = u.rows();
  using M = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  return (u.adjoint() * u - M::Identity(n, n)).norm();
}

template <typename DerivedA, typename DerivedB>
typename Eigen::NumTraits<typename DerivedA::Scalar>::Real max_abs_diff(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

/// Nearest unitary in Frobenius norm (polar factor W V^dagger of the SVD).
template <typename Scalar>
Matrix2c<Scalar> nearest_unitary(const Matrix2c<Scalar>& m) {
  Eigen::JacobiSVD<Matrix2c<Scalar>> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

template <typename Scalar = double>
struct GateForm {
  Scalar globalPhase = 0;  // varphi
  Scalar A = 1;
  Scalar B = 0;
  Scalar phi = 0;  // phase of the diagonal entry
  Scalar theta = 0;  // phase of the off-diagonal entry
};

template <typename Scalar>
void validate(const GateForm<Scalar>& g, Scalar tol = Scalar(1e-12)) {
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  auto in_branch = [](Scalar x) { return x > -pi && x <= pi; };
  if (!(g.A >= 0) || !(g.B >= 0)) {
    throw ValidationError("gate form amplitudes must be non-negative");
  }
  if (std::abs(g.A * g.A + g.B * g.B - 1) > tol) {
    throw ValidationError("gate form violates A^2 + B^2 = 1");
  }
  if (!in_branch(g.globalPhase) || !in_branch(g.phi) || !in_branch(g.theta)) {
    throw ValidationError("gate form angles must lie in (-pi, pi]");
  }
}

template <typename Scalar>
Matrix2c<Scalar> reconstruct_gate_form(const GateForm<Scalar>& g) {
  validate(g);
  using C = std::complex<Scalar>;
  const C a = std::polar(g.A, g.phi);
  const C b = std::polar(g.B, g.theta);
  Matrix2c<Scalar> u;
  u << a, b, -std::conj(b), std::conj(a);
  return std::polar(Scalar(1), g.globalPhase) * u;
}

/// Inverse of reconstruct_gate_form. The global phase is fixed to
/// half the principal argument of det U; a phase whose modulus is below tol
/// is reported as 0.
template <typename Scalar>
GateForm<Scalar> extract_gate_form(const Matrix2c<Scalar>& u, Scalar tol) {
  if (!u.allFinite()) {
    throw ValidationError("matrix has non-finite entries");
  }
  if (unitarity_defect(u) > tol) {
    throw ValidationError("matrix is not unitary within tolerance");
  }
  GateForm<Scalar> g;
  g.globalPhase = principal_arg(u.determinant()) / 2;
  const Matrix2c<Scalar> reduced = std::polar(Scalar(1), -g.globalPhase) * u;
  Scalar a = std::abs(reduced(0, 0));
  Scalar b = std::abs(reduced(0, 1));
  const Scalar norm = std::hypot(a, b);
  g.A = a / norm;
  g.B = b / norm;
  g.phi = g.A <= tol ? Scalar(0) : principal_arg(reduced(0, 0));
  g.theta = g.B <= tol ? Scalar(0) : principal_arg(reduced(0, 1));
  return g;
}

}  // namespace hsu2
