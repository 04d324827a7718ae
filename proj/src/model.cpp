#include "hsu2/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace hsu2 {

namespace {

int ipow(int base, int exp) {
  int r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

void check_direction(int h) {
  if (h < 1 || h > 3) throw DomainError("field direction h must be 1, 2 or 3, got " + std::to_string(h));
}

void check_block(int k) {
  if (k != 1 && k != 2) throw DomainError("block index k must be 1 or 2, got " + std::to_string(k));
}

// Bell states in the computational basis |00>,|01>,|10>,|11>.
enum class Bell { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

Eigen::Vector4cd bell_state(Bell b) {
  const double r = 1.0 / std::numbers::sqrt2;
  switch (b) {
    case Bell::PhiPlus: return Eigen::Vector4cd(r, 0, 0, r);
    case Bell::PhiMinus: return Eigen::Vector4cd(r, 0, 0, -r);
    case Bell::PsiPlus: return Eigen::Vector4cd(0, r, r, 0);
    case Bell::PsiMinus: return Eigen::Vector4cd(0, r, -r, 0);
  }
  return Eigen::Vector4cd::Zero();
}

struct SignedBell {
  Bell state;
  int sign;
};

// Ordering and signs fixed so each block reads
// -s0 J_h sigma_0 + s1 J_{s0} sigma_3 + s2 B_{-s0} sigma_q.
constexpr SignedBell kBellTable[3][4] = {
    {{Bell::PhiPlus, 1}, {Bell::PsiPlus, 1}, {Bell::PhiMinus, 1}, {Bell::PsiMinus, -1}},
    {{Bell::PhiPlus, 1}, {Bell::PsiMinus, -1}, {Bell::PhiMinus, 1}, {Bell::PsiPlus, -1}},
    {{Bell::PhiPlus, 1}, {Bell::PhiMinus, 1}, {Bell::PsiPlus, 1}, {Bell::PsiMinus, -1}},
};

Matrix2cd kron_factor(int axis) { return pauli(PauliIndex(axis)); }

Matrix4cd kron(const Matrix2cd& a, const Matrix2cd& b) {
  Matrix4cd r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return r;
}

}  // namespace

void validate(const ModelParams& m) {
  check_direction(m.h);
  for (double j : m.J)
    if (!std::isfinite(j)) throw ValidationError("exchange strengths must be finite");
  if (!std::isfinite(m.B1) || !std::isfinite(m.B2)) throw ValidationError("field amplitudes must be finite");
}

SignSet sign_factors(int h, int k) {
  check_direction(h);
  check_block(k);
  SignSet s;
  s.s0 = (h + k + 1) % 2 == 0 ? 1 : -1;
  s.p = 1 + (h - 1) * (h - 2) / 2;
  s.q = 2 - h % 2;
  s.s1 = ipow(s.s0, s.p);
  s.s2 = ipow(-1, s.p) * ipow(s.s0, s.p + s.q);
  return s;
}

Matrix4cd build_full_hamiltonian(const ModelParams& m) {
  validate(m);
  const Matrix2cd id = Matrix2cd::Identity();
  Matrix4cd H = Matrix4cd::Zero();
  for (int axis = 1; axis <= 3; ++axis) {
    H += m.J[axis - 1] * kron(kron_factor(axis), kron_factor(axis));
  }
  H -= m.B1 * kron(kron_factor(m.h), id);
  H -= m.B2 * kron(id, kron_factor(m.h));
  return H;
}

Matrix4cd bell_basis(int h) {
  check_direction(h);
  Matrix4cd V;
  for (int c = 0; c < 4; ++c) {
    const SignedBell& sb = kBellTable[h - 1][c];
    V.col(c) = static_cast<double>(sb.sign) * bell_state(sb.state);
  }
  return V;
}

BlockParams block_params(const ModelParams& m, int k) {
  validate(m);
  return block_params(m, k, sign_factors(m.h, k));
}

BlockParams block_params(const ModelParams& m, int k, const SignSet& s) {
  validate(m);
  check_block(k);
  // {a, b} = {1,2,3} \ {h}, ascending.
  const int a = m.h == 1 ? 2 : 1;
  const int b = m.h == 3 ? 2 : 3;
  const double jPair = m.J[a - 1] + s.s0 * m.J[b - 1];  // J_{{h}}_{s0}
  const double bPair = m.B1 - s.s0 * m.B2;              // B_{h,-s0}

  BlockParams p;
  p.J0 = m.J[m.h - 1];
  p.Jeff = -s.s1 * jPair;
  p.fieldSign = -s.s2;
  p.fieldAmplitude = bPair;
  p.q = s.q;
  p.signs = s;
  p.k = k;
  return p;
}

BlockParams effective_block(double J, int q, double J0) {
  if (q != 1 && q != 2) throw DomainError("q must be 1 or 2");
  BlockParams p;
  p.J0 = J0;
  p.Jeff = J;
  p.fieldSign = 1.0;
  p.fieldAmplitude = 1.0;
  p.q = q;
  p.signs.q = q;
  return p;
}

ModelParams model_from_effective(int h, int k, double ampl, double J, double J0) {
  const SignSet s = sign_factors(h, k);
  const int a = h == 1 ? 2 : 1;
  ModelParams m;
  m.h = h;
  m.J[h - 1] = J0;
  m.J[a - 1] = -s.s1 * J;
  m.B1 = -s.s2 * ampl;
  m.B2 = 0.0;
  return m;
}

Matrix2cd block_hamiltonian(const BlockParams& b) {
  return -b.signs.s0 * b.J0 * pauli(PauliIndex(0)) - b.Jeff * pauli(PauliIndex(3)) -
         b.field_scale() * sigma_q(b.q);
}

Matrix2cd extract_block(const Matrix4cd& m, int k) {
  check_block(k);
  return m.block<2, 2>(2 * (k - 1), 2 * (k - 1));
}

double off_block_leakage(const Matrix4cd& m) {
  return std::max(m.block<2, 2>(0, 2).cwiseAbs().maxCoeff(), m.block<2, 2>(2, 0).cwiseAbs().maxCoeff());
}

BlockReport verify_block_equivalence(const ModelParams& m, double tol) {
  return verify_block_equivalence(m, tol, sign_factors);
}

BlockReport verify_block_equivalence(const ModelParams& m, double tol, const SignTable& signs) {
  const Matrix4cd V = bell_basis(m.h);
  const Matrix4cd Hb = V.adjoint() * build_full_hamiltonian(m) * V;
  BlockReport r;
  r.maxLeakage = off_block_leakage(Hb);
  for (int k = 1; k <= 2; ++k) {
    const Matrix2cd rebuilt = block_hamiltonian(block_params(m, k, signs(m.h, k)));
    r.blockDeviation[k - 1] = max_abs_diff(extract_block(Hb, k), rebuilt);
    r.maxDeviation = std::max(r.maxDeviation, r.blockDeviation[k - 1]);
  }
  r.pass = r.maxDeviation <= tol && r.maxLeakage <= tol;
  return r;
}

}  // namespace hsu2
