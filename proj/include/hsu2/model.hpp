#pragma once

// Two-qubit Heisenberg-Ising Hamiltonian with a field along a fixed axis h,
//   H_h = sum_k J_k sigma_k (x) sigma_k - B1 sigma_h (x) I - B2 I (x) sigma_h,
// and its reduction to two 2x2 blocks in a signed Bell basis. hbar = 1.

#include <array>
#include <functional>

#include <Eigen/Dense>

#include "hsu2/su2.hpp"

namespace hsu2 {

using Matrix4cd = Eigen::Matrix4cd;

struct ModelParams {
  int h = 3;                          // field direction, 1=x 2=y 3=z
  std::array<double, 3> J{0, 0, 0};   // exchange strengths J1..J3
  double B1 = 0;                      // field amplitude on qubit 1
  double B2 = 0;                      // field amplitude on qubit 2
};

void validate(const ModelParams& m);

struct SignSet {
  int s0 = 1;
  int s1 = 1;
  int s2 = 1;
  int p = 1;
  int q = 1;
};

/// s0 = (-1)^(h+k+1), p = 1 + (h-1)(h-2)/2, q = 2 - h mod 2,
/// s1 = s0^p, s2 = (-1)^p s0^(p+q).
SignSet sign_factors(int h, int k);

/// Reduced coefficients of one block. The effective field entering the
/// block dynamics is fieldSign * fieldAmplitude * envelope(t).
struct BlockParams {
  double J0 = 0;              // J_h: generates only the U(1) phase
  double Jeff = 0;            // coefficient of sigma_3 in the generator L
  double fieldSign = 1;       // -s2
  double fieldAmplitude = 1;  // B_{h,-s0} = B1 - s0 B2 (1 for effective blocks)
  int q = 1;
  SignSet signs{};
  int k = 1;

  double field_scale() const { return fieldSign * fieldAmplitude; }
};

Matrix4cd build_full_hamiltonian(const ModelParams& m);

/// Columns are signed Bell states; columns 0-1 span block k=1, 2-3 block k=2.
Matrix4cd bell_basis(int h);

BlockParams block_params(const ModelParams& m, int k);
/// Same reduction with an explicit sign set (negative controls and tests).
BlockParams block_params(const ModelParams& m, int k, const SignSet& signs);

/// Block-level effective parameters: Jeff = J, field scale 1, envelope amplitude carried by the field.
BlockParams effective_block(double J, int q, double J0 = 0.0);

/// One representative raw parameter set whose block k reduces to (Jeff = J,
/// field scale = ampl) for a unit envelope.
ModelParams model_from_effective(int h, int k, double ampl, double J, double J0 = 0.0);

/// Static block Hamiltonian -s0 J0 sigma_0 - Jeff sigma_3 - fieldScale sigma_q.
Matrix2cd block_hamiltonian(const BlockParams& b);

/// Rows/cols (2k-2, 2k-1) of a 4x4 matrix.
Matrix2cd extract_block(const Matrix4cd& m, int k);

/// Max modulus over the entries outside the two diagonal 2x2 blocks.
double off_block_leakage(const Matrix4cd& m);

struct BlockReport {
  std::array<double, 2> blockDeviation{0, 0};  // per block k = 1, 2
  double maxDeviation = 0;
  double maxLeakage = 0;
  bool pass = true;
};

using SignTable = std::function<SignSet(int h, int k)>;

BlockReport verify_block_equivalence(const ModelParams& m, double tol);
BlockReport verify_block_equivalence(const ModelParams& m, double tol, const SignTable& signs);

}  // namespace hsu2
