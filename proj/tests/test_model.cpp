#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "hsu2/model.hpp"

using namespace hsu2;

namespace {

ModelParams random_model(std::mt19937_64& rng, int h, double range = 5.0) {
  std::uniform_real_distribution<double> u(-range, range);
  ModelParams m;
  m.h = h;
  m.J = {u(rng), u(rng), u(rng)};
  m.B1 = u(rng);
  m.B2 = u(rng);
  return m;
}

std::vector<double> sorted_eigenvalues(const Eigen::MatrixXcd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("sign factors for every (h, k)") {
  struct Row {
    int h, k, s0, p, q, s1, s2;
  };
  // Hand-evaluated from the closed formulas.
  const Row table[] = {
      {1, 1, -1, 1, 1, -1, -1}, {1, 2, 1, 1, 1, 1, -1},  {2, 1, 1, 1, 2, 1, -1},
      {2, 2, -1, 1, 2, -1, 1},  {3, 1, -1, 2, 1, 1, -1}, {3, 2, 1, 2, 1, 1, 1},
  };
  for (const Row& r : table) {
    CAPTURE(r.h);
    CAPTURE(r.k);
    const SignSet s = sign_factors(r.h, r.k);
    CHECK(s.s0 == r.s0);
    CHECK(s.p == r.p);
    CHECK(s.q == r.q);
    CHECK(s.s1 == r.s1);
    CHECK(s.s2 == r.s2);
  }
  CHECK_THROWS_AS(sign_factors(0, 1), DomainError);
  CHECK_THROWS_AS(sign_factors(4, 1), DomainError);
  CHECK_THROWS_AS(sign_factors(1, 3), DomainError);
}

TEST_CASE("full Hamiltonian") {
  CHECK(build_full_hamiltonian(ModelParams{3, {0, 0, 0}, 0, 0}).isZero(0.0));

  const Matrix4cd zz = build_full_hamiltonian(ModelParams{3, {0, 0, 1}, 0, 0});
  Eigen::Vector4cd diag(1, -1, -1, 1);
  CHECK(zz.isApprox(Matrix4cd(diag.asDiagonal())));

  std::mt19937_64 rng(1);
  for (int s = 0; s < 200; ++s) {
    const Matrix4cd h = build_full_hamiltonian(random_model(rng, 1 + s % 3));
    CHECK((h - h.adjoint()).norm() <= 1e-14);
  }
  CHECK_THROWS_AS(build_full_hamiltonian(ModelParams{5, {0, 0, 0}, 0, 0}), DomainError);
}

TEST_CASE("Bell basis is unitary and block-diagonalizes for every direction") {
  std::mt19937_64 rng(2);
  for (int h = 1; h <= 3; ++h) {
    const Matrix4cd v = bell_basis(h);
    CHECK((v.adjoint() * v - Matrix4cd::Identity()).norm() <= 1e-14);
    double worst = 0.0;
    for (int s = 0; s < 1000; ++s) {
      const Matrix4cd hb = v.adjoint() * build_full_hamiltonian(random_model(rng, h)) * v;
      worst = std::max(worst, off_block_leakage(hb));
    }
    CAPTURE(h);
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("zero fields give diagonal blocks") {
  for (int h = 1; h <= 3; ++h)
    for (int k = 1; k <= 2; ++k) {
      const Matrix2cd b = block_hamiltonian(block_params(ModelParams{h, {0.4, -1.1, 2.3}, 0, 0}, k));
      CHECK(b(0, 1) == std::complex<double>(0.0));
      CHECK(b(1, 0) == std::complex<double>(0.0));
    }
}

TEST_CASE("equal z-fields drive only one block, with strength 2b") {
  // Brute-force transform of the 4x4 Hamiltonian.
  const double b = 0.75;
  const ModelParams m{3, {0, 0, 0}, b, b};
  const Matrix4cd v = bell_basis(3);
  const Matrix4cd hb = v.adjoint() * build_full_hamiltonian(m) * v;
  const double k1 = std::abs(hb(1, 0));
  const double k2 = std::abs(hb(3, 2));
  CHECK(std::max(k1, k2) == doctest::Approx(2 * b));
  CHECK(std::min(k1, k2) == doctest::Approx(0.0));
  CHECK(std::abs(block_params(m, 1).field_scale()) == doctest::Approx(2 * b));
  CHECK(block_params(m, 2).field_scale() == doctest::Approx(0.0));
}

TEST_CASE("block equivalence oracle") {
  const BlockReport zero = verify_block_equivalence(ModelParams{2, {0, 0, 0}, 0, 0}, 1e-10);
  CHECK(zero.maxDeviation == 0.0);
  CHECK(zero.maxLeakage == 0.0);
  CHECK(zero.pass);

  std::mt19937_64 rng(3);
  for (int s = 0; s < 1000; ++s) {
    const BlockReport r = verify_block_equivalence(random_model(rng, 1 + s % 3), 1e-10);
    CHECK(r.pass);
    CHECK(r.maxDeviation <= 1e-12);
  }
}

TEST_CASE("corrupted sign table fails the oracle") {
  const SignTable corrupted = [](int h, int k) {
    SignSet s = sign_factors(h, k);
    s.s2 = -s.s2;
    return s;
  };
  const BlockReport r = verify_block_equivalence(ModelParams{3, {0.5, 1.0, -0.3}, 1.2, 0.4}, 1e-10, corrupted);
  CHECK_FALSE(r.pass);
  CHECK(r.maxDeviation > 0.1);
}

TEST_CASE("eigenvalues of the full Hamiltonian are the union of block eigenvalues") {
  std::mt19937_64 rng(4);
  for (int s = 0; s < 300; ++s) {
    const ModelParams m = random_model(rng, 1 + s % 3);
    const auto full = sorted_eigenvalues(build_full_hamiltonian(m));
    std::vector<double> blocks;
    for (int k = 1; k <= 2; ++k) {
      const auto e = sorted_eigenvalues(block_hamiltonian(block_params(m, k)));
      blocks.insert(blocks.end(), e.begin(), e.end());
    }
    std::sort(blocks.begin(), blocks.end());
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(full[i] - blocks[i]) <= 1e-10);
  }
}

TEST_CASE("effective parameters invert to a raw model") {
  for (int h = 1; h <= 3; ++h)
    for (int k = 1; k <= 2; ++k) {
      const ModelParams m = model_from_effective(h, k, 1.7, -0.9, 0.3);
      const BlockParams b = block_params(m, k);
      CHECK(b.Jeff == doctest::Approx(-0.9));
      CHECK(b.field_scale() == doctest::Approx(1.7));
      CHECK(b.J0 == doctest::Approx(0.3));
      CHECK(b.q == 2 - h % 2);
    }
}
