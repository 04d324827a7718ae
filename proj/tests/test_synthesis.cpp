#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "hsu2/synthesis.hpp"

using namespace hsu2;

namespace {

constexpr double pi = std::numbers::pi;
const double kQuarter = pi * pi / 4;

ScanConfig coarse(double target, int q = 1) {
  ScanConfig cfg;
  cfg.targetA = target;
  cfg.q = q;
  cfg.gridResolution = 21;
  cfg.n = 2000;
  return cfg;
}

}  // namespace

TEST_CASE("amplitude anchors") {
  ScanConfig cfg;
  for (double j : {-2.0, 0.5, 1.0, 3.0}) {
    const auto g = amplitude_at(0.0, j, cfg);
    CHECK(g.A == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(wrap_angle(g.phi - j)) <= 1e-4);
  }
  CHECK(amplitude_at(kQuarter, 0.0, cfg).A <= 1e-4);
  CHECK(amplitude_at(2 * kQuarter, 0.0, cfg).A >= 1 - 1e-4);
  cfg.q = 2;
  CHECK(amplitude_at(kQuarter, 0.0, cfg).A <= 1e-4);

  // At n = 100 the second-order error of the zero is a few 1e-4.
  cfg.n = 100;
  CHECK(amplitude_at(kQuarter, 0.0, cfg).A <= 5e-4);
  CHECK(amplitude_at(2 * kQuarter, 0.0, cfg).A >= 1 - 1e-4);
}

TEST_CASE("half-sine symmetry confines the off-diagonal entry to one axis") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int q : {1, 2}) {
    ScanConfig cfg;
    cfg.q = q;
    for (int s = 0; s < 10; ++s) {
      const double a = u(rng), j = u(rng);
      const Matrix2cd r = reference(effective_block(j, q), FieldProfile::half_sine(a), false);
      const std::complex<double> b = r(0, 1);
      CHECK(std::abs(q == 1 ? b.real() : b.imag()) <= 1e-9);
      const std::complex<double> bn = block_unitary(a, j, cfg)(0, 1);
      CHECK(std::abs(q == 1 ? bn.real() : bn.imag()) <= 1e-4);
    }
  }
}

TEST_CASE("A = 1 scan contains the zero-amplitude axis") {
  const auto pts = scan_plane(coarse(1.0));
  int onAxis = 0;
  for (const auto& p : pts) {
    CHECK(p.residual <= 1e-4);
    if (p.ampl == 0.0) ++onAxis;
  }
  CHECK(onAxis == 21);
}

TEST_CASE("A = 0 scan finds the commuting-case zeros") {
  for (int q : {1, 2}) {
    const auto pts = scan_plane(coarse(0.0, q));
    bool plus = false, minus = false;
    for (const auto& p : pts) {
      CHECK(p.residual <= 1e-4);
      if (std::hypot(p.ampl - kQuarter, p.J) < 1e-3) plus = true;
      if (std::hypot(p.ampl + kQuarter, p.J) < 1e-3) minus = true;
    }
    CHECK(plus);
    CHECK(minus);
  }
}

TEST_CASE("interior target contours, mirror symmetry and chaining") {
  ScanConfig cfg = coarse(0.5);
  const auto pts = scan_plane(cfg);
  REQUIRE(pts.size() > 10);
  for (const auto& p : pts) {
    CHECK(p.residual <= 1e-4);
    CHECK(std::abs(p.gate.A - 0.5) <= 1e-5);
    // Flipping the field sign conjugates by sigma_3: same A, theta + pi.
    const auto mirrored = amplitude_at(-p.ampl, p.J, cfg);
    CHECK(mirrored.A == doctest::Approx(p.gate.A).epsilon(1e-9));
    CHECK(std::abs(wrap_angle(mirrored.theta - p.gate.theta - pi)) <= 1e-6);
    CHECK(std::abs(wrap_angle(mirrored.phi - p.gate.phi)) <= 1e-6);
  }
  const auto lines = summarize_polylines(pts);
  REQUIRE(!lines.empty());
  std::size_t total = 0;
  for (const auto& l : lines) {
    total += l.size;
    CHECK(l.thetaStd <= 1e-3);
    CHECK(l.meanA == doctest::Approx(0.5).epsilon(1e-4));
  }
  CHECK(total == pts.size());
  // Consecutive points of a chain are neighbours.
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (pts[i].polyline == pts[i - 1].polyline)
      CHECK(std::hypot(pts[i].ampl - pts[i - 1].ampl, pts[i].J - pts[i - 1].J) <= 0.75 + 1e-12);
}

TEST_CASE("scan output does not depend on the thread count") {
  ScanConfig one = coarse(0.3);
  one.recheck = false;
  ScanConfig three = one;
  three.threads = 3;
  const auto a = scan_plane(one);
  const auto b = scan_plane(three);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].ampl == b[i].ampl);
    CHECK(a[i].J == b[i].J);
    CHECK(a[i].gate.phi == b[i].gate.phi);
    CHECK(a[i].polyline == b[i].polyline);
  }
}

TEST_CASE("solve_for_target anchors") {
  ScanConfig cfg;
  const auto diag = solve_for_target(GateTarget{1.0, {}, {}}, 0.1, 2.0, cfg);
  CHECK(std::abs(diag.point.ampl) <= 1e-6);
  CHECK(std::abs(wrap_angle(diag.point.gate.phi - diag.point.J)) <= 1e-4);
  CHECK(diag.point.J == doctest::Approx(2.0).epsilon(0.05));

  const auto zero = solve_for_target(GateTarget{0.0, {}, {}}, 2.4, 0.05, cfg);
  CHECK(std::hypot(zero.point.ampl - kQuarter, zero.point.J) <= 1e-4);
  CHECK(zero.amplitudeResidual <= 1e-8);

  const auto mid = solve_for_target(GateTarget{0.5, {}, {}}, 1.0, 1.0, cfg);
  CHECK(mid.amplitudeResidual <= 1e-8);
}

TEST_CASE("solve_for_target walks the contour to match a phase") {
  ScanConfig cfg;
  const auto start = solve_for_target(GateTarget{0.5, {}, {}}, 1.0, 1.0, cfg);
  // A phase value realised elsewhere on the same contour.
  ScanConfig c = coarse(0.5);
  c.recheck = false;
  const auto pts = scan_plane(c);
  int line = -1;
  for (const auto& p : pts)
    if (std::hypot(p.ampl - start.point.ampl, p.J - start.point.J) < 0.6) line = p.polyline;
  REQUIRE(line >= 0);
  double wanted = 0;
  int seen = 0;
  for (const auto& p : pts)
    if (p.polyline == line && ++seen == 4) wanted = p.gate.phi;
  REQUIRE(seen >= 4);

  const auto r = solve_for_target(GateTarget{0.5, wanted, {}}, 1.0, 1.0, cfg);
  CHECK(r.amplitudeResidual <= 1e-8);
  CHECK(r.phaseResidual <= 1e-6);
}

TEST_CASE("unreachable targets are reported") {
  ScanConfig cfg;
  cfg.region = Region{0.5, 0.7, 0.5, 0.7};
  // A is close to 1 everywhere in this small patch.
  CHECK_THROWS_AS(solve_for_target(GateTarget{0.2, {}, {}}, 0.6, 0.6, cfg), NotFoundError);
  CHECK_THROWS_AS(solve_for_target(GateTarget{0.0, {}, {}}, 0.6, 0.6, cfg), NotFoundError);
  CHECK_THROWS_AS(solve_for_target(GateTarget{0.5, {}, {}}, 3.0, 3.0, cfg), ValidationError);
}

TEST_CASE("scan config validation") {
  ScanConfig cfg;
  cfg.targetA = 1.5;
  CHECK_THROWS_AS(scan_plane(cfg), ValidationError);
  cfg = ScanConfig{};
  cfg.gridResolution = 1;
  CHECK_THROWS_AS(scan_plane(cfg), ValidationError);
  cfg = ScanConfig{};
  cfg.region = Region{1, 1, -5, 5};
  CHECK_THROWS_AS(scan_plane(cfg), ValidationError);
}

TEST_CASE("circular standard deviation") {
  CHECK(circular_std({0.3, 0.3, 0.3}) == 0.0);
  CHECK(circular_std({pi, -pi + 1e-12}) <= 1e-9);
  CHECK(circular_std({0.0, pi / 2}) > 0.5);
}
