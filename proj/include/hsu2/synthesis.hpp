#pragma once

// Search of the effective (amplitude, exchange) plane for half-sine pulses
// whose evolved block has a prescribed gate amplitude A.
//
// The level function depends on the target:
//   0 < A* < 1 : A - A*, crossings located on grid edges;
//   A* = 1     : the signed off-diagonal entry (the half-sine pulse is
//                symmetric about t = 1/2, which confines it to one real
//                axis), since A - 1 never changes sign;
//   A* = 0     : isolated points where the complex diagonal entry vanishes,
//                located by a 2-D Newton solve from local minima of A.

#include <optional>
#include <vector>

#include "hsu2/propagator.hpp"
#include "hsu2/su2.hpp"

namespace hsu2 {

struct Region {
  double amplMin = -5.0;
  double amplMax = 5.0;
  double jMin = -5.0;
  double jMax = 5.0;

  bool contains(double ampl, double j) const {
    return ampl >= amplMin && ampl <= amplMax && j >= jMin && j <= jMax;
  }
};

struct ScanConfig {
  double targetA = 0.5;
  int q = 1;
  Region region{};
  int gridResolution = 101;
  int n = 2000;
  StepOrder order = StepOrder::Quadratic;
  // Residuals are measured against the reference propagator when set.
  bool recheck = true;
  double referenceTol = 1e-10;
  unsigned threads = 1;
};

void validate(const ScanConfig& cfg);

struct ContourPoint {
  double ampl = 0;
  double J = 0;
  GateForm<double> gate{};
  double residual = 0;
  int polyline = -1;
};

/// Evolved block (projected to the nearest unitary) for effective parameters.
Matrix2cd block_unitary(double ampl, double J, const ScanConfig& cfg);

GateForm<double> amplitude_at(double ampl, double J, const ScanConfig& cfg);

/// Gate amplitude from the reference propagator at the same point.
double reference_amplitude(double ampl, double J, const ScanConfig& cfg);

std::vector<ContourPoint> scan_plane(const ScanConfig& cfg);

struct PolylineSummary {
  int id = 0;
  std::size_t size = 0;
  double thetaStd = 0;  // circular standard deviation
  double meanA = 0;
};

std::vector<PolylineSummary> summarize_polylines(const std::vector<ContourPoint>& points);

/// Circular standard deviation sqrt(-2 ln R) of a set of angles.
double circular_std(const std::vector<double>& angles);

struct GateTarget {
  double A = 1.0;
  std::optional<double> phi;
  std::optional<double> theta;
};

struct SolveResult {
  ContourPoint point;
  double amplitudeResidual = 0;
  double phaseResidual = 0;
  int evaluations = 0;
};

SolveResult solve_for_target(const GateTarget& target, double seedAmpl, double seedJ, const ScanConfig& cfg);

}  // namespace hsu2
