#pragma once

// Stepped evolution of one SU(2) block over the gate window [0,1]:
// U = e^{i s0 J0} * S_n * ... * S_1, each S_i a truncated Taylor step of
// exp(i L(t) dt), L(t) = Jeff sigma_3 + B(t) sigma_q, sampled at the left
// endpoint of its subinterval.

#include "hsu2/fields.hpp"
#include "hsu2/model.hpp"
#include "hsu2/su2.hpp"

namespace hsu2 {

enum class StepOrder { Linear, Quadratic };

const char* to_string(StepOrder order);
StepOrder step_order_from_string(const std::string& name);

struct EvolutionSpec {
  BlockParams block;
  FieldProfile field = FieldProfile::constant(0.0);
  int n = 100;
  StepOrder order = StepOrder::Quadratic;
  bool attachGlobalPhase = false;
  // Polar projection after every step; off by default so the raw scheme is measured.
  bool projectEachStep = false;
};

/// linear:    sigma_0 + i L dt
/// quadratic: sigma_0 + i L dt - Q dt^2 / 2,  Q = (Jeff^2 + B^2) sigma_0 - i B' sigma_q
Matrix2cd step(const BlockParams& block, const FieldProfile& field, double t0, double dt, StepOrder order);

Matrix2cd evolve(const EvolutionSpec& spec);

/// exp(i (Jeff sigma_3 + b sigma_q) t) for a constant effective field b.
Matrix2cd exact_constant(const BlockParams& block, double bValue, double t);

/// cos(Phi) sigma_0 + i sin(Phi) sigma_q with Phi the integral of the
/// effective field over [0,1]. Requires Jeff == 0.
Matrix2cd exact_commuting(const BlockParams& block, const FieldProfile& field);

/// Ordered product of exact_constant over the intervals of a stepwise field.
Matrix2cd exact_stepwise(const BlockParams& block, const FieldProfile& field);

struct ReferenceOptions {
  double tol = 1e-10;
  int startSteps = 10000;
  int maxSteps = 1 << 20;
};

/// High-accuracy propagator: quadratic evolutions with doubling n, combined
/// by Richardson extrapolation until two successive extrapolants differ by
/// less than tol/10, then projected onto the unitary group.
/// Stepwise fields use the closed-form product instead (the quadratic step
/// has no derivative at their breakpoints).
Matrix2cd reference(const BlockParams& block, const FieldProfile& field, bool attachGlobalPhase,
                    const ReferenceOptions& options = {});

}  // namespace hsu2
