#include "hsu2/propagator.hpp"

#include <cmath>
#include <complex>
#include <string>

namespace hsu2 {

namespace {

using namespace std::complex_literals;

Matrix2cd generator(const BlockParams& block, double b) {
  return block.Jeff * pauli(PauliIndex(3)) + b * sigma_q(block.q);
}

Matrix2cd global_phase(const BlockParams& block) {
  return std::polar(1.0, block.signs.s0 * block.J0) * Matrix2cd::Identity();
}

}  // namespace

const char* to_string(StepOrder order) {
  return order == StepOrder::Linear ? "linear" : "quadratic";
}

StepOrder step_order_from_string(const std::string& name) {
  if (name == "linear") return StepOrder::Linear;
  if (name == "quadratic") return StepOrder::Quadratic;
  throw ValidationError("unknown step order '" + name + "' (expected linear or quadratic)");
}

Matrix2cd step(const BlockParams& block, const FieldProfile& field, double t0, double dt,
               StepOrder order) {
  if (!(dt > 0.0)) throw DomainError("step duration must be positive");
  if (!(t0 >= 0.0) || t0 + dt > 1.0 + 1e-12) {
    throw DomainError("step [" + std::to_string(t0) + ", " + std::to_string(t0 + dt) +
                      "] leaves the gate window");
  }
  const double scale = block.field_scale();
  const double b = scale * value(field, t0);
  const Matrix2cd id = Matrix2cd::Identity();
  const Matrix2cd L = generator(block, b);
  Matrix2cd s = id + 1i * dt * L;
  if (order == StepOrder::Quadratic) {
    const double db = scale * derivative(field, t0);
    const Matrix2cd Q = (block.Jeff * block.Jeff + b * b) * id - 1i * db * sigma_q(block.q);
    s -= 0.5 * dt * dt * Q;
  }
  return s;
}

Matrix2cd evolve(const EvolutionSpec& spec) {
  if (spec.n < 1) throw ValidationError("partition count n must be >= 1");
  const double dt = 1.0 / spec.n;
  Matrix2cd u = Matrix2cd::Identity();
  for (int i = 0; i < spec.n; ++i) {
    const double t0 = static_cast<double>(i) / spec.n;
    u = step(spec.block, spec.field, t0, dt, spec.order) * u;
    if (spec.projectEachStep) u = nearest_unitary(u);
  }
  if (spec.attachGlobalPhase) u = global_phase(spec.block) * u;
  return u;
}

Matrix2cd exact_constant(const BlockParams& block, double bValue, double t) {
  const double omega = std::hypot(block.Jeff, bValue);
  if (omega == 0.0) return Matrix2cd::Identity();
  const Matrix2cd n = generator(block, bValue) / omega;
  return std::cos(omega * t) * Matrix2cd::Identity() + 1i * std::sin(omega * t) * n;
}

Matrix2cd exact_commuting(const BlockParams& block, const FieldProfile& field) {
  if (block.Jeff != 0.0) throw ValidationError("exact_commuting requires Jeff == 0");
  const double phase = block.field_scale() * integral(field, 0.0, 1.0);
  return std::cos(phase) * Matrix2cd::Identity() + 1i * std::sin(phase) * sigma_q(block.q);
}

Matrix2cd exact_stepwise(const BlockParams& block, const FieldProfile& field) {
  if (field.kind() == FieldKind::HalfSine) {
    throw ValidationError("exact_stepwise requires a piecewise-constant field");
  }
  Matrix2cd u = Matrix2cd::Identity();
  double left = 0.0;
  const auto& bp = field.breakpoints();
  for (std::size_t i = 0; i <= bp.size(); ++i) {
    const double right = i < bp.size() ? bp[i] : 1.0;
    const double b = block.field_scale() * value(field, left);
    u = exact_constant(block, b, right - left) * u;
    left = right;
  }
  return u;
}

Matrix2cd reference(const BlockParams& block, const FieldProfile& field, bool attachGlobalPhase,
                    const ReferenceOptions& options) {
  Matrix2cd result;
  if (field.kind() == FieldKind::Stepwise) {
    result = exact_stepwise(block, field);
  } else {
    EvolutionSpec spec{block, field, options.startSteps, StepOrder::Quadratic, false, false};
    Matrix2cd coarse = evolve(spec);
    Matrix2cd previous;
    bool havePrevious = false;
    bool converged = false;
    while (!converged) {
      if (spec.n > options.maxSteps / 2) {
        throw ConvergenceError("reference propagator did not converge within " +
                               std::to_string(options.maxSteps) + " steps");
      }
      spec.n *= 2;
      const Matrix2cd fine = evolve(spec);
      // Second-order scheme: leading error term cancels in (4 U_2n - U_n) / 3.
      const Matrix2cd extrapolated = (4.0 * fine - coarse) / 3.0;
      converged = havePrevious && max_abs_diff(extrapolated, previous) < options.tol / 10.0;
      previous = extrapolated;
      havePrevious = true;
      coarse = fine;
    }
    result = previous;
  }
  result = nearest_unitary(result);
  if (attachGlobalPhase) result = global_phase(block) * result;
  return result;
}

}  // namespace hsu2
