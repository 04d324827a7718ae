#include "hsu2/fields.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/special_functions/cos_pi.hpp>
#include <boost/math/special_functions/sin_pi.hpp>

#include "hsu2/errors.hpp"

namespace hsu2 {

namespace {

void check_window(double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw DomainError("time " + std::to_string(t) + " outside the gate window [0,1]");
  }
}

// Index of the interval containing t (left-closed; t == 1 belongs to the last one).
std::size_t interval_of(const std::vector<double>& breakpoints, double t) {
  return static_cast<std::size_t>(
      std::upper_bound(breakpoints.begin(), breakpoints.end(), t) - breakpoints.begin());
}

}  // namespace

FieldProfile FieldProfile::constant(double amplitude) {
  if (!std::isfinite(amplitude)) throw ValidationError("field amplitude must be finite");
  FieldProfile f;
  f.kind_ = FieldKind::Constant;
  f.amplitude_ = amplitude;
  return f;
}

FieldProfile FieldProfile::half_sine(double amplitude, int mode) {
  if (!std::isfinite(amplitude)) throw ValidationError("field amplitude must be finite");
  if (mode < 1) throw ValidationError("half-sine mode must be >= 1");
  FieldProfile f;
  f.kind_ = FieldKind::HalfSine;
  f.amplitude_ = amplitude;
  f.mode_ = mode;
  return f;
}

FieldProfile FieldProfile::stepwise(std::vector<double> breakpoints, std::vector<double> levels) {
  if (levels.size() != breakpoints.size() + 1) {
    throw ValidationError("stepwise field needs exactly one more level than breakpoints");
  }
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    const double b = breakpoints[i];
    if (!(b > 0.0 && b < 1.0)) throw ValidationError("stepwise breakpoints must lie inside (0,1)");
    if (i > 0 && !(b > breakpoints[i - 1])) {
      throw ValidationError("stepwise breakpoints must be strictly increasing");
    }
  }
  for (double v : levels) {
    if (!std::isfinite(v)) throw ValidationError("stepwise levels must be finite");
  }
  FieldProfile f;
  f.kind_ = FieldKind::Stepwise;
  f.amplitude_ = 1.0;
  f.breakpoints_ = std::move(breakpoints);
  f.levels_ = std::move(levels);
  return f;
}

FieldProfile FieldProfile::scaled(double factor) const {
  FieldProfile f = *this;
  f.amplitude_ *= factor;
  return f;
}

double value(const FieldProfile& f, double t) {
  check_window(t);
  switch (f.kind()) {
    case FieldKind::Constant:
      return f.amplitude();
    case FieldKind::HalfSine:
      return f.amplitude() * boost::math::sin_pi(f.mode() * t);
    case FieldKind::Stepwise:
      return f.amplitude() * f.levels()[interval_of(f.breakpoints(), t)];
  }
  return 0.0;
}

double derivative(const FieldProfile& f, double t) {
  check_window(t);
  switch (f.kind()) {
    case FieldKind::Constant:
      return 0.0;
    case FieldKind::HalfSine:
      return f.amplitude() * f.mode() * std::numbers::pi * boost::math::cos_pi(f.mode() * t);
    case FieldKind::Stepwise:
      if (std::binary_search(f.breakpoints().begin(), f.breakpoints().end(), t)) {
        throw DomainError("stepwise field has no derivative at breakpoint " + std::to_string(t));
      }
      return 0.0;
  }
  return 0.0;
}

double integral(const FieldProfile& f, double t0, double t1) {
  check_window(t0);
  check_window(t1);
  if (t1 < t0) throw DomainError("integral bounds must satisfy t0 <= t1");
  if (t1 == t0) return 0.0;
  switch (f.kind()) {
    case FieldKind::Constant:
      return f.amplitude() * (t1 - t0);
    case FieldKind::HalfSine: {
      const double m = f.mode();
      return f.amplitude() * (boost::math::cos_pi(m * t0) - boost::math::cos_pi(m * t1)) /
             (m * std::numbers::pi);
    }
    case FieldKind::Stepwise: {
      const auto& bp = f.breakpoints();
      double sum = 0.0;
      double left = t0;
      for (std::size_t i = interval_of(bp, t0); left < t1; ++i) {
        const double right = i < bp.size() ? std::min(bp[i], t1) : t1;
        sum += f.levels()[i] * (right - left);
        left = right;
      }
      return f.amplitude() * sum;
    }
  }
  return 0.0;
}

void validate(const Scaling& s) {
  if (!(s.length > 0.0)) throw ValidationError("scaling length d must be positive");
  if (s.mode < 1) throw ValidationError("scaling mode m must be >= 1");
  if (!(s.speedOfLight > 0.0)) throw ValidationError("speed of light must be positive");
}

double to_dimensionless(double amplitude, const Scaling& s) {
  validate(s);
  return amplitude * s.length / (s.mode * s.speedOfLight);
}

double from_dimensionless(double amplitude, const Scaling& s) {
  validate(s);
  return amplitude * (s.mode * s.speedOfLight) / s.length;
}

double to_dimensionless_time(double t, const Scaling& s) {
  validate(s);
  return t * (s.mode * s.speedOfLight) / s.length;
}

}  // namespace hsu2
