#pragma once

#include <vector>

namespace hsu2 {

enum class FieldKind { Constant, Stepwise, HalfSine };

/// Scalar envelope B(t) on the dimensionless gate window t in [0,1].
class FieldProfile {
 public:
  static FieldProfile constant(double amplitude);
  /// amplitude * sin(mode * pi * t)
  static FieldProfile half_sine(double amplitude, int mode = 1);
  /// levels[i] holds on [breakpoints[i-1], breakpoints[i]); levels.size() == breakpoints.size() + 1.
  static FieldProfile stepwise(std::vector<double> breakpoints, std::vector<double> levels);

  FieldKind kind() const { return kind_; }
  double amplitude() const { return amplitude_; }
  int mode() const { return mode_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& levels() const { return levels_; }

  /// Same shape, amplitude multiplied by factor.
  FieldProfile scaled(double factor) const;

 private:
  FieldProfile() = default;

  FieldKind kind_ = FieldKind::Constant;
  double amplitude_ = 0.0;
  int mode_ = 1;
  std::vector<double> breakpoints_;
  std::vector<double> levels_;
};

double value(const FieldProfile& f, double t);
double derivative(const FieldProfile& f, double t);
double integral(const FieldProfile& f, double t0, double t1);

// Physical-to-dimensionless conversion: t' = (m c / d) t and
// amplitudes (in angular-frequency units) scale by d / (m c).
struct Scaling {
  double length = 1.0;  // d, metres
  int mode = 1;
  double speedOfLight = 299792458.0;
};

void validate(const Scaling& s);
double to_dimensionless(double amplitude, const Scaling& s);
double from_dimensionless(double amplitude, const Scaling& s);
double to_dimensionless_time(double t, const Scaling& s);

}  // namespace hsu2
