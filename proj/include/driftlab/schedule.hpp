#pragma once

#include <string>
#include <vector>

#include "driftlab/errors.hpp"

namespace driftlab {

/// Time-dependent class weight p1(alpha) of the first mixture component.
struct PriorSchedule {
  enum class Kind { Constant, Linear, Sudden, Oscillating };

  Kind kind = Kind::Constant;
  double p1 = 0.5;           // constant value
  double alpha_start = 0.0;  // ramp / switch time
  double alpha_end = 0.0;    // ramp end (linear only)
  double p_max = 0.5;
  double period = 0.0;       // oscillation period

  static PriorSchedule constant(double p1);
  static PriorSchedule linear(double alpha_start, double alpha_end, double p_max);
  static PriorSchedule sudden(double alpha_start, double p_max);
  static PriorSchedule oscillating(double period, double p_max);

  /// Times in (0, t_end) where p1(alpha) is not smooth; integrators place
  /// nodes there.
  std::vector<double> breakpoints(double t_end) const;

  std::string describe() const;
};

/// Evaluate p1(alpha). alpha must be >= 0.
double prior_at(const PriorSchedule& schedule, double alpha);

}  // namespace driftlab
