#include "driftlab/schedule.hpp"

#include <cmath>
#include <numbers>

namespace driftlab {

namespace {

void check_p(double p, const char* what) {
  if (!(p > 0.0 && p < 1.0))
    throw ConfigError(std::string(what) + " must lie in (0, 1)");
}

}  // namespace

PriorSchedule PriorSchedule::constant(double p1) {
  check_p(p1, "constant prior p1");
  PriorSchedule s;
  s.kind = Kind::Constant;
  s.p1 = p1;
  return s;
}

PriorSchedule PriorSchedule::linear(double alpha_start, double alpha_end, double p_max) {
  check_p(p_max, "p_max");
  if (!(alpha_start >= 0.0 && alpha_end > alpha_start))
    throw ConfigError("linear schedule requires alpha_end > alpha_start >= 0");
  PriorSchedule s;
  s.kind = Kind::Linear;
  s.alpha_start = alpha_start;
  s.alpha_end = alpha_end;
  s.p_max = p_max;
  return s;
}

PriorSchedule PriorSchedule::sudden(double alpha_start, double p_max) {
  check_p(p_max, "p_max");
  if (alpha_start < 0.0) throw ConfigError("sudden schedule requires alpha_start >= 0");
  PriorSchedule s;
  s.kind = Kind::Sudden;
  s.alpha_start = alpha_start;
  s.p_max = p_max;
  return s;
}

PriorSchedule PriorSchedule::oscillating(double period, double p_max) {
  check_p(p_max, "p_max");
  if (!(period > 0.0)) throw ConfigError("oscillating schedule requires period > 0");
  PriorSchedule s;
  s.kind = Kind::Oscillating;
  s.period = period;
  s.p_max = p_max;
  return s;
}

std::vector<double> PriorSchedule::breakpoints(double t_end) const {
  std::vector<double> pts;
  switch (kind) {
    case Kind::Linear:
      if (alpha_start > 0.0 && alpha_start < t_end) pts.push_back(alpha_start);
      if (alpha_end < t_end) pts.push_back(alpha_end);
      break;
    case Kind::Sudden:
      if (alpha_start > 0.0 && alpha_start < t_end) pts.push_back(alpha_start);
      break;
    default:
      break;
  }
  return pts;
}

std::string PriorSchedule::describe() const {
  switch (kind) {
    case Kind::Constant:
      return "constant(p1=" + std::to_string(p1) + ")";
    case Kind::Linear:
      return "linear(alpha_start=" + std::to_string(alpha_start) +
             ", alpha_end=" + std::to_string(alpha_end) + ", p_max=" + std::to_string(p_max) + ")";
    case Kind::Sudden:
      return "sudden(alpha_start=" + std::to_string(alpha_start) +
             ", p_max=" + std::to_string(p_max) + ")";
    case Kind::Oscillating:
      return "oscillating(period=" + std::to_string(period) +
             ", p_max=" + std::to_string(p_max) + ")";
  }
  return "?";
}

double prior_at(const PriorSchedule& s, double alpha) {
  if (!(alpha >= 0.0)) throw DomainError("prior_at: alpha must be >= 0");
  switch (s.kind) {
    case PriorSchedule::Kind::Constant:
      return s.p1;
    case PriorSchedule::Kind::Linear:
      if (alpha < s.alpha_start) return 0.5;
      if (alpha >= s.alpha_end) return s.p_max;
      return 0.5 + (s.p_max - 0.5) * (alpha - s.alpha_start) / (s.alpha_end - s.alpha_start);
    case PriorSchedule::Kind::Sudden:
      return alpha <= s.alpha_start ? 1.0 - s.p_max : s.p_max;
    case PriorSchedule::Kind::Oscillating:
      return 0.5 + (s.p_max - 0.5) * std::cos(2.0 * std::numbers::pi * alpha / s.period);
  }
  throw ConfigError("prior_at: invalid schedule kind");
}

}  // namespace driftlab
