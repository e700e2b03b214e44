#include "driftlab/ode.hpp"

#include <algorithm>
#include <cmath>

namespace driftlab {

int Trajectory::column(const std::string& name) const {
  for (std::size_t i = 0; i < obs_names.size(); ++i)
    if (obs_names[i] == name) return static_cast<int>(i);
  return -1;
}

namespace {

using Vec7 = std::array<double, OrderParameterState::kDim>;

Vec7 axpy(const Vec7& x, double a, const Vec7& y) {
  Vec7 out;
  for (int i = 0; i < OrderParameterState::kDim; ++i) out[i] = x[i] + a * y[i];
  return out;
}

}  // namespace

Trajectory integrate(const RhsFn& rhs, const OrderParameterState& init, double t_end,
                     const IntegratorSettings& settings, const ObsFn& observe,
                     const std::vector<std::string>& obs_names) {
  if (!(t_end > 0.0)) throw DomainError("integrate: t_end must be > 0");
  if (!(settings.step > 0.0)) throw DomainError("integrate: step must be > 0");
  if (settings.sample_stride < 1) throw DomainError("integrate: sample_stride must be >= 1");
  init.validate();

  // Segment boundaries: breakpoints inside (0, t_end), then t_end.
  std::vector<double> bounds;
  for (double b : settings.breakpoints)
    if (b > 0.0 && b < t_end) bounds.push_back(b);
  std::sort(bounds.begin(), bounds.end());
  bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());
  bounds.push_back(t_end);

  Trajectory traj;
  traj.obs_names = obs_names;
  auto record = [&](double t, const OrderParameterState& s) {
    if (!traj.times.empty() && t <= traj.times.back()) return;
    traj.times.push_back(t);
    traj.states.push_back(s);
    if (observe) traj.obs.push_back(observe(s, t));
  };

  OrderParameterState state = init;
  double t = 0.0;
  record(t, state);
  long steps_done = 0;

  for (double seg_end : bounds) {
    const double seg_len = seg_end - t;
    if (seg_len <= 0.0) continue;
    const long n = std::max<long>(1, static_cast<long>(std::ceil(seg_len / settings.step - 1e-12)));
    const double h = seg_len / static_cast<double>(n);
    const double seg_start = t;
    for (long j = 0; j < n; ++j) {
      const Vec7 y = state.to_array();
      const auto f = [&](const Vec7& v, double tt) {
        return rhs(OrderParameterState::from_array(v), tt).to_array();
      };
      const Vec7 k1 = f(y, t);
      const Vec7 k2 = f(axpy(y, 0.5 * h, k1), t + 0.5 * h);
      const Vec7 k3 = f(axpy(y, 0.5 * h, k2), t + 0.5 * h);
      const Vec7 k4 = f(axpy(y, h, k3), t + h);
      Vec7 next;
      for (int i = 0; i < OrderParameterState::kDim; ++i)
        next[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      state = OrderParameterState::from_array(next);
      t = (j + 1 == n) ? seg_end : seg_start + h * static_cast<double>(j + 1);
      ++steps_done;

      if (!state.finite() || !state.gram_consistent(settings.gram_tol)) {
        record(t, state);
        throw IntegrationDivergedError(
            "integrate: state invariants violated at t = " + std::to_string(t), traj);
      }
      if (steps_done % settings.sample_stride == 0 || j + 1 == n) record(t, state);
    }
  }
  return traj;
}

Trajectory integrate_lvq(const LvqModel& model, const OrderParameterState& init,
                         double t_end, IntegratorSettings settings) {
  model.validate();
  for (double b : model.schedule.breakpoints(t_end)) settings.breakpoints.push_back(b);
  const RhsFn rhs = [&model](const OrderParameterState& s, double t) {
    return lvq_ode_rhs(s, t, model);
  };
  const ObsFn obs = [&model](const OrderParameterState& s, double t) {
    const ClassErrors ce = class_errors(s, model.lambda, model.v1, model.v2);
    const ErrorMeasures em = error_measures(ce.eps1, ce.eps2, prior_at(model.schedule, t));
    return std::vector<double>{ce.eps1, ce.eps2, em.eps_g, em.eps_ref, em.eps_track};
  };
  Trajectory traj = integrate(rhs, init, t_end, settings, obs,
                              {"eps1", "eps2", "eps_g", "eps_ref", "eps_track"});
  traj.meta = "lvq " + model.schedule.describe();
  return traj;
}

Trajectory integrate_scm(const ScmModel& model, const OrderParameterState& init,
                         double t_end, const IntegratorSettings& settings) {
  model.validate();
  const RhsFn rhs = [&model](const OrderParameterState& s, double) {
    return scm_ode_rhs(s, model);
  };
  const ObsFn obs = [&model](const OrderParameterState& s, double) {
    const auto [s1, s2] = specialization(s);
    return std::vector<double>{eps_g_scm(s, model.activation), s1, s2};
  };
  Trajectory traj = integrate(rhs, init, t_end, settings, obs, {"eps_g", "S1", "S2"});
  traj.meta = std::string("scm ") + to_string(model.activation);
  return traj;
}

namespace {

// First time the piecewise-linear interpolant of (times, values) satisfies
// pred; returns false if never.
bool first_crossing(const std::vector<double>& times, const std::vector<double>& values,
                    double threshold, bool upward, double* t_out) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    const bool hit = upward ? values[i] >= threshold : values[i] <= threshold;
    if (!hit) continue;
    if (i == 0) {
      *t_out = times[0];
      return true;
    }
    const double v0 = values[i - 1], v1 = values[i];
    if (v1 == v0) {
      *t_out = times[i];
      return true;
    }
    const double f = (threshold - v0) / (v1 - v0);
    *t_out = times[i - 1] + std::clamp(f, 0.0, 1.0) * (times[i] - times[i - 1]);
    return true;
  }
  return false;
}

}  // namespace

PlateauResult plateau_bounds(const Trajectory& traj, double eps_plateau,
                             std::pair<double, double> s_final) {
  constexpr double kBand = 1e-4;
  const int ce = traj.column("eps_g");
  const int c1 = traj.column("S1");
  const int c2 = traj.column("S2");
  if (ce < 0 || c1 < 0 || c2 < 0)
    throw DomainError("plateau_bounds: trajectory lacks eps_g/S1/S2 observables");

  PlateauResult res;
  double t0 = 0.0;
  bool entered = false;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double e = traj.obs[i][static_cast<std::size_t>(ce)];
    if (std::abs(e - eps_plateau) < kBand) {
      t0 = traj.times[i];
      entered = true;
      break;
    }
  }
  if (!entered) {
    res.outcome = PlateauOutcome::NoPlateau;
    return res;
  }

  // Escape: both units must reach 20% of their final specialization.
  std::vector<double> margin(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double m1 = traj.obs[i][static_cast<std::size_t>(c1)] - 0.2 * s_final.first;
    const double m2 = traj.obs[i][static_cast<std::size_t>(c2)] - 0.2 * s_final.second;
    margin[i] = std::min(m1, m2);
  }
  double tp = 0.0;
  if (!first_crossing(traj.times, margin, 0.0, true, &tp)) {
    res.outcome = PlateauOutcome::NoEscape;
    res.t_enter = t0;
    return res;
  }
  res.outcome = PlateauOutcome::Ok;
  res.t_enter = t0;
  res.t_leave = tp;
  res.length = std::max(tp - t0, 0.0);
  return res;
}

}  // namespace driftlab
