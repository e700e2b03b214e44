#pragma once

// Deterministic fixed-step integration of the order-parameter ODEs with dense
// observable sampling. Schedule discontinuities are step-aligned: every
// breakpoint is hit by a node exactly, and the nominal step is shortened
// within a segment so steps divide it evenly.

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "driftlab/lvq.hpp"
#include "driftlab/scm.hpp"
#include "driftlab/state.hpp"

namespace driftlab {

struct IntegratorSettings {
  double step = 0.01;
  int sample_stride = 1;              // record every n-th accepted step
  std::vector<double> breakpoints;    // forced node times
  double gram_tol = 1e-6;             // abort when Q leaves the Gram cone by more
};

struct Trajectory {
  std::vector<double> times;
  std::vector<OrderParameterState> states;
  std::vector<std::string> obs_names;
  std::vector<std::vector<double>> obs;  // one row per sample
  std::string meta;

  std::size_t size() const { return times.size(); }
  int column(const std::string& name) const;  // index into obs rows, -1 if absent
};

class IntegrationDivergedError : public Error {
 public:
  IntegrationDivergedError(const std::string& msg, Trajectory partial_in)
      : Error(msg), partial(std::move(partial_in)) {}
  Trajectory partial;
};

using RhsFn = std::function<OrderParameterState(const OrderParameterState&, double)>;
using ObsFn = std::function<std::vector<double>(const OrderParameterState&, double)>;

/// Classic RK4 from t = 0 to t_end. Samples include t = 0, every
/// sample_stride-th step, each breakpoint and t_end.
Trajectory integrate(const RhsFn& rhs, const OrderParameterState& init, double t_end,
                     const IntegratorSettings& settings, const ObsFn& observe = {},
                     const std::vector<std::string>& obs_names = {});

/// LVQ trajectory with observables eps1, eps2, eps_g, eps_ref, eps_track;
/// schedule breakpoints are added automatically.
Trajectory integrate_lvq(const LvqModel& model, const OrderParameterState& init,
                         double t_end, IntegratorSettings settings);

/// Student-teacher trajectory with observables eps_g, S1, S2.
Trajectory integrate_scm(const ScmModel& model, const OrderParameterState& init,
                         double t_end, const IntegratorSettings& settings);

enum class PlateauOutcome { Ok, NoPlateau, NoEscape };

struct PlateauResult {
  PlateauOutcome outcome = PlateauOutcome::NoPlateau;
  double t_enter = 0;  // first time eps_g is inside the plateau band
  double t_leave = 0;  // first time both specializations pass 20% of final
  double length = 0;
};

/// Plateau bounds from a trajectory holding eps_g and S1, S2 observables.
/// t_enter: eps_g first enters eps_plateau +- 1e-4; t_leave: S_i(t) >= 0.2 *
/// s_final_i for both units. Crossings are interpolated linearly between
/// samples.
PlateauResult plateau_bounds(const Trajectory& traj, double eps_plateau,
                             std::pair<double, double> s_final);

}  // namespace driftlab
