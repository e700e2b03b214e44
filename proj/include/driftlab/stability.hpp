#pragma once

// Fixed-point analysis of the student-teacher ODEs: the unspecialized
// symmetric state, its Jacobian spectrum, the leading specialization
// eigenvalue, and the critical drift / weight-decay strengths where that
// eigenvalue changes sign.

#include <complex>
#include <utility>
#include <vector>

#include "driftlab/ode.hpp"
#include "driftlab/scm.hpp"
#include "driftlab/state.hpp"

namespace driftlab {

struct StabilityReport {
  OrderParameterState fixed_point;
  double eps_plateau = 0;
  std::vector<std::complex<double>> eigenvalues;
  double lambda_s = 0;  // largest real part over symmetry-breaking modes
  bool converged = false;
  double residual_norm = 0;
};

/// Newton solve of the symmetric subspace (R, Q, C), then the full Jacobian
/// by central finite differences and its spectrum. lambda_s is the maximum
/// real part over eigenvalues whose eigenvectors leave the symmetric
/// subspace.
StabilityReport find_symmetric_fixed_point(const ScmModel& model);

/// Bisection for the drift strength where lambda_s changes sign, at fixed
/// weight decay. Bracket [0, 1], final width <= 1e-4.
double critical_drift(Activation activation, double gamma = 0.0);

/// Bisection for the weight decay where lambda_s changes sign, at fixed
/// drift. Bracket [0, 2], final width <= 1e-4.
double critical_decay(Activation activation, double delta);

struct FinalState {
  double eps_g = 0;
  OrderParameterState state;
  bool converged = false;
  double t_reached = 0;
};

/// Long-time error of training: integrates from a specialization-seeded start
/// until the RHS norm drops below 1e-9 (or the horizon is exhausted); above
/// the critical drift this lands back on the symmetric plateau.
FinalState final_state_error(const ScmModel& model, double seed_specialization = 1e-3,
                             double horizon = 20000.0);

/// Paper-style starting state: isotropic students without prior knowledge
/// plus a small diagonal specialization seed.
OrderParameterState seeded_scm_init(double seed_specialization = 1e-3);

struct PlateauMetrics {
  StabilityReport report;
  PlateauResult bounds;
  std::pair<double, double> s_final{0, 0};
  double eps_final = 0;
};

/// Plateau bounds of a full learning trajectory for the given model, using
/// the fixed-point error as plateau level and a converged long run for the
/// final specializations.
PlateauMetrics measure_plateau(const ScmModel& model, const OrderParameterState& init,
                               double step = 1e-3);

}  // namespace driftlab
