#pragma once

// Small-learning-rate dynamics of a two-unit student network learning a
// drifting two-unit teacher with orthonormal weight vectors. The fields
// (h1, h2, b1, b2) are zero-mean jointly Gaussian with covariance
// [[Q, R], [R^T, I]], so the drive terms reduce to three-point averages
// <g'(h_i) u g(v)> with closed forms for both activations.

#include <utility>

#include "driftlab/gauss.hpp"
#include "driftlab/state.hpp"

namespace driftlab {

struct ScmModel {
  Activation activation = Activation::Erf;
  double delta = 0.0;  // rescaled drift strength (per unit rescaled time)
  double gamma = 0.0;  // rescaled weight decay

  void validate() const;
};

struct ScmDrives {
  double f[2][2];  // F_im = <rho_i b_m>
  double g1_11 = 0, g1_12 = 0, g1_22 = 0;  // G1_ik = <rho_i h_k + rho_k h_i>
};

/// Drive terms of the rescaled-time ODE. ReLU requires Q11, Q22 > 0.
ScmDrives scm_drives(const OrderParameterState& state, Activation activation);

/// dR_im/dt = F_im - (delta + gamma) R_im; dQ_ik/dt = G1_ik - 2 gamma Q_ik.
/// Drift shrinks only the student-teacher overlaps.
OrderParameterState scm_ode_rhs(const OrderParameterState& state, const ScmModel& model);

/// Generalization error 1/2 <(sum_i g(h_i) - sum_m g(b_m))^2> for orthonormal
/// teachers, clamped to be non-negative.
double eps_g_scm(const OrderParameterState& state, Activation activation);

/// Specialization S_i = |R_i1 - R_i2| of each student unit.
std::pair<double, double> specialization(const OrderParameterState& state);

}  // namespace driftlab
