#pragma once

// Order-parameter dynamics of winner-takes-all prototype learning on a
// two-Gaussian mixture with time-dependent class weights and weight decay.
//
// Conventions: prototypes and clusters are indexed 1, 2; cluster m has weight
// p_m, center lambda*B_m and variance v_m. With squared Euclidean distances
// the winner indicator for prototype 1 reduces to
//   Theta(d2 - d1) = Theta(2 (h1 - h2) + Q22 - Q11),
// a step function of a single Gaussian variable, so every average the ODE
// needs has a closed form via the Phi/phi moment identity.

#include <utility>

#include "driftlab/schedule.hpp"
#include "driftlab/state.hpp"

namespace driftlab {

struct LvqModel {
  double lambda = 1.0;  // cluster-center offset
  double v1 = 0.4;      // cluster variances
  double v2 = 0.4;
  double eta = 1.0;     // learning rate
  double gamma = 0.0;   // weight-decay rate
  PriorSchedule schedule = PriorSchedule::constant(0.5);

  void validate() const;
};

/// Cluster-conditional and mixture averages of the update modulation f_i.
/// First index is the cluster m in {0, 1}; <f_1 f_2>_m vanishes identically
/// because the two winner indicators are disjoint.
struct LvqDrives {
  double f[2][2];        // f[m][i]     = <f_i>_m
  double bf[2][2][2];    // bf[m][n][i] = <b_n f_i>_m
  double hf[2][2][2];    // hf[m][k][i] = <h_k f_i>_m
  double ff[2][2];       // ff[m][i]    = <f_i^2>_m
  double f_mix[2];       // sum_m p_m <f_i>_m
  double bf_mix[2][2];   // [n][i]
  double hf_mix[2][2];   // [k][i]
  double g2[2];          // sum_m v_m p_m <f_i^2>_m
};

/// All Gaussian averages entering the ODE right-hand side.
/// Requires distinct prototypes: Q11 - 2 Q12 + Q22 > 0.
LvqDrives lvq1_drives(const OrderParameterState& state, double p1, double lambda,
                      double v1, double v2);

/// d{R_im, Q_ik}/dalpha for training at learning rate eta with decay gamma.
OrderParameterState lvq_ode_rhs(const OrderParameterState& state, double alpha,
                                const LvqModel& model);

struct ClassErrors {
  double eps1 = 0;
  double eps2 = 0;
};

/// Per-cluster misclassification probabilities of the nearest-prototype rule.
ClassErrors class_errors(const OrderParameterState& state, double lambda, double v1,
                         double v2);

struct ErrorMeasures {
  double eps_g = 0;     // weighted by p1_eval
  double eps_ref = 0;   // class-balanced reference error
  double eps_track = 0; // equals eps_g when p1_eval is the current schedule weight
};

ErrorMeasures error_measures(double eps1, double eps2, double p1_eval);

}  // namespace driftlab
