#include "driftlab/stability.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

namespace driftlab {

namespace {

constexpr double kNewtonTol = 1e-12;
constexpr double kFdStep = 1e-6;

OrderParameterState embed_symmetric(double r, double q, double c) {
  return {r, r, r, r, q, c, q};
}

// Residual of the full RHS restricted to the symmetric subspace coordinates.
Eigen::Vector3d symmetric_residual(const ScmModel& model, const Eigen::Vector3d& x) {
  const OrderParameterState rhs = scm_ode_rhs(embed_symmetric(x(0), x(1), x(2)), model);
  return {rhs.r11, rhs.q11, rhs.q12};
}

// Starting guess: ride the flow from the no-prior-knowledge state into the
// quasi-stationary regime and symmetrize.
Eigen::Vector3d newton_seed(const ScmModel& model) {
  IntegratorSettings settings;
  settings.step = 1e-3;
  settings.sample_stride = 1000;
  const OrderParameterState init{0, 0, 0, 0, 0.5, 0.49, 0.5};
  const Trajectory traj = integrate(
      [&](const OrderParameterState& s, double) { return scm_ode_rhs(s, model); }, init,
      8.0, settings);
  const OrderParameterState& s = traj.states.back();
  const double r = 0.25 * (s.r11 + s.r12 + s.r21 + s.r22);
  return {r, 0.5 * (s.q11 + s.q22), s.q12};
}

bool newton_solve(const ScmModel& model, Eigen::Vector3d& x, double* residual_norm) {
  for (int iter = 0; iter < 80; ++iter) {
    const Eigen::Vector3d f = symmetric_residual(model, x);
    *residual_norm = f.norm();
    if (*residual_norm <= kNewtonTol) return true;
    Eigen::Matrix3d jac;
    for (int j = 0; j < 3; ++j) {
      Eigen::Vector3d xp = x, xm = x;
      xp(j) += kFdStep;
      xm(j) -= kFdStep;
      jac.col(j) = (symmetric_residual(model, xp) - symmetric_residual(model, xm)) /
                   (2.0 * kFdStep);
    }
    Eigen::Vector3d step = jac.partialPivLu().solve(-f);
    // Damped update keeping the state inside the admissible cone.
    double scale = 1.0;
    for (int tries = 0; tries < 40; ++tries) {
      const Eigen::Vector3d cand = x + scale * step;
      const bool admissible = cand(1) > 1e-8 && cand(2) * cand(2) < cand(1) * cand(1) + 1e-12;
      if (admissible &&
          symmetric_residual(model, cand).norm() <= (1.0 - 1e-4 * scale) * *residual_norm) {
        x = cand;
        break;
      }
      scale *= 0.5;
      if (tries == 39) return false;
    }
  }
  const Eigen::Vector3d f = symmetric_residual(model, x);
  *residual_norm = f.norm();
  return *residual_norm <= kNewtonTol;
}

Eigen::MatrixXd full_jacobian(const ScmModel& model, const OrderParameterState& at,
                              double fd_step) {
  constexpr int d = OrderParameterState::kDim;
  Eigen::MatrixXd jac(d, d);
  const std::array<double, d> base = at.to_array();
  for (int j = 0; j < d; ++j) {
    std::array<double, d> xp = base, xm = base;
    xp[j] += fd_step;
    xm[j] -= fd_step;
    const auto fp = scm_ode_rhs(OrderParameterState::from_array(xp), model).to_array();
    const auto fm = scm_ode_rhs(OrderParameterState::from_array(xm), model).to_array();
    for (int i = 0; i < d; ++i) jac(i, j) = (fp[i] - fm[i]) / (2.0 * fd_step);
  }
  return jac;
}

// Span of the symmetric subspace in (R11,R12,R21,R22,Q11,Q12,Q22) coordinates.
Eigen::MatrixXd symmetric_basis() {
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(7, 3);
  basis(0, 0) = basis(1, 0) = basis(2, 0) = basis(3, 0) = 0.5;
  basis(4, 1) = basis(6, 1) = std::numbers::sqrt2 / 2.0;
  basis(5, 2) = 1.0;
  return basis;
}

}  // namespace

StabilityReport find_symmetric_fixed_point(const ScmModel& model) {
  model.validate();
  StabilityReport report;

  Eigen::Vector3d x = newton_seed(model);
  bool ok = newton_solve(model, x, &report.residual_norm);
  if (!ok) {
    // multi-start fallback over a coarse (R, Q, C) grid
    for (double r : {0.05, 0.2, 0.4, 0.6}) {
      for (double q : {0.1, 0.3, 0.6, 1.0}) {
        for (double frac : {0.3, 0.7, 0.95}) {
          Eigen::Vector3d guess(r, q, frac * q);
          double res = 0.0;
          if (newton_solve(model, guess, &res)) {
            x = guess;
            report.residual_norm = res;
            ok = true;
            break;
          }
        }
        if (ok) break;
      }
      if (ok) break;
    }
  }
  report.converged = ok;
  report.fixed_point = embed_symmetric(x(0), x(1), x(2));
  if (!ok) return report;

  report.eps_plateau = eps_g_scm(report.fixed_point, model.activation);

  const Eigen::MatrixXd jac = full_jacobian(model, report.fixed_point, kFdStep);
  Eigen::EigenSolver<Eigen::MatrixXd> es(jac);
  if (es.info() != Eigen::Success)
    throw DomainError("find_symmetric_fixed_point: eigensolver failed");

  const Eigen::MatrixXd basis = symmetric_basis();
  const Eigen::MatrixXd proj =
      Eigen::MatrixXd::Identity(7, 7) - basis * basis.transpose();
  report.lambda_s = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 7; ++i) {
    report.eigenvalues.push_back(es.eigenvalues()(i));
    const Eigen::VectorXcd v = es.eigenvectors().col(i);
    const double outside = (proj * v).norm() / v.norm();
    if (outside > 1e-6)
      report.lambda_s = std::max(report.lambda_s, es.eigenvalues()(i).real());
  }
  return report;
}

namespace {

double lambda_s_at(Activation activation, double delta, double gamma) {
  ScmModel model{activation, delta, gamma};
  const StabilityReport rep = find_symmetric_fixed_point(model);
  if (!rep.converged)
    throw Error("lambda_s: fixed-point solve failed at delta=" + std::to_string(delta) +
                " gamma=" + std::to_string(gamma));
  return rep.lambda_s;
}

double bisect_sign_change(const std::function<double(double)>& f, double lo, double hi,
                          double width) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw BracketError("bisection: no sign change in [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "]");
  while (hi - lo > width) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if (fmid == 0.0) return mid;
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double critical_drift(Activation activation, double gamma) {
  return bisect_sign_change(
      [&](double delta) { return lambda_s_at(activation, delta, gamma); }, 0.0, 1.0,
      1e-4);
}

double critical_decay(Activation activation, double delta) {
  return bisect_sign_change(
      [&](double gamma) { return lambda_s_at(activation, delta, gamma); }, 0.0, 2.0,
      1e-4);
}

OrderParameterState seeded_scm_init(double seed_specialization) {
  return {seed_specialization, 0.0, 0.0, seed_specialization, 0.5, 0.49, 0.5};
}

FinalState final_state_error(const ScmModel& model, double seed_specialization,
                             double horizon) {
  model.validate();
  FinalState out;
  OrderParameterState state = seeded_scm_init(seed_specialization);
  IntegratorSettings settings;
  settings.step = 1e-3;
  settings.sample_stride = 1 << 30;  // endpoints only
  const double chunk = 25.0;
  double t = 0.0;
  while (t < horizon) {
    const Trajectory traj = integrate(
        [&](const OrderParameterState& s, double) { return scm_ode_rhs(s, model); },
        state, chunk, settings);
    state = traj.states.back();
    t += chunk;
    double rhs_norm = 0.0;
    for (double v : scm_ode_rhs(state, model).to_array())
      rhs_norm = std::max(rhs_norm, std::abs(v));
    if (rhs_norm < 1e-9) {
      out.converged = true;
      break;
    }
  }
  out.state = state;
  out.t_reached = t;
  out.eps_g = eps_g_scm(state, model.activation);
  return out;
}

PlateauMetrics measure_plateau(const ScmModel& model, const OrderParameterState& init,
                               double step) {
  PlateauMetrics metrics;
  metrics.report = find_symmetric_fixed_point(model);
  const FinalState fin = final_state_error(model);
  metrics.eps_final = fin.eps_g;
  metrics.s_final = specialization(fin.state);

  if (metrics.report.lambda_s <= 0.0 || metrics.s_final.first < 1e-6 ||
      metrics.s_final.second < 1e-6) {
    // stable plateau: no escape to measure
    metrics.bounds.outcome = PlateauOutcome::NoEscape;
    return metrics;
  }

  // Horizon from the linear escape rate, with slack for the approach phase.
  const auto [s1, s2] = specialization(init);
  const double s0 = std::max(std::min(s1, s2), 1e-12);
  const double target = 0.2 * std::min(metrics.s_final.first, metrics.s_final.second);
  const double t_escape = std::log(std::max(target / s0, 2.0)) / metrics.report.lambda_s;
  const double t_end = std::min(5.0 * t_escape + 50.0, 40000.0);

  IntegratorSettings settings;
  settings.step = step;
  settings.sample_stride = std::max(1, static_cast<int>(0.01 / step));
  const Trajectory traj = integrate_scm(model, init, t_end, settings);
  metrics.bounds = plateau_bounds(traj, metrics.report.eps_plateau, metrics.s_final);
  return metrics;
}

}  // namespace driftlab
