#include "driftlab/scm.hpp"

#include <cmath>

namespace driftlab {

void ScmModel::validate() const {
  if (!(delta >= 0.0) || !std::isfinite(delta))
    throw ConfigError("ScmModel: delta must be finite and >= 0");
  if (!(gamma >= 0.0) || !std::isfinite(gamma))
    throw ConfigError("ScmModel: gamma must be finite and >= 0");
}

namespace {

// Covariance lookup for the joint field vector (h1, h2, b1, b2).
struct FieldCov {
  double c[4][4];
  explicit FieldCov(const OrderParameterState& s) {
    const double q[2][2] = {{s.q11, s.q12}, {s.q12, s.q22}};
    const double r[2][2] = {{s.r11, s.r12}, {s.r21, s.r22}};
    for (int i = 0; i < 2; ++i)
      for (int k = 0; k < 2; ++k) {
        c[i][k] = q[i][k];
        c[i][2 + k] = r[i][k];
        c[2 + k][i] = r[i][k];
        c[2 + i][2 + k] = i == k ? 1.0 : 0.0;
      }
  }
};

// <g'(h_i) * x_u * g(x_v)> with u, v indexing the joint field vector.
double three_point(Activation kind, const FieldCov& cov, int i, int u, int v) {
  const double c11 = cov.c[i][i];
  const double c12 = cov.c[i][u];
  const double c13 = cov.c[i][v];
  const double c23 = cov.c[u][v];
  const double c33 = cov.c[v][v];
  return kind == Activation::Erf ? detail::three_point_erf(c11, c12, c13, c23, c33)
                                 : detail::three_point_relu(c11, c12, c13, c23, c33);
}

// <rho_i * x_u> with rho_i = (tau - y) g'(h_i).
double rho_moment(Activation kind, const FieldCov& cov, int i, int u) {
  double sum = 0.0;
  for (int m = 0; m < 2; ++m) sum += three_point(kind, cov, i, u, 2 + m);
  for (int j = 0; j < 2; ++j) sum -= three_point(kind, cov, i, u, j);
  return sum;
}

}  // namespace

ScmDrives scm_drives(const OrderParameterState& s, Activation activation) {
  s.validate();
  if (activation == Activation::Relu && !(s.q11 > 0.0 && s.q22 > 0.0))
    throw DomainError("scm_drives: ReLU requires Q11, Q22 > 0");
  const FieldCov cov(s);
  ScmDrives d{};
  for (int i = 0; i < 2; ++i)
    for (int m = 0; m < 2; ++m) d.f[i][m] = rho_moment(activation, cov, i, 2 + m);
  d.g1_11 = 2.0 * rho_moment(activation, cov, 0, 0);
  d.g1_22 = 2.0 * rho_moment(activation, cov, 1, 1);
  d.g1_12 = rho_moment(activation, cov, 0, 1) + rho_moment(activation, cov, 1, 0);
  return d;
}

OrderParameterState scm_ode_rhs(const OrderParameterState& s, const ScmModel& model) {
  model.validate();
  const ScmDrives d = scm_drives(s, model.activation);
  const double shrink = model.delta + model.gamma;
  return {d.f[0][0] - shrink * s.r11, d.f[0][1] - shrink * s.r12,
          d.f[1][0] - shrink * s.r21, d.f[1][1] - shrink * s.r22,
          d.g1_11 - 2.0 * model.gamma * s.q11, d.g1_12 - 2.0 * model.gamma * s.q12,
          d.g1_22 - 2.0 * model.gamma * s.q22};
}

double eps_g_scm(const OrderParameterState& s, Activation activation) {
  s.validate();
  const double q[2][2] = {{s.q11, s.q12}, {s.q12, s.q22}};
  const double r[2][2] = {{s.r11, s.r12}, {s.r21, s.r22}};
  double sum = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) sum += pair_average(activation, q[i][i], q[i][k], q[k][k]);
  for (int m = 0; m < 2; ++m)
    for (int n = 0; n < 2; ++n)
      sum += pair_average(activation, 1.0, m == n ? 1.0 : 0.0, 1.0);
  for (int i = 0; i < 2; ++i)
    for (int m = 0; m < 2; ++m) sum -= 2.0 * pair_average(activation, q[i][i], r[i][m], 1.0);
  double eps = 0.5 * sum;
  if (eps < -1e-10) throw DomainError("eps_g_scm: negative result beyond tolerance");
  return std::max(eps, 0.0);
}

std::pair<double, double> specialization(const OrderParameterState& s) {
  return {std::abs(s.r11 - s.r12), std::abs(s.r21 - s.r22)};
}

}  // namespace driftlab
