#include "driftlab/lvq.hpp"

#include <cmath>

#include "driftlab/gauss.hpp"

namespace driftlab {

void LvqModel::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw ConfigError("LvqModel: lambda must be > 0");
  if (!(v1 > 0.0) || !(v2 > 0.0)) throw ConfigError("LvqModel: variances must be > 0");
  if (!(eta > 0.0)) throw ConfigError("LvqModel: eta must be > 0");
  if (!(gamma >= 0.0)) throw ConfigError("LvqModel: gamma must be >= 0");
}

LvqDrives lvq1_drives(const OrderParameterState& s, double p1, double lambda,
                      double v1, double v2) {
  s.validate();
  const double d2 = s.q11 - 2.0 * s.q12 + s.q22;  // |w1 - w2|^2
  if (!(d2 > 0.0))
    throw DegenerateIndicatorError("lvq1_drives: prototypes coincide (zero indicator variance)");

  const double p[2] = {p1, 1.0 - p1};
  const double v[2] = {v1, v2};
  const double r[2][2] = {{s.r11, s.r12}, {s.r21, s.r22}};
  const double q[2][2] = {{s.q11, s.q12}, {s.q12, s.q22}};

  LvqDrives out{};
  out.g2[0] = out.g2[1] = 0.0;
  for (int i = 0; i < 2; ++i) {
    out.f_mix[i] = 0.0;
    for (int n = 0; n < 2; ++n) out.bf_mix[n][i] = out.hf_mix[n][i] = 0.0;
  }

  // Winner indicator of prototype 1: Theta(x) with x = 2(h1 - h2) + Q22 - Q11.
  for (int m = 0; m < 2; ++m) {
    const double mu_h[2] = {lambda * r[0][m], lambda * r[1][m]};
    const double mu_b[2] = {m == 0 ? lambda : 0.0, m == 1 ? lambda : 0.0};
    const double mu_x = 2.0 * (mu_h[0] - mu_h[1]) + s.q22 - s.q11;
    const double var_x = 4.0 * v[m] * d2;
    const double sigma = std::sqrt(var_x);
    const double t = mu_x / sigma;
    const double cdf = std_normal_cdf(t);
    const double pdf_over_sigma = std_normal_pdf(t) / sigma;

    // Cov(h_k, x) and Cov(b_n, x) under cluster m.
    double cov_h[2], cov_b[2];
    for (int k = 0; k < 2; ++k) cov_h[k] = 2.0 * v[m] * (q[k][0] - q[k][1]);
    for (int n = 0; n < 2; ++n) cov_b[n] = 2.0 * v[m] * (r[0][n] - r[1][n]);

    // Sign of the update: attract the matching class, repel the other.
    const double psi[2] = {m == 0 ? 1.0 : -1.0, m == 1 ? 1.0 : -1.0};

    // <u Theta(x)>_m = mu_u cdf + Cov(u, x) pdf/sigma; prototype 2 sees
    // Theta(-x), i.e. the complement.
    const double theta1 = cdf;
    const double theta2 = 1.0 - cdf;
    out.f[m][0] = psi[0] * theta1;
    out.f[m][1] = psi[1] * theta2;
    out.ff[m][0] = theta1;
    out.ff[m][1] = theta2;
    for (int n = 0; n < 2; ++n) {
      const double m1 = mu_b[n] * cdf + cov_b[n] * pdf_over_sigma;
      out.bf[m][n][0] = psi[0] * m1;
      out.bf[m][n][1] = psi[1] * (mu_b[n] - m1);
    }
    for (int k = 0; k < 2; ++k) {
      const double m1 = mu_h[k] * cdf + cov_h[k] * pdf_over_sigma;
      out.hf[m][k][0] = psi[0] * m1;
      out.hf[m][k][1] = psi[1] * (mu_h[k] - m1);
    }

    for (int i = 0; i < 2; ++i) {
      out.f_mix[i] += p[m] * out.f[m][i];
      out.g2[i] += v[m] * p[m] * out.ff[m][i];
      for (int n = 0; n < 2; ++n) out.bf_mix[n][i] += p[m] * out.bf[m][n][i];
      for (int k = 0; k < 2; ++k) out.hf_mix[k][i] += p[m] * out.hf[m][k][i];
    }
  }
  return out;
}

OrderParameterState lvq_ode_rhs(const OrderParameterState& s, double alpha,
                                const LvqModel& model) {
  model.validate();
  const double p1 = prior_at(model.schedule, alpha);
  const LvqDrives d = lvq1_drives(s, p1, model.lambda, model.v1, model.v2);
  const double eta = model.eta;
  const double gamma = model.gamma;

  const double r[2][2] = {{s.r11, s.r12}, {s.r21, s.r22}};
  const double q[2][2] = {{s.q11, s.q12}, {s.q12, s.q22}};

  double dr[2][2], dq[2][2];
  for (int i = 0; i < 2; ++i)
    for (int m = 0; m < 2; ++m)
      dr[i][m] = eta * (d.bf_mix[m][i] - r[i][m] * d.f_mix[i]) - gamma * r[i][m];
  for (int i = 0; i < 2; ++i) {
    for (int k = i; k < 2; ++k) {
      const double g1 = d.hf_mix[i][k] + d.hf_mix[k][i] -
                        q[i][k] * (d.f_mix[i] + d.f_mix[k]);
      const double g2 = (i == k) ? d.g2[i] : 0.0;  // <f_1 f_2>_m = 0
      dq[i][k] = eta * g1 + eta * eta * g2 - 2.0 * gamma * q[i][k];
    }
  }
  return {dr[0][0], dr[0][1], dr[1][0], dr[1][1], dq[0][0], dq[0][1], dq[1][1]};
}

ClassErrors class_errors(const OrderParameterState& s, double lambda, double v1,
                         double v2) {
  s.validate();
  const double d2 = s.q11 - 2.0 * s.q12 + s.q22;
  if (!(d2 > 0.0))
    throw DegenerateIndicatorError("class_errors: prototypes coincide");
  const double denom = 2.0 * std::sqrt(d2);
  // Misclassification of cluster k: the competitor's field w_khat . xi wins,
  // whose cluster-k mean is lambda * R_khat,k.
  const double z1 = (s.q11 - s.q22 - 2.0 * lambda * (s.r11 - s.r21)) /
                    (denom * std::sqrt(v1));
  const double z2 = (s.q22 - s.q11 - 2.0 * lambda * (s.r22 - s.r12)) /
                    (denom * std::sqrt(v2));
  return {std_normal_cdf(z1), std_normal_cdf(z2)};
}

ErrorMeasures error_measures(double eps1, double eps2, double p1_eval) {
  if (!(eps1 >= 0.0 && eps1 <= 1.0 && eps2 >= 0.0 && eps2 <= 1.0))
    throw DomainError("error_measures: class errors must lie in [0, 1]");
  if (!(p1_eval >= 0.0 && p1_eval <= 1.0))
    throw DomainError("error_measures: p1 must lie in [0, 1]");
  ErrorMeasures em;
  em.eps_g = p1_eval * eps1 + (1.0 - p1_eval) * eps2;
  em.eps_ref = 0.5 * (eps1 + eps2);
  em.eps_track = em.eps_g;
  return em;
}

}  // namespace driftlab
