#include "driftlab/mc.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "driftlab/parallel.hpp"

namespace driftlab {

void SimConfig::validate() const {
  if (n < 4) throw ConfigError("SimConfig: n must be >= 4");
  if (!(eta > 0.0)) throw ConfigError("SimConfig: eta must be > 0");
  if (!(gamma >= 0.0)) throw ConfigError("SimConfig: gamma must be >= 0");
  if (runs < 1) throw ConfigError("SimConfig: runs must be >= 1");
  if (steps < 1) throw ConfigError("SimConfig: steps must be >= 1");
  if (sample_every < 1) throw ConfigError("SimConfig: sample_every must be >= 1");
  if (system == System::Scm && !(delta / n < 1.0 && delta >= 0.0))
    throw ConfigError("SimConfig: per-step drift delta/n must lie in [0, 1)");
  if (system == System::Lvq) {
    if (!(lambda > 0.0 && v1 > 0.0 && v2 > 0.0))
      throw ConfigError("SimConfig: mixture parameters must be > 0");
  }
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void fill_gaussian(std::vector<double>& v, Philox& rng) {
  for (double& x : v) x = rng.gaussian();
}

// v <- v - (v.u) u for unit u, repeated for accuracy.
void project_out(std::vector<double>& v, const std::vector<double>& u) {
  const double c = dot(v, u);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * u[i];
}

void normalize(std::vector<double>& v) {
  const double nrm = std::sqrt(dot(v, v));
  if (nrm <= 0.0) throw ConstructionError("normalize: zero vector");
  for (double& x : v) x /= nrm;
}

}  // namespace

VectorState init_vectors(SimConfig::System system, int n, const OrderParameterState& target,
                         std::uint64_t seed, std::uint64_t stream) {
  (void)system;  // the construction is shared by both systems
  if (n < 4)
    throw ConstructionError("init_vectors: need n >= 4 for four constrained vectors");
  target.validate();

  Philox rng(seed, stream);
  VectorState st;
  st.n = n;

  // Random orthonormal frame {b1, b2, e3, e4}; two projection passes keep the
  // residual overlaps at machine precision even for large n.
  std::vector<std::vector<double>*> frame;
  std::vector<double> e3(n), e4(n);
  st.b1.resize(n);
  st.b2.resize(n);
  for (auto* v : {&st.b1, &st.b2, &e3, &e4}) {
    fill_gaussian(*v, rng);
    for (int pass = 0; pass < 2; ++pass)
      for (auto* u : frame) project_out(*v, *u);
    normalize(*v);
    frame.push_back(v);
  }

  const double a1sq = target.q11 - target.r11 * target.r11 - target.r12 * target.r12;
  if (a1sq < -1e-12)
    throw ConstructionError("init_vectors: infeasible target (Q11 too small for R row 1)");
  const double a1 = std::sqrt(std::max(a1sq, 0.0));
  const double cross = target.q12 - target.r11 * target.r21 - target.r12 * target.r22;
  double a2 = 0.0;
  if (a1 > 1e-12) {
    a2 = cross / a1;
  } else if (std::abs(cross) > 1e-12) {
    throw ConstructionError("init_vectors: infeasible target (Q12 inconsistent)");
  }
  const double b2sq =
      target.q22 - target.r21 * target.r21 - target.r22 * target.r22 - a2 * a2;
  if (b2sq < -1e-12)
    throw ConstructionError("init_vectors: infeasible target Gram matrix");
  const double b2c = std::sqrt(std::max(b2sq, 0.0));

  st.w1.assign(n, 0.0);
  st.w2.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    st.w1[i] = target.r11 * st.b1[i] + target.r12 * st.b2[i] + a1 * e3[i];
    st.w2[i] = target.r21 * st.b1[i] + target.r22 * st.b2[i] + a2 * e3[i] + b2c * e4[i];
  }
  return st;
}

namespace {

void sample_input_into(Sample& out, SimConfig::System system, Activation activation,
                       double p1, double lambda, double v1, double v2,
                       const VectorState& state, Philox& rng) {
  const int n = state.n;
  out.xi.resize(n);
  if (system == SimConfig::System::Lvq) {
    const int m = rng.uniform() < p1 ? 1 : 2;
    const std::vector<double>& center = m == 1 ? state.b1 : state.b2;
    const double sd = std::sqrt(m == 1 ? v1 : v2);
    for (int i = 0; i < n; ++i) out.xi[i] = lambda * center[i] + sd * rng.gaussian();
    out.label = m;
    out.target = 0.0;
  } else {
    for (int i = 0; i < n; ++i) out.xi[i] = rng.gaussian();
    out.label = 0;
    out.target = activation_value(activation, dot(state.b1, out.xi)) +
                 activation_value(activation, dot(state.b2, out.xi));
  }
}

}  // namespace

Sample sample_input(SimConfig::System system, Activation activation, double p1,
                    double lambda, double v1, double v2, const VectorState& state,
                    Philox& rng) {
  Sample s;
  sample_input_into(s, system, activation, p1, lambda, v1, v2, state, rng);
  return s;
}

void train_step(SimConfig::System system, Activation activation, VectorState& state,
                const Sample& sample, double eta, double gamma) {
  const int n = state.n;
  const double decay = 1.0 - gamma / n;
  const double rate = eta / n;

  if (system == SimConfig::System::Lvq) {
    double d1 = 0.0, d2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double u1 = sample.xi[i] - state.w1[i];
      const double u2 = sample.xi[i] - state.w2[i];
      d1 += u1 * u1;
      d2 += u2 * u2;
    }
    const int winner = d1 <= d2 ? 1 : 2;
    std::vector<double>& w = winner == 1 ? state.w1 : state.w2;
    std::vector<double>& other = winner == 1 ? state.w2 : state.w1;
    const double psi = winner == sample.label ? 1.0 : -1.0;
    for (int i = 0; i < n; ++i)
      w[i] = decay * w[i] + rate * psi * (sample.xi[i] - w[i]);
    if (gamma != 0.0)
      for (int i = 0; i < n; ++i) other[i] *= decay;
  } else {
    const double h1 = dot(state.w1, sample.xi);
    const double h2 = dot(state.w2, sample.xi);
    const double err = activation_value(activation, h1) +
                       activation_value(activation, h2) - sample.target;
    const double rho1 = -err * activation_prime(activation, h1);
    const double rho2 = -err * activation_prime(activation, h2);
    for (int i = 0; i < n; ++i) {
      state.w1[i] = decay * state.w1[i] + rate * rho1 * sample.xi[i];
      state.w2[i] = decay * state.w2[i] + rate * rho2 * sample.xi[i];
    }
  }
}

namespace {

// Symmetric (Loewdin) re-orthonormalization of the teacher pair.
void orthonormalize_pair(std::vector<double>& b1, std::vector<double>& b2) {
  const double s11 = dot(b1, b1), s22 = dot(b2, b2), s12 = dot(b1, b2);
  const double tr = s11 + s22;
  const double disc = std::sqrt((s11 - s22) * (s11 - s22) + 4.0 * s12 * s12);
  double m11, m12, m22;
  if (disc < 1e-14 * tr) {
    const double inv = 1.0 / std::sqrt(0.5 * tr);
    m11 = m22 = inv;
    m12 = 0.0;
  } else {
    const double mu1 = 0.5 * (tr + disc), mu2 = 0.5 * (tr - disc);
    if (mu2 <= 0.0) throw ConstructionError("orthonormalize_pair: degenerate overlap matrix");
    // eigenvector for mu1, choosing the better-conditioned component
    double vx, vy;
    if (std::abs(s12) > std::abs(mu1 - s11)) {
      vx = s12;
      vy = mu1 - s11;
    } else {
      vx = mu1 - s22;
      vy = s12;
    }
    const double vn = std::sqrt(vx * vx + vy * vy);
    if (vn == 0.0) {
      vx = 1.0;
      vy = 0.0;
    } else {
      vx /= vn;
      vy /= vn;
    }
    const double i1 = 1.0 / std::sqrt(mu1), i2 = 1.0 / std::sqrt(mu2);
    m11 = i1 * vx * vx + i2 * vy * vy;
    m22 = i1 * vy * vy + i2 * vx * vx;
    m12 = (i1 - i2) * vx * vy;
  }
  for (std::size_t i = 0; i < b1.size(); ++i) {
    const double x = b1[i], y = b2[i];
    b1[i] = m11 * x + m12 * y;
    b2[i] = m12 * x + m22 * y;
  }
  normalize(b1);
  normalize(b2);
}

}  // namespace

void drift_teachers(VectorState& state, double delta, Philox& rng) {
  if (delta == 0.0) return;
  const int n = state.n;
  if (n < 3)
    throw ConstructionError("drift_teachers: no orthogonal complement available");
  const double c = 1.0 - delta / n;
  if (!(c > 0.0 && c <= 1.0))
    throw DomainError("drift_teachers: delta/n must lie in [0, 1)");
  const double s = std::sqrt(std::max(1.0 - c * c, 0.0));

  // Both noise directions are drawn orthogonal to the current teacher pair.
  std::vector<double> z1(n), z2(n);
  fill_gaussian(z1, rng);
  fill_gaussian(z2, rng);
  for (auto* z : {&z1, &z2}) {
    project_out(*z, state.b1);
    project_out(*z, state.b2);
    normalize(*z);
  }
  for (int i = 0; i < n; ++i) {
    state.b1[i] = c * state.b1[i] + s * z1[i];
    state.b2[i] = c * state.b2[i] + s * z2[i];
  }
  orthonormalize_pair(state.b1, state.b2);
}

OrderParameterState measure(const VectorState& st) {
  return {dot(st.w1, st.b1), dot(st.w1, st.b2), dot(st.w2, st.b1), dot(st.w2, st.b2),
          dot(st.w1, st.w1), dot(st.w1, st.w2), dot(st.w2, st.w2)};
}

namespace {

std::vector<double> observe_row(const SimConfig& cfg, const OrderParameterState& s,
                                double t) {
  std::vector<double> row = {s.r11, s.r12, s.r21, s.r22, s.q11, s.q12, s.q22};
  if (cfg.system == SimConfig::System::Lvq) {
    const ClassErrors ce = class_errors(s, cfg.lambda, cfg.v1, cfg.v2);
    const ErrorMeasures em = error_measures(ce.eps1, ce.eps2, prior_at(cfg.schedule, t));
    row.insert(row.end(), {ce.eps1, ce.eps2, em.eps_g, em.eps_ref, em.eps_track});
  } else {
    const auto [s1, s2] = specialization(s);
    row.insert(row.end(), {eps_g_scm(s, cfg.activation), s1, s2});
  }
  return row;
}

}  // namespace

McResult run(const SimConfig& cfg) {
  cfg.validate();
  const long n_samples = cfg.steps / cfg.sample_every + 1;
  const double time_unit =
      cfg.system == SimConfig::System::Lvq ? 1.0 / cfg.n : cfg.eta / cfg.n;

  McResult res;
  res.columns = {"R11", "R12", "R21", "R22", "Q11", "Q12", "Q22"};
  if (cfg.system == SimConfig::System::Lvq)
    res.columns.insert(res.columns.end(), {"eps1", "eps2", "eps_g", "eps_ref", "eps_track"});
  else
    res.columns.insert(res.columns.end(), {"eps_g", "S1", "S2"});
  const std::size_t n_cols = res.columns.size();

  res.times.resize(n_samples);
  for (long k = 0; k < n_samples; ++k)
    res.times[k] = static_cast<double>(k * cfg.sample_every) * time_unit;

  // rows[run][sample][col]
  std::vector<std::vector<std::vector<double>>> rows(cfg.runs);
  parallel_for(static_cast<std::size_t>(cfg.runs), [&](std::size_t r) {
    VectorState st = init_vectors(cfg.system, cfg.n, cfg.init, cfg.seed, 2 * r);
    Philox rng(cfg.seed, 2 * r + 1);
    auto& out = rows[r];
    out.reserve(n_samples);
    out.push_back(observe_row(cfg, measure(st), 0.0));
    Sample sample;
    for (long mu = 1; mu <= cfg.steps; ++mu) {
      const double alpha = static_cast<double>(mu - 1) / cfg.n;
      const double p1 = cfg.system == SimConfig::System::Lvq
                            ? prior_at(cfg.schedule, alpha)
                            : 0.5;
      sample_input_into(sample, cfg.system, cfg.activation, p1, cfg.lambda, cfg.v1,
                        cfg.v2, st, rng);
      train_step(cfg.system, cfg.activation, st, sample, cfg.eta, cfg.gamma);
      if (cfg.system == SimConfig::System::Scm) drift_teachers(st, cfg.delta, rng);
      if (mu % cfg.sample_every == 0) {
        const OrderParameterState s = measure(st);
        if (!s.finite())
          throw Error("mc run " + std::to_string(r) + " diverged at step " +
                      std::to_string(mu));
        out.push_back(observe_row(cfg, s, static_cast<double>(mu) * time_unit));
      }
    }
  });

  res.mean.assign(n_samples, std::vector<double>(n_cols, 0.0));
  res.sem.assign(n_samples, std::vector<double>(n_cols, 0.0));
  for (long k = 0; k < n_samples; ++k) {
    for (std::size_t c = 0; c < n_cols; ++c) {
      double m = 0.0;
      for (int r = 0; r < cfg.runs; ++r) m += rows[r][k][c];
      m /= cfg.runs;
      double var = 0.0;
      for (int r = 0; r < cfg.runs; ++r) {
        const double d = rows[r][k][c] - m;
        var += d * d;
      }
      res.mean[k][c] = m;
      res.sem[k][c] =
          cfg.runs > 1 ? std::sqrt(var / (cfg.runs - 1.0) / cfg.runs) : 0.0;
    }
  }
  return res;
}

OrderParameterState McResult::state_at(double t) const {
  if (times.empty()) throw DomainError("McResult::state_at: empty result");
  std::size_t best = 0;
  for (std::size_t i = 1; i < times.size(); ++i)
    if (std::abs(times[i] - t) < std::abs(times[best] - t)) best = i;
  const auto& row = mean[best];
  return {row[0], row[1], row[2], row[3], row[4], row[5], row[6]};
}

}  // namespace driftlab
