#include "driftlab/gauss.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace driftlab {

namespace {

constexpr double kAsinClampTol = 1e-9;
constexpr double kRadicandTol = 1e-12;

double clamped_asin_arg(double arg) {
  if (std::abs(arg) > 1.0 + kAsinClampTol) {
    throw DomainError("asin argument " + std::to_string(arg) +
                      " outside [-1, 1] beyond clamp tolerance");
  }
  return std::clamp(arg, -1.0, 1.0);
}

}  // namespace

Activation activation_from_string(const std::string& name) {
  if (name == "erf") return Activation::Erf;
  if (name == "relu") return Activation::Relu;
  throw ConfigError("unknown activation '" + name + "' (expected erf or relu)");
}

const char* to_string(Activation kind) {
  return kind == Activation::Erf ? "erf" : "relu";
}

double std_normal_cdf(double z) {
  if (std::isnan(z)) throw DomainError("std_normal_cdf: NaN input");
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double std_normal_pdf(double z) {
  if (std::isnan(z)) throw DomainError("std_normal_pdf: NaN input");
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double activation_value(Activation kind, double x) {
  if (!std::isfinite(x)) throw DomainError("activation: non-finite input");
  if (kind == Activation::Erf) return std::erf(x / std::numbers::sqrt2);
  return x > 0.0 ? x : 0.0;
}

double activation_prime(Activation kind, double x) {
  if (!std::isfinite(x)) throw DomainError("activation_prime: non-finite input");
  if (kind == Activation::Erf)
    return std::sqrt(2.0 / std::numbers::pi) * std::exp(-0.5 * x * x);
  return x > 0.0 ? 1.0 : 0.0;
}

double pair_average(Activation kind, double c11, double c12, double c22) {
  if (c11 < -kRadicandTol || c22 < -kRadicandTol)
    throw DomainError("pair_average: negative variance");
  c11 = std::max(c11, 0.0);
  c22 = std::max(c22, 0.0);
  if (kind == Activation::Erf) {
    const double denom = std::sqrt((1.0 + c11) * (1.0 + c22));
    return 2.0 / std::numbers::pi * std::asin(clamped_asin_arg(c12 / denom));
  }
  const double scale2 = c11 * c22;
  if (scale2 <= 0.0) return 0.0;  // one factor is a.s. zero
  const double rho = clamped_asin_arg(c12 / std::sqrt(scale2));
  double radicand = scale2 - c12 * c12;
  if (radicand < -kRadicandTol * std::max(scale2, 1.0))
    throw DomainError("pair_average: covariance not PSD");
  radicand = std::max(radicand, 0.0);
  return c12 / 4.0 +
         (std::sqrt(radicand) + c12 * std::asin(rho)) / (2.0 * std::numbers::pi);
}

GaussianSpec::GaussianSpec(std::vector<double> mean_in, std::vector<double> cov_in)
    : mean(std::move(mean_in)), cov(std::move(cov_in)) {
  dim = static_cast<int>(mean.size());
  if (dim < 1 || dim > 4) throw DomainError("GaussianSpec: dim must be in 1..4");
  if (cov.size() != static_cast<std::size_t>(dim) * dim)
    throw DomainError("GaussianSpec: cov shape does not match mean length");
  for (double x : mean)
    if (!std::isfinite(x)) throw DomainError("GaussianSpec: non-finite mean");
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      const double a = cov_at(i, j);
      if (!std::isfinite(a)) throw DomainError("GaussianSpec: non-finite covariance");
      if (std::abs(a - cov_at(j, i)) > 1e-12)
        throw DomainError("GaussianSpec: covariance not symmetric");
    }
  }
  Eigen::MatrixXd c(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) c(i, j) = cov_at(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10)
    throw DomainError("GaussianSpec: covariance not positive semi-definite");
}

double heaviside_moment(double a0, std::span<const double> a, double b0,
                        std::span<const double> b, const GaussianSpec& spec) {
  const int d = spec.dim;
  if (static_cast<int>(a.size()) != d || static_cast<int>(b.size()) != d)
    throw DomainError("heaviside_moment: coefficient length mismatch");
  double mu_u = a0, mu_x = b0, var_x = 0.0, cov_ux = 0.0;
  for (int i = 0; i < d; ++i) {
    mu_u += a[i] * spec.mean[i];
    mu_x += b[i] * spec.mean[i];
    for (int j = 0; j < d; ++j) {
      var_x += b[i] * spec.cov_at(i, j) * b[j];
      cov_ux += a[i] * spec.cov_at(i, j) * b[j];
    }
  }
  if (var_x <= 0.0)
    throw DegenerateIndicatorError("heaviside_moment: indicator argument has zero variance");
  const double sigma = std::sqrt(var_x);
  const double t = mu_x / sigma;
  return mu_u * std_normal_cdf(t) + cov_ux * std_normal_pdf(t) / sigma;
}

namespace {

// Golub-Welsch: eigenvalues of the Jacobi matrix are the nodes, squares of the
// first eigenvector components (times mu0) the weights.
QuadratureRule golub_welsch(const Eigen::VectorXd& diag, const Eigen::VectorXd& sub,
                            double mu0) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  const int n = static_cast<int>(diag.size());
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v0 * v0;
  }
  return rule;
}

const QuadratureRule& cached_rule(std::map<int, QuadratureRule>& cache, std::mutex& mtx,
                                  int order, QuadratureRule (*make)(int)) {
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, make(order)).first;
  return it->second;
}

QuadratureRule make_hermite(int order) {
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(order);
  Eigen::VectorXd sub(order - 1);
  for (int k = 1; k < order; ++k) sub(k - 1) = std::sqrt(static_cast<double>(k));
  return golub_welsch(diag, sub, 1.0);
}

QuadratureRule make_legendre(int order) {
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(order);
  Eigen::VectorXd sub(order - 1);
  for (int k = 1; k < order; ++k)
    sub(k - 1) = k / std::sqrt(4.0 * k * k - 1.0);
  return golub_welsch(diag, sub, 2.0);
}

// Whitening factor L with cov = L L^T, built from the eigendecomposition so a
// rank-deficient covariance collapses onto its support subspace.
Eigen::MatrixXd whitening_factor(const GaussianSpec& spec) {
  const int d = spec.dim;
  Eigen::MatrixXd c(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) c(i, j) = spec.cov_at(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c);
  if (es.info() != Eigen::Success)
    throw DomainError("quad_expect: eigendecomposition failed");
  if (es.eigenvalues().minCoeff() < -1e-10)
    throw DomainError("quad_expect: covariance not positive semi-definite");
  Eigen::VectorXd s = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * s.asDiagonal();
}

}  // namespace

const QuadratureRule& gauss_hermite(int order) {
  if (order < 1) throw DomainError("gauss_hermite: order must be >= 1");
  static std::map<int, QuadratureRule> cache;
  static std::mutex mtx;
  return cached_rule(cache, mtx, order, make_hermite);
}

const QuadratureRule& gauss_legendre(int order) {
  if (order < 1) throw DomainError("gauss_legendre: order must be >= 1");
  static std::map<int, QuadratureRule> cache;
  static std::mutex mtx;
  return cached_rule(cache, mtx, order, make_legendre);
}

double quad_expect(const std::function<double(std::span<const double>)>& f,
                   const GaussianSpec& spec, int order) {
  if (order < 2) throw DomainError("quad_expect: order must be >= 2");
  const int d = spec.dim;
  const Eigen::MatrixXd L = whitening_factor(spec);
  const QuadratureRule& rule = gauss_hermite(order);

  std::array<int, 4> idx{};
  std::array<double, 4> z{};
  double sum = 0.0;
  while (true) {
    double w = 1.0;
    for (int k = 0; k < d; ++k) w *= rule.weights[idx[k]];
    for (int i = 0; i < d; ++i) {
      double zi = spec.mean[i];
      for (int k = 0; k < d; ++k) zi += L(i, k) * rule.nodes[idx[k]];
      z[i] = zi;
    }
    sum += w * f(std::span<const double>(z.data(), d));
    int k = 0;
    while (k < d && ++idx[k] == order) idx[k++] = 0;
    if (k == d) break;
  }
  return sum;
}

double quad_expect_halfspace(const std::function<double(std::span<const double>)>& f,
                             std::span<const double> b, double b0,
                             const GaussianSpec& spec, int order, int step_order) {
  const int d = spec.dim;
  if (static_cast<int>(b.size()) != d)
    throw DomainError("quad_expect_halfspace: coefficient length mismatch");
  const Eigen::MatrixXd L = whitening_factor(spec);

  Eigen::VectorXd bv(d);
  for (int i = 0; i < d; ++i) bv(i) = b[i];
  Eigen::VectorXd g = L.transpose() * bv;  // step argument = g.t + g0 in whitened coords
  double g0 = b0;
  for (int i = 0; i < d; ++i) g0 += bv(i) * spec.mean[i];
  const double gnorm = g.norm();
  if (gnorm <= 0.0)
    throw DegenerateIndicatorError("quad_expect_halfspace: indicator has zero variance");

  // Householder rotation taking g/|g| to the first axis.
  Eigen::VectorXd u = g / gnorm;
  Eigen::VectorXd v = u;
  v(0) -= 1.0;
  Eigen::MatrixXd rot = Eigen::MatrixXd::Identity(d, d);
  const double vnorm2 = v.squaredNorm();
  if (vnorm2 > 1e-28) rot -= 2.0 / vnorm2 * (v * v.transpose());
  const Eigen::MatrixXd lq = L * rot;  // z = mean + lq * s, step > 0 iff s1 > s_lo

  const double s_lo = -g0 / gnorm;
  constexpr double kTailCut = 12.0;  // N(0,1) mass beyond is < 1e-32
  if (s_lo >= kTailCut) return 0.0;
  const double lo = std::max(s_lo, -kTailCut);
  const QuadratureRule& gl = gauss_legendre(step_order);
  const QuadratureRule& gh = gauss_hermite(std::max(order, 2));

  const double half = 0.5 * (kTailCut - lo);
  const double mid = 0.5 * (kTailCut + lo);
  const int n = static_cast<int>(gh.nodes.size());

  std::array<int, 4> idx{};
  std::array<double, 4> s{}, z{};
  double sum = 0.0;
  for (std::size_t a = 0; a < gl.nodes.size(); ++a) {
    const double s1 = mid + half * gl.nodes[a];
    const double w1 = half * gl.weights[a] * std_normal_pdf(s1);
    s[0] = s1;
    idx.fill(0);
    while (true) {
      double w = w1;
      for (int k = 1; k < d; ++k) {
        s[k] = gh.nodes[idx[k]];
        w *= gh.weights[idx[k]];
      }
      for (int i = 0; i < d; ++i) {
        double zi = spec.mean[i];
        for (int k = 0; k < d; ++k) zi += lq(i, k) * s[k];
        z[i] = zi;
      }
      sum += w * f(std::span<const double>(z.data(), d));
      if (d == 1) break;
      int k = 1;
      while (k < d && ++idx[k] == n) idx[k++] = 0;
      if (k == d) break;
    }
  }
  return sum;
}

namespace detail {

double three_point_erf(double c11, double c12, double c13, double c23, double c33) {
  const double lam = (1.0 + c11) * (1.0 + c33) - c13 * c13;
  return 2.0 / std::numbers::pi * (c23 * (1.0 + c11) - c12 * c13) /
         ((1.0 + c11) * std::sqrt(lam));
}

double three_point_relu(double c11, double c12, double c13, double c23, double c33) {
  if (c11 <= 0.0 || c33 <= 0.0) return 0.0;
  const double det = c11 * c33 - c13 * c13;
  if (det <= 1e-10 * c11 * c33) {
    // x3 is (anti-)proportional to x1; opposite signs make the product vanish.
    if (c13 <= 0.0) return 0.0;
    return c13 * c12 / (2.0 * c11);
  }
  // E[x2 | x1, x3] = a x1 + b x3
  const double a = (c33 * c12 - c13 * c23) / det;
  const double b = (c11 * c23 - c13 * c12) / det;
  const double rho = clamped_asin_arg(c13 / std::sqrt(c11 * c33));
  const double cross = pair_average(Activation::Relu, c11, c13, c33);
  const double second =
      c33 * (0.25 + (std::asin(rho) + rho * std::sqrt(std::max(1.0 - rho * rho, 0.0))) /
                        (2.0 * std::numbers::pi));
  return a * cross + b * second;
}

}  // namespace detail

}  // namespace driftlab
