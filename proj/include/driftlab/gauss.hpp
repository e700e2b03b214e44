#pragma once

// Exact and numeric expectations over low-dimensional correlated Gaussians.
//
// Everything downstream (ODE right-hand sides, generalization errors) reduces
// to expectations of products of activations, step functions and linear terms
// over 1- to 4-dimensional Gaussian vectors. The closed forms live here, next
// to tensorized Gauss-Hermite quadrature that serves as the numerical
// fallback and as the oracle in the test suite.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "driftlab/errors.hpp"

namespace driftlab {

enum class Activation { Erf, Relu };

Activation activation_from_string(const std::string& name);
const char* to_string(Activation kind);

/// Standard normal CDF. NaN input is rejected; +-inf map to 1 and 0.
double std_normal_cdf(double z);

/// Standard normal density.
double std_normal_pdf(double z);

/// Hidden-unit transfer function g(x): erf(x/sqrt(2)) or x*Theta(x).
double activation_value(Activation kind, double x);

/// g'(x). The ReLU derivative at x == 0 is defined as 0.
double activation_prime(Activation kind, double x);

/// <g(u) g(v)> for zero-mean jointly Gaussian (u, v) with covariance
/// [[c11, c12], [c12, c22]]. Degenerate covariances (c11*c22 -> 0) return the
/// continuous limit for the ReLU branch.
double pair_average(Activation kind, double c11, double c12, double c22);

/// A correlated Gaussian in 1 to 4 dimensions. The constructor validates
/// symmetry (1e-12) and positive semi-definiteness (eigenvalues >= -1e-10).
struct GaussianSpec {
  GaussianSpec(std::vector<double> mean_in, std::vector<double> cov_in);

  int dim = 0;
  std::vector<double> mean;  // length dim
  std::vector<double> cov;   // row-major dim x dim

  double cov_at(int i, int j) const { return cov[static_cast<std::size_t>(i) * dim + j]; }
};

/// <(a.z + a0) * Theta(b.z + b0)> for z ~ spec, in closed form.
/// Throws DegenerateIndicatorError when Var(b.z) = 0.
double heaviside_moment(double a0, std::span<const double> a, double b0,
                        std::span<const double> b, const GaussianSpec& spec);

/// Quadrature rule for integral f(x) w(x) dx with nodes/weights.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Hermite rule in probabilists' normalization: sum_i w_i f(x_i)
/// approximates <f(Z)> for Z ~ N(0,1). Weights sum to 1.
const QuadratureRule& gauss_hermite(int order);

/// Gauss-Legendre rule on [-1, 1].
const QuadratureRule& gauss_legendre(int order);

/// Tensorized Gauss-Hermite estimate of <f(z)> over z ~ spec, whitening via a
/// symmetric eigendecomposition so that rank-deficient covariances integrate
/// over the support subspace.
double quad_expect(const std::function<double(std::span<const double>)>& f,
                   const GaussianSpec& spec, int order);

/// <f(z) * Theta(b.z + b0)> for smooth f: the step direction is rotated onto
/// the first whitened axis and integrated over the half-domain with a mapped
/// Gauss-Legendre rule, all remaining directions with Gauss-Hermite. Converges
/// spectrally for smooth f, unlike plain quadrature of the discontinuous
/// integrand.
double quad_expect_halfspace(const std::function<double(std::span<const double>)>& f,
                             std::span<const double> b, double b0,
                             const GaussianSpec& spec, int order,
                             int step_order = 64);

namespace detail {
// <g'(x1) * x2 * g(x3)> over a zero-mean Gaussian triple with covariance
// entries c_ij. The c22 entry does not enter (x2 appears linearly).
double three_point_erf(double c11, double c12, double c13, double c23, double c33);
double three_point_relu(double c11, double c12, double c13, double c23, double c33);
}  // namespace detail

}  // namespace driftlab
