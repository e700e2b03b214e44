#pragma once

#include <array>
#include <cmath>

#include "driftlab/errors.hpp"

namespace driftlab {

/// The seven macroscopic overlaps describing two adaptive vectors w_i against
/// two characteristic vectors B_m: R_im = w_i . B_m and Q_ik = w_i . w_k
/// (Q21 == Q12).
struct OrderParameterState {
  double r11 = 0, r12 = 0, r21 = 0, r22 = 0;
  double q11 = 0, q12 = 0, q22 = 0;

  static constexpr int kDim = 7;

  std::array<double, kDim> to_array() const { return {r11, r12, r21, r22, q11, q12, q22}; }

  static OrderParameterState from_array(const std::array<double, kDim>& a) {
    return {a[0], a[1], a[2], a[3], a[4], a[5], a[6]};
  }

  bool finite() const {
    for (double x : to_array())
      if (!std::isfinite(x)) return false;
    return true;
  }

  /// Gram consistency of the Q block: two real vectors must satisfy
  /// Q12^2 <= Q11 Q22.
  bool gram_consistent(double tol = 1e-10) const {
    return q11 >= -tol && q22 >= -tol && q12 * q12 <= q11 * q22 + tol;
  }

  void validate(double tol = 1e-10) const {
    if (!finite()) throw DomainError("OrderParameterState: non-finite entry");
    if (!gram_consistent(tol))
      throw DomainError("OrderParameterState: Q block violates Gram consistency");
  }
};

}  // namespace driftlab
