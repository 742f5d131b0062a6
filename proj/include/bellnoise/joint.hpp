#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bellnoise/angles.hpp"

namespace bellnoise {

// Outcome probabilities of a two-outcome pair experiment, in cell order
// (up,up), (up,down), (down,up), (down,down). Entries always sum to one;
// distorted distributions may carry negative entries, so positivity is a
// property to check (is_valid), not a constructor invariant.
struct JointDistribution {
  double p_uu = 0.0;
  double p_ud = 0.0;
  double p_du = 0.0;
  double p_dd = 0.0;

  double sum() const { return p_uu + p_ud + p_du + p_dd; }
  double min_entry() const {
    return std::min({p_uu, p_ud, p_du, p_dd});
  }
  bool is_normalized(double tol = 1e-12) const {
    return std::abs(sum() - 1.0) <= tol;
  }
  bool is_valid(double tol = 1e-12) const {
    return is_normalized(tol) && min_entry() >= -tol;
  }

  Eigen::Vector4d as_vector() const { return {p_uu, p_ud, p_du, p_dd}; }
  static JointDistribution from_vector(const Eigen::Vector4d& v) {
    return {v[0], v[1], v[2], v[3]};
  }
};

// E(a,b): expectation of the product of the two +/-1 outcomes.
inline double correlation(const JointDistribution& d) {
  return d.p_uu + d.p_dd - d.p_du - d.p_ud;
}

// Bell's ad hoc linear hidden-variable model: P(up,up) = |a-b|/(2 pi).
inline JointDistribution classical_joint(double a, double b) {
  const double q = wrap_delta(a, b) / (2.0 * pi);
  return {q, 0.5 - q, 0.5 - q, q};
}

// Singlet-state statistics: P(up,up) = (1/2) sin^2(g (a-b) / 2).
inline JointDistribution quantum_joint(double a, double b,
                                       SpinConvention spin) {
  const double s = std::sin(angle_factor(spin) * wrap_delta(a, b) / 2.0);
  const double q = 0.5 * s * s;
  return {q, 0.5 - q, 0.5 - q, q};
}

// The classical angle difference whose joint distribution reproduces the
// quantum one at delta_q exactly.
inline double classical_match_delta(double delta_q, SpinConvention spin) {
  const double s = std::sin(angle_factor(spin) * delta_q / 2.0);
  return pi * s * s;
}

// The classical angle difference whose correlation equals target.
inline double classical_angles_for_correlation(double target) {
  if (!(std::abs(target) <= 1.0))
    throw std::domain_error("target correlation outside [-1, 1]");
  return pi * (target + 1.0) / 2.0;
}

}  // namespace bellnoise
