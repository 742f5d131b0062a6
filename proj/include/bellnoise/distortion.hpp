#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "bellnoise/density_matrix.hpp"
#include "bellnoise/joint.hpp"

namespace bellnoise {

// Affine distortion of a K-outcome distribution, p' = s p - b. The scale
// is derived as s = 1 + K b so the distorted outcomes always sum to one;
// the constraint cannot be violated by construction.
struct DistortionParams {
  double b_coef = 0.0;
  int n_outcomes = 4;  // K

  double scale() const { return 1.0 + n_outcomes * b_coef; }

  // Distortion acting as a white-noise admixture of visibility V on a
  // four-outcome pair experiment: s = V, b = (V-1)/K.
  static DistortionParams from_visibility(double v, int n_outcomes = 4) {
    return {(v - 1.0) / n_outcomes, n_outcomes};
  }

  // Params of applying *this first, then outer. Closed under composition.
  DistortionParams then(const DistortionParams& outer) const;
};

// Same map written as p' = a p - b (1-p) with a = s - b: reduction of a
// probability estimate by events of the complementary kind.
struct ComplementForm {
  double a_coef = 1.0;
  double b_coef = 0.0;
};

ComplementForm to_complement_form(const DistortionParams& d);

// Distribution that sums to one but may carry negative entries.
struct SignedDistribution {
  Eigen::VectorXd entries;

  bool has_negative(double tol = 0.0) const {
    return entries.minCoeff() < -tol;
  }
  // Explicit post-step for consumers that need a valid distribution.
  Eigen::VectorXd clamp_renormalize() const;
};

SignedDistribution affine_distort(const Eigen::VectorXd& p,
                                  const DistortionParams& d);
JointDistribution affine_distort(const JointDistribution& p,
                                 const DistortionParams& d);

// State-level counterpart of the visibility distortion.
DensityMatrix distort_state(const DensityMatrix& rho, double visibility);

// Factor by which correlations (and CHSH) scale under a visibility-V
// distortion; the offset cancels in the +,+,-,- sum.
double correlation_scaling(double visibility);

// Largest visibility at which the maximized CHSH of the distorted
// quantum spin-1/2 model stays within the classical bound 2.
// Bisection over the maximizer; declared here, defined with the CHSH code.
double critical_visibility_chsh(double tol);

struct AffineFit {
  DistortionParams params;
  double max_residual = 0.0;
};

// Least-squares fit of p_out = s p_in - b subject to s = 1 + K b.
// One free parameter, closed form.
AffineFit fit_affine(const std::vector<std::pair<double, double>>& pairs,
                     int n_outcomes);

}  // namespace bellnoise
