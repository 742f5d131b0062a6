#include "bellnoise/distortion.hpp"

#include <cmath>
#include <stdexcept>

namespace bellnoise {

DistortionParams DistortionParams::then(const DistortionParams& outer) const {
  if (outer.n_outcomes != n_outcomes)
    throw std::invalid_argument("cannot compose distortions with different K");
  // s p - b followed by s' p - b': scale s s', offset s' b + b'.
  return {outer.scale() * b_coef + outer.b_coef, n_outcomes};
}

ComplementForm to_complement_form(const DistortionParams& d) {
  return {d.scale() - d.b_coef, d.b_coef};
}

Eigen::VectorXd SignedDistribution::clamp_renormalize() const {
  Eigen::VectorXd out = entries.cwiseMax(0.0);
  const double s = out.sum();
  if (s <= 0.0)
    throw std::domain_error("clamped distribution has zero total mass");
  return out / s;
}

SignedDistribution affine_distort(const Eigen::VectorXd& p,
                                  const DistortionParams& d) {
  if (p.size() != d.n_outcomes)
    throw std::invalid_argument("distribution size does not match K");
  if (std::abs(p.sum() - 1.0) > 1e-9)
    throw std::invalid_argument("input distribution does not sum to 1");
  return {(d.scale() * p).array() - d.b_coef};
}

JointDistribution affine_distort(const JointDistribution& p,
                                 const DistortionParams& d) {
  if (d.n_outcomes != 4)
    throw std::invalid_argument("pair experiment distortion requires K = 4");
  const double s = d.scale(), b = d.b_coef;
  return {s * p.p_uu - b, s * p.p_ud - b, s * p.p_du - b, s * p.p_dd - b};
}

DensityMatrix distort_state(const DensityMatrix& rho, double visibility) {
  return mix_with_identity(rho, visibility);
}

double correlation_scaling(double visibility) { return visibility; }

AffineFit fit_affine(const std::vector<std::pair<double, double>>& pairs,
                     int n_outcomes) {
  if (pairs.size() < 2)
    throw std::invalid_argument("fit_affine needs at least two pairs");
  if (n_outcomes < 2) throw std::invalid_argument("K must be >= 2");

  double p_min = pairs.front().first, p_max = p_min;
  for (const auto& [pin, pout] : pairs) {
    p_min = std::min(p_min, pin);
    p_max = std::max(p_max, pin);
  }
  if (p_max - p_min < 1e-12)
    throw std::domain_error("fit_affine: all inputs equal, b unidentifiable");

  // Residual p_out - p_in - b (K p_in - 1) is linear in the single
  // parameter b; normal equation gives b directly.
  double num = 0.0, den = 0.0;
  for (const auto& [pin, pout] : pairs) {
    const double u = n_outcomes * pin - 1.0;
    num += u * (pout - pin);
    den += u * u;
  }
  if (den < 1e-15)
    throw std::domain_error("fit_affine: inputs pinned at 1/K, unidentifiable");

  const DistortionParams fit{num / den, n_outcomes};
  double max_res = 0.0;
  for (const auto& [pin, pout] : pairs)
    max_res = std::max(max_res,
                       std::abs(pout - (fit.scale() * pin - fit.b_coef)));
  return {fit, max_res};
}

}  // namespace bellnoise
