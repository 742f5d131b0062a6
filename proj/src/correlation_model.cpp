#include "bellnoise/correlation_model.hpp"

#include <stdexcept>

namespace bellnoise {

CorrelationModel CorrelationModel::classical() { return {}; }

CorrelationModel CorrelationModel::quantum(SpinConvention spin) {
  CorrelationModel m;
  m.kind_ = Kind::quantum;
  m.spin_ = spin;
  return m;
}

CorrelationModel CorrelationModel::state(const DensityMatrix& rho) {
  CorrelationModel m;
  m.kind_ = Kind::state;
  m.rho_ = rho;
  return m;
}

CorrelationModel CorrelationModel::distorted(
    const DistortionParams& params) const {
  if (distortion_)
    throw std::invalid_argument(
        "model already distorted; compose params with DistortionParams::then");
  if (params.n_outcomes != 4)
    throw std::invalid_argument("pair experiment distortion requires K = 4");
  CorrelationModel m = *this;
  m.distortion_ = params;
  return m;
}

CorrelationModel CorrelationModel::with_visibility(double v) const {
  if (!(v >= 0.0 && v <= 1.0))
    throw std::domain_error("visibility outside [0, 1]");
  return distorted(DistortionParams::from_visibility(v));
}

JointDistribution CorrelationModel::joint(double a, double b) const {
  JointDistribution d;
  switch (kind_) {
    case Kind::classical_linear:
      d = classical_joint(a, b);
      break;
    case Kind::quantum:
      d = quantum_joint(a, b, spin_);
      break;
    case Kind::state:
      d = born_probabilities(*rho_, a, b);
      break;
  }
  return distortion_ ? affine_distort(d, *distortion_) : d;
}

double CorrelationModel::correlation_at(double a, double b) const {
  return correlation(joint(a, b));
}

}  // namespace bellnoise
