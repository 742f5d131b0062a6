#pragma once

#include <optional>

#include "bellnoise/density_matrix.hpp"
#include "bellnoise/distortion.hpp"
#include "bellnoise/joint.hpp"

namespace bellnoise {

// Tagged probability-generating rule for a pair experiment: Bell's linear
// hidden-variable model, the quantum singlet statistics, an arbitrary
// two-qubit state, each optionally wrapped in one layer of affine
// distortion. Deeper nesting is pre-multiplied by the caller via
// DistortionParams::then.
class CorrelationModel {
 public:
  enum class Kind { classical_linear, quantum, state };

  CorrelationModel() = default;  // classical

  static CorrelationModel classical();
  static CorrelationModel quantum(SpinConvention spin);
  static CorrelationModel state(const DensityMatrix& rho);

  // Wrap in an affine distortion layer; throws if already distorted.
  CorrelationModel distorted(const DistortionParams& params) const;
  CorrelationModel with_visibility(double v) const;

  Kind kind() const { return kind_; }
  SpinConvention spin() const { return spin_; }
  const std::optional<DensityMatrix>& rho() const { return rho_; }
  const std::optional<DistortionParams>& distortion() const {
    return distortion_;
  }

  // Joint distribution at settings (a, b). May carry negative entries
  // when a distortion layer pushes cells below zero.
  JointDistribution joint(double a, double b) const;

  // E(a, b) of the model.
  double correlation_at(double a, double b) const;

  // True when E depends on settings only through the wrapped |a-b|.
  bool translation_invariant() const { return kind_ != Kind::state; }

 private:
  Kind kind_ = Kind::classical_linear;
  SpinConvention spin_ = SpinConvention::half;
  std::optional<DensityMatrix> rho_;
  std::optional<DistortionParams> distortion_;
};

inline double model_correlation(const CorrelationModel& m, double a,
                                double b) {
  return m.correlation_at(a, b);
}

}  // namespace bellnoise
