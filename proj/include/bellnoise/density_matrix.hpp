#pragma once

#include <Eigen/Dense>
#include <functional>

#include "bellnoise/joint.hpp"

namespace bellnoise {

/// Two-qubit density matrix: Hermitian, unit trace, positive semidefinite
/// (up to tolerance). Immutable after construction; construction validates.
class DensityMatrix {
 public:
  static constexpr double kHermitianTol = 1e-12;
  static constexpr double kTraceTol = 1e-12;
  static constexpr double kPsdTol = 1e-10;

  explicit DensityMatrix(const Eigen::Matrix4cd& m);

  const Eigen::Matrix4cd& matrix() const { return m_; }
  double purity() const;

  // Eigenvalues in ascending order.
  Eigen::Vector4d eigenvalues() const;

 private:
  Eigen::Matrix4cd m_;
};

DensityMatrix singlet_state();

// V * singlet + (1-V) * I/4.
DensityMatrix werner_state(double visibility);

// V * rho + (1-V) * I/4 for an arbitrary state.
DensityMatrix mix_with_identity(const DensityMatrix& rho, double visibility);

// Measurement probabilities for analyzers in the x-z plane: the "up"
// projector at angle t is (I + sin(t) sx + cos(t) sz) / 2 on each side.
JointDistribution born_probabilities(const DensityMatrix& rho, double a,
                                     double b);

// Pauli correlation tensor restricted to the x-z plane:
// T(i,j) = tr(rho s_i (x) s_j), i,j in {x,z}. The correlation function of
// the state is then E(a,b) = u(a)^T T u(b) with u(t) = (sin t, cos t).
Eigen::Matrix2d correlation_tensor_xz(const DensityMatrix& rho);

// Transpose of the second subsystem; Hermitian and trace-preserving but
// possibly indefinite.
Eigen::Matrix4cd partial_transpose(const Eigen::Matrix4cd& m);

double pt_min_eigenvalue(const DensityMatrix& rho);

// PPT check; necessary and sufficient for two qubits.
bool is_separable_2x2(const DensityMatrix& rho,
                      double tol = DensityMatrix::kPsdTol);

// Bisection over a one-parameter family rho(V), V in [0,1], assumed
// separable at V=0. Returns the boundary visibility to within tol, or 1
// when the whole family is separable.
double separability_threshold(
    const std::function<DensityMatrix(double)>& family, double tol);

double werner_separability_threshold(double tol);

}  // namespace bellnoise
