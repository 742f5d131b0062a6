#include "bellnoise/density_matrix.hpp"

#include <complex>
#include <stdexcept>

namespace bellnoise {

using Eigen::Matrix2cd;
using Eigen::Matrix4cd;
using Eigen::Vector4cd;
using std::complex;

DensityMatrix::DensityMatrix(const Matrix4cd& m) : m_(m) {
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol)
    throw std::invalid_argument("density matrix is not Hermitian");
  if (std::abs(m.trace() - complex<double>(1.0)) > kTraceTol)
    throw std::invalid_argument("density matrix trace is not 1");
  Eigen::SelfAdjointEigenSolver<Matrix4cd> es(m, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kPsdTol)
    throw std::invalid_argument("density matrix is not positive semidefinite");
}

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

Eigen::Vector4d DensityMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Matrix4cd> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

DensityMatrix singlet_state() {
  Vector4cd psi;
  psi << 0.0, 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0.0;
  return DensityMatrix(psi * psi.adjoint());
}

DensityMatrix mix_with_identity(const DensityMatrix& rho, double visibility) {
  if (!(visibility >= 0.0 && visibility <= 1.0))
    throw std::domain_error("visibility outside [0, 1]");
  return DensityMatrix(visibility * rho.matrix() +
                       (1.0 - visibility) * 0.25 * Matrix4cd::Identity());
}

DensityMatrix werner_state(double visibility) {
  return mix_with_identity(singlet_state(), visibility);
}

namespace {

// "up" projector at analyzer angle t, x-z plane.
Matrix2cd up_projector(double t) {
  Matrix2cd p;
  const double s = std::sin(t), c = std::cos(t);
  p << (1.0 + c) / 2.0, s / 2.0, s / 2.0, (1.0 - c) / 2.0;
  return p;
}

Matrix4cd kron2(const Matrix2cd& x, const Matrix2cd& y) {
  Matrix4cd k;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) k.block<2, 2>(2 * i, 2 * j) = x(i, j) * y;
  return k;
}

}  // namespace

JointDistribution born_probabilities(const DensityMatrix& rho, double a,
                                     double b) {
  const Matrix2cd pa = up_projector(a);
  const Matrix2cd pb = up_projector(b);
  const Matrix2cd qa = Matrix2cd::Identity() - pa;
  const Matrix2cd qb = Matrix2cd::Identity() - pb;
  const Matrix4cd& m = rho.matrix();
  return {(m * kron2(pa, pb)).trace().real(),
          (m * kron2(pa, qb)).trace().real(),
          (m * kron2(qa, pb)).trace().real(),
          (m * kron2(qa, qb)).trace().real()};
}

Eigen::Matrix2d correlation_tensor_xz(const DensityMatrix& rho) {
  Matrix2cd sx, sz;
  sx << 0, 1, 1, 0;
  sz << 1, 0, 0, -1;
  const Matrix2cd sig[2] = {sx, sz};
  Eigen::Matrix2d t;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      t(i, j) = (rho.matrix() * kron2(sig[i], sig[j])).trace().real();
  return t;
}

Matrix4cd partial_transpose(const Matrix4cd& m) {
  Matrix4cd out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          out(2 * i + l, 2 * k + j) = m(2 * i + j, 2 * k + l);
  return out;
}

double pt_min_eigenvalue(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix4cd> es(partial_transpose(rho.matrix()),
                                              Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool is_separable_2x2(const DensityMatrix& rho, double tol) {
  return pt_min_eigenvalue(rho) >= -tol;
}

double separability_threshold(
    const std::function<DensityMatrix(double)>& family, double tol) {
  if (!(tol > 0.0)) throw std::domain_error("tolerance must be positive");
  if (is_separable_2x2(family(1.0))) return 1.0;
  double lo = 0.0, hi = 1.0;  // lo separable, hi not
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (is_separable_2x2(family(mid)) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double werner_separability_threshold(double tol) {
  return separability_threshold([](double v) { return werner_state(v); }, tol);
}

}  // namespace bellnoise
