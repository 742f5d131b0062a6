#include "bellnoise/inhibition.hpp"

#include <stdexcept>

namespace bellnoise {

namespace {

constexpr double kTol = 1e-10;
constexpr int kMaxIter = 100000;

void validate(const InhibitionNetwork& net) {
  const auto n = net.inputs.size();
  if (net.weights.rows() != n || net.weights.cols() != n)
    throw std::invalid_argument("weight matrix shape does not match inputs");
  if (net.weights.diagonal().cwiseAbs().maxCoeff() > 0.0)
    throw std::invalid_argument("weight matrix must have zero diagonal");
  if (net.weights.minCoeff() < 0.0 || net.inputs.minCoeff() < 0.0)
    throw std::invalid_argument("weights and inputs must be nonnegative");
}

}  // namespace

double spectral_radius(const Eigen::MatrixXd& w) {
  Eigen::VectorXd v = Eigen::VectorXd::Ones(w.rows());
  double r = 0.0;
  for (int i = 0; i < 200; ++i) {
    v = w * v;
    r = v.lpNorm<Eigen::Infinity>();
    if (r == 0.0) return 0.0;
    v /= r;
  }
  return r;
}

InhibitionResult inhibition_steady_state(const InhibitionNetwork& net) {
  validate(net);
  const auto n = net.inputs.size();

  if (!net.rectified) {
    if (spectral_radius(net.weights) >= 1.0)
      throw std::invalid_argument(
          "unrectified network requires spectral radius of W below 1");
    Eigen::VectorXd y =
        (Eigen::MatrixXd::Identity(n, n) + net.weights).lu().solve(net.inputs);
    return {y, 0};
  }

  Eigen::VectorXd y = net.inputs;
  Eigen::VectorXd prev2 = y;
  double damping = 1.0;
  for (int it = 1; it <= kMaxIter; ++it) {
    Eigen::VectorXd next = (net.inputs - net.weights * y).cwiseMax(0.0);
    next = damping * next + (1.0 - damping) * y;
    const double step = (next - y).lpNorm<Eigen::Infinity>();
    if (step < kTol) return {next, it};
    // Period-2 cycle: switch to damped updates.
    if (damping == 1.0 && (next - prev2).lpNorm<Eigen::Infinity>() < kTol)
      damping = 0.5;
    prev2 = y;
    y = next;
  }
  throw std::runtime_error("rectified inhibition did not converge");
}

}  // namespace bellnoise
