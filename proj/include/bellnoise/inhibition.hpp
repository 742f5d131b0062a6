#pragma once

#include <Eigen/Dense>

namespace bellnoise {

// Lateral inhibition: units suppress each other through nonnegative
// weights with zero diagonal. The steady state solves y = x - W y, with
// an optional rectification y = max(0, x - W y).
struct InhibitionNetwork {
  Eigen::VectorXd inputs;   // nonnegative
  Eigen::MatrixXd weights;  // zero diagonal, nonnegative
  bool rectified = false;
};

struct InhibitionResult {
  Eigen::VectorXd output;
  int iterations = 0;
};

// Unrectified: direct linear solve of (I + W) y = x; the unrectified
// network requires spectral radius of W below 1. Rectified: damped
// fixed-point iteration, tolerance 1e-10, capped at 1e5 iterations.
InhibitionResult inhibition_steady_state(const InhibitionNetwork& net);

// Spectral radius of a nonnegative matrix by power iteration.
double spectral_radius(const Eigen::MatrixXd& w);

}  // namespace bellnoise
