#pragma once

#include "bellnoise/correlation_model.hpp"

namespace bellnoise {

// The four measurement settings of a CHSH experiment.
struct Settings4 {
  double a = 0.0;
  double a_prime = 0.0;
  double b = 0.0;
  double b_prime = 0.0;
};

// S = E(a,b) - E(a,b') + E(a',b) + E(a',b').
double chsh(const CorrelationModel& m, const Settings4& s);

struct ChshMaximum {
  Settings4 settings;
  double value = 0.0;  // max |S|
};

// Coarse grid over the settings followed by Nelder-Mead refinement of
// |S| to 1e-8 in the objective.
ChshMaximum maximize_chsh(const CorrelationModel& m);

}  // namespace bellnoise
