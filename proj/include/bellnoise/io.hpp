#pragma once

#include <string>

#include <json.hpp>

#include "bellnoise/density_matrix.hpp"
#include "bellnoise/trial.hpp"

namespace bellnoise {

using json = nlohmann::json;

// Density-matrix wire format: 4 rows x 4 entries x [re, im].
json density_matrix_to_json(const DensityMatrix& rho);
DensityMatrix density_matrix_from_json(const json& j);

json to_json(const ChshEstimate& est);
json to_json(const TrialResult& r);
json to_json(const MaskingReport& r);
json to_json(const Settings4& s);

// Config files carry "version": 1; unknown keys are errors.
PopulationConfig population_config_from_json(const json& j);
BreilmannConfig breilmann_config_from_json(const json& j);

// CSV comparison curve of the classical and quantum correlation
// functions over delta in [0, pi]; steps intervals, steps+1 rows,
// 9 significant digits.
std::string emit_curve(int steps);

}  // namespace bellnoise
