#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bellnoise/chsh.hpp"
#include "bellnoise/correlation_model.hpp"
#include "bellnoise/distortion.hpp"
#include "bellnoise/rng.hpp"

namespace bellnoise {

enum class Outcome { up, down };

// One draw from the model's joint distribution by inverse CDF over the
// four cells in fixed order (uu, ud, du, dd).
std::pair<Outcome, Outcome> sample_pair(const CorrelationModel& m, double a,
                                        double b, SplitMix64& rng);

// How patients' measurement settings are assigned.
enum class AngleMode { fixed_four, jittered, per_patient_random };

struct PopulationConfig {
  std::int64_t n_patients = 0;
  AngleMode angle_mode = AngleMode::fixed_four;
  Settings4 settings;
  double spread = 0.0;  // jitter half-width is spread/2
  CorrelationModel source_model;
  std::uint64_t seed = 0;
  bool round_robin = false;  // variance-reduction alternative to random
};

struct SettingCounts {
  std::int64_t uu = 0, ud = 0, du = 0, dd = 0;

  std::int64_t total() const { return uu + ud + du + dd; }
  double e_hat() const {
    const auto n = total();
    return n == 0 ? 0.0
                  : static_cast<double>(uu + dd - ud - du) /
                        static_cast<double>(n);
  }
};

struct ChshEstimate {
  // Setting order: (a,b), (a,b'), (a',b), (a',b').
  std::array<SettingCounts, 4> counts;
  std::array<double, 4> e_hat{};
  double s_hat = 0.0;
  double stderr_ = 0.0;
  bool underpowered = false;  // some setting saw fewer than 10 samples
};

ChshEstimate estimate_chsh(const PopulationConfig& cfg, int n_threads = 1);

enum class TraitDistribution { uniform, beta };

struct OutcomeRule {
  enum class Type { indicator, constant, linear, logistic };
  Type type = Type::indicator;
  double threshold = 0.5;  // indicator
  double value = 0.5;      // constant
  double steepness = 10.0, midpoint = 0.5;  // logistic

  double operator()(double t) const;
};

struct BreilmannConfig {
  std::int64_t n_patients = 0;
  TraitDistribution trait_distribution = TraitDistribution::uniform;
  double beta_alpha = 1.0, beta_beta = 1.0;
  double compliance_threshold = 0.5;
  OutcomeRule outcome_rule;
  double pill_effect = 0.0;  // ground-truth causal effect
  std::uint64_t seed = 0;
};

struct TrialResult {
  // arm x outcome counts; "treated" means complied.
  std::int64_t treated_pass = 0, treated_fail = 0;
  std::int64_t control_pass = 0, control_fail = 0;
  double observed_rate_treated = 0.0;  // NaN when the arm is empty
  double observed_rate_control = 0.0;
  double apparent_effect = 0.0;
  double true_causal_effect = 0.0;
  double ci_halfwidth = 0.0;  // 95%, normal approximation
  bool degenerate_treated = false;
  bool degenerate_control = false;
};

TrialResult breilmann_trial(const BreilmannConfig& cfg, int n_threads = 1);

struct ScenarioReport {
  std::string name;
  ChshEstimate estimate;
  bool violates_classical_bound = false;  // |s_hat| - 2 stderr > 2
};

struct MaskingReport {
  std::vector<ScenarioReport> scenarios;
  // Per-setting E of the raw source vs the matched classical source;
  // only the first (matched) setting is expected to agree.
  std::array<double, 4> e_source{};
  std::array<double, 4> e_matched{};
  double matched_e_difference = 0.0;  // at the matched setting pair
};

// Runs the CHSH estimator on the raw source, a distorted variant, a
// jittered-angle variant, and a classical source matched at (a, b).
MaskingReport masking_report(const PopulationConfig& cfg,
                             const std::optional<DistortionParams>& distortion,
                             int n_threads = 1);

}  // namespace bellnoise
