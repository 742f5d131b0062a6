#include "bellnoise/io.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>

namespace bellnoise {

namespace {

double finite_or_null(json& j, const char* key, double v) {
  if (std::isfinite(v))
    j[key] = v;
  else
    j[key] = nullptr;
  return v;
}

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& [key, _] : j.items())
    if (!allowed.contains(key))
      throw std::invalid_argument("unknown key \"" + key + "\" in " + where);
}

void require_version(const json& j) {
  if (!j.contains("version") || j.at("version") != 1)
    throw std::invalid_argument("config must carry \"version\": 1");
}

Settings4 settings_from_json(const json& j) {
  reject_unknown_keys(j, {"a", "a_prime", "b", "b_prime"}, "settings");
  return {j.at("a").get<double>(), j.at("a_prime").get<double>(),
          j.at("b").get<double>(), j.at("b_prime").get<double>()};
}

SpinConvention spin_from_string(const std::string& s) {
  if (s == "half") return SpinConvention::half;
  if (s == "photon") return SpinConvention::photon;
  throw std::invalid_argument("unknown spin convention \"" + s + "\"");
}

CorrelationModel model_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "classical") {
    reject_unknown_keys(j, {"type"}, "model");
    return CorrelationModel::classical();
  }
  if (type == "quantum") {
    reject_unknown_keys(j, {"type", "spin"}, "model");
    return CorrelationModel::quantum(
        spin_from_string(j.value("spin", "half")));
  }
  if (type == "state") {
    reject_unknown_keys(j, {"type", "matrix"}, "model");
    return CorrelationModel::state(density_matrix_from_json(j.at("matrix")));
  }
  if (type == "distorted") {
    reject_unknown_keys(j, {"type", "inner", "visibility", "b_coef"},
                        "model");
    CorrelationModel inner = model_from_json(j.at("inner"));
    if (j.contains("visibility"))
      return inner.with_visibility(j.at("visibility").get<double>());
    return inner.distorted({j.at("b_coef").get<double>(), 4});
  }
  throw std::invalid_argument("unknown model type \"" + type + "\"");
}

OutcomeRule outcome_rule_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  OutcomeRule r;
  if (type == "indicator") {
    reject_unknown_keys(j, {"type", "threshold"}, "outcome_rule");
    r.type = OutcomeRule::Type::indicator;
    r.threshold = j.at("threshold").get<double>();
  } else if (type == "constant") {
    reject_unknown_keys(j, {"type", "value"}, "outcome_rule");
    r.type = OutcomeRule::Type::constant;
    r.value = j.at("value").get<double>();
    if (r.value < 0.0 || r.value > 1.0)
      throw std::invalid_argument("constant outcome value outside [0, 1]");
  } else if (type == "linear") {
    reject_unknown_keys(j, {"type"}, "outcome_rule");
    r.type = OutcomeRule::Type::linear;
  } else if (type == "logistic") {
    reject_unknown_keys(j, {"type", "steepness", "midpoint"}, "outcome_rule");
    r.type = OutcomeRule::Type::logistic;
    r.steepness = j.value("steepness", 10.0);
    r.midpoint = j.value("midpoint", 0.5);
  } else {
    throw std::invalid_argument("unknown outcome rule \"" + type + "\"");
  }
  return r;
}

}  // namespace

json density_matrix_to_json(const DensityMatrix& rho) {
  json rows = json::array();
  for (int i = 0; i < 4; ++i) {
    json row = json::array();
    for (int k = 0; k < 4; ++k)
      row.push_back({rho.matrix()(i, k).real(), rho.matrix()(i, k).imag()});
    rows.push_back(row);
  }
  return rows;
}

DensityMatrix density_matrix_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4)
    throw std::invalid_argument("density matrix must be 4 rows");
  Eigen::Matrix4cd m;
  for (int i = 0; i < 4; ++i) {
    const json& row = j.at(i);
    if (!row.is_array() || row.size() != 4)
      throw std::invalid_argument("density matrix row must have 4 entries");
    for (int k = 0; k < 4; ++k) {
      const json& e = row.at(k);
      if (!e.is_array() || e.size() != 2)
        throw std::invalid_argument("matrix entry must be [re, im]");
      m(i, k) = {e.at(0).get<double>(), e.at(1).get<double>()};
    }
  }
  return DensityMatrix(m);
}

json to_json(const Settings4& s) {
  return {{"a", s.a},
          {"a_prime", s.a_prime},
          {"b", s.b},
          {"b_prime", s.b_prime}};
}

json to_json(const ChshEstimate& est) {
  json counts = json::array();
  for (const auto& c : est.counts)
    counts.push_back({{"uu", c.uu}, {"ud", c.ud}, {"du", c.du}, {"dd", c.dd}});
  return {{"counts", counts},
          {"e_hat", est.e_hat},
          {"s_hat", est.s_hat},
          {"stderr", est.stderr_},
          {"underpowered", est.underpowered}};
}

json to_json(const TrialResult& r) {
  json j = {{"counts",
             {{"treated", {{"pass", r.treated_pass}, {"fail", r.treated_fail}}},
              {"control",
               {{"pass", r.control_pass}, {"fail", r.control_fail}}}}},
            {"true_causal_effect", r.true_causal_effect},
            {"degenerate_treated", r.degenerate_treated},
            {"degenerate_control", r.degenerate_control}};
  finite_or_null(j, "observed_rate_treated", r.observed_rate_treated);
  finite_or_null(j, "observed_rate_control", r.observed_rate_control);
  finite_or_null(j, "apparent_effect", r.apparent_effect);
  finite_or_null(j, "ci_halfwidth", r.ci_halfwidth);
  return j;
}

json to_json(const MaskingReport& r) {
  json scenarios = json::array();
  for (const auto& s : r.scenarios) {
    json e = to_json(s.estimate);
    e["name"] = s.name;
    e["verdict"] = s.violates_classical_bound ? "violates classical bound"
                                              : "no violation";
    scenarios.push_back(e);
  }
  return {{"scenarios", scenarios},
          {"e_source", r.e_source},
          {"e_matched", r.e_matched},
          {"matched_e_difference", r.matched_e_difference}};
}

PopulationConfig population_config_from_json(const json& j) {
  require_version(j);
  reject_unknown_keys(j,
                      {"version", "n_patients", "seed", "angle_mode", "model",
                       "assignment"},
                      "population config");
  PopulationConfig cfg;
  cfg.n_patients = j.at("n_patients").get<std::int64_t>();
  cfg.seed = j.value("seed", std::uint64_t{0});
  cfg.source_model = model_from_json(j.at("model"));
  if (j.contains("assignment")) {
    const std::string a = j.at("assignment").get<std::string>();
    if (a == "round_robin")
      cfg.round_robin = true;
    else if (a != "random")
      throw std::invalid_argument("unknown assignment \"" + a + "\"");
  }
  const json& mode = j.at("angle_mode");
  const std::string type = mode.at("type").get<std::string>();
  if (type == "fixed_four") {
    reject_unknown_keys(mode, {"type", "settings"}, "angle_mode");
    cfg.angle_mode = AngleMode::fixed_four;
    cfg.settings = settings_from_json(mode.at("settings"));
  } else if (type == "jittered") {
    reject_unknown_keys(mode, {"type", "settings", "spread"}, "angle_mode");
    cfg.angle_mode = AngleMode::jittered;
    cfg.settings = settings_from_json(mode.at("settings"));
    cfg.spread = mode.at("spread").get<double>();
    if (cfg.spread < 0.0) throw std::invalid_argument("spread must be >= 0");
  } else if (type == "per_patient_random") {
    reject_unknown_keys(mode, {"type"}, "angle_mode");
    cfg.angle_mode = AngleMode::per_patient_random;
  } else {
    throw std::invalid_argument("unknown angle mode \"" + type + "\"");
  }
  return cfg;
}

BreilmannConfig breilmann_config_from_json(const json& j) {
  require_version(j);
  reject_unknown_keys(j,
                      {"version", "n_patients", "seed", "trait_distribution",
                       "compliance_threshold", "outcome_rule", "pill_effect"},
                      "breilmann config");
  BreilmannConfig cfg;
  cfg.n_patients = j.at("n_patients").get<std::int64_t>();
  cfg.seed = j.value("seed", std::uint64_t{0});
  cfg.compliance_threshold = j.at("compliance_threshold").get<double>();
  cfg.outcome_rule = outcome_rule_from_json(j.at("outcome_rule"));
  cfg.pill_effect = j.value("pill_effect", 0.0);
  if (j.contains("trait_distribution")) {
    const json& td = j.at("trait_distribution");
    const std::string type = td.at("type").get<std::string>();
    if (type == "uniform") {
      reject_unknown_keys(td, {"type"}, "trait_distribution");
      cfg.trait_distribution = TraitDistribution::uniform;
    } else if (type == "beta") {
      reject_unknown_keys(td, {"type", "alpha", "beta"}, "trait_distribution");
      cfg.trait_distribution = TraitDistribution::beta;
      cfg.beta_alpha = td.at("alpha").get<double>();
      cfg.beta_beta = td.at("beta").get<double>();
      if (cfg.beta_alpha <= 0.0 || cfg.beta_beta <= 0.0)
        throw std::invalid_argument("beta parameters must be positive");
    } else {
      throw std::invalid_argument("unknown trait distribution \"" + type +
                                  "\"");
    }
  }
  return cfg;
}

std::string emit_curve(int steps) {
  if (steps < 2) throw std::invalid_argument("curve needs at least 2 steps");
  std::string out = "delta,e_classical,e_quantum_half,e_quantum_photon\n";
  char line[160];
  for (int i = 0; i <= steps; ++i) {
    const double delta = pi * i / steps;
    const double ec = correlation(classical_joint(0.0, delta));
    const double eh = correlation(quantum_joint(0.0, delta, SpinConvention::half));
    const double ep =
        correlation(quantum_joint(0.0, delta, SpinConvention::photon));
    std::snprintf(line, sizeof(line), "%.9g,%.9g,%.9g,%.9g\n", delta, ec, eh,
                  ep);
    out += line;
  }
  return out;
}

}  // namespace bellnoise
