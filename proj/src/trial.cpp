#include "bellnoise/trial.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace bellnoise {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Chunk [0, n) across threads; each worker owns a State accumulated
// afterwards in index order, so the result is schedule-independent.
template <typename State, typename Body>
std::vector<State> run_chunked(std::int64_t n, int n_threads,
                               const Body& body) {
  n_threads = std::max(1, n_threads);
  std::vector<State> states(n_threads);
  std::vector<std::thread> workers;
  const std::int64_t chunk = (n + n_threads - 1) / n_threads;
  for (int t = 0; t < n_threads; ++t) {
    const std::int64_t lo = t * chunk, hi = std::min(n, lo + chunk);
    workers.emplace_back([&, t, lo, hi] {
      for (std::int64_t i = lo; i < hi; ++i) body(states[t], i);
    });
  }
  for (auto& w : workers) w.join();
  return states;
}

int sample_cell(const JointDistribution& d, double u) {
  // inverse CDF, fixed cell order uu, ud, du, dd
  double c = d.p_uu;
  if (u < c) return 0;
  c += d.p_ud;
  if (u < c) return 1;
  c += d.p_du;
  if (u < c) return 2;
  return 3;
}

double normal_draw(SplitMix64& g) {
  const double u1 = g.uniform(), u2 = g.uniform();
  return std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(2.0 * pi * u2);
}

// Marsaglia-Tsang.
double gamma_draw(SplitMix64& g, double shape) {
  if (shape < 1.0) {
    const double u = g.uniform();
    return gamma_draw(g, shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = normal_draw(g);
    const double t = 1.0 + c * x;
    if (t <= 0.0) continue;
    const double v = t * t * t;
    const double u = g.uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double beta_draw(SplitMix64& g, double alpha, double beta) {
  const double x = gamma_draw(g, alpha);
  const double y = gamma_draw(g, beta);
  return x / (x + y);
}

struct EstimateAccum {
  std::array<SettingCounts, 4> counts{};
};

ChshEstimate finish_estimate(const std::vector<EstimateAccum>& parts) {
  ChshEstimate est;
  for (const auto& p : parts)
    for (int s = 0; s < 4; ++s) {
      est.counts[s].uu += p.counts[s].uu;
      est.counts[s].ud += p.counts[s].ud;
      est.counts[s].du += p.counts[s].du;
      est.counts[s].dd += p.counts[s].dd;
    }
  double var = 0.0;
  for (int s = 0; s < 4; ++s) {
    est.e_hat[s] = est.counts[s].e_hat();
    const auto n = est.counts[s].total();
    if (n < 10) est.underpowered = true;
    if (n > 0) var += (1.0 - est.e_hat[s] * est.e_hat[s]) / n;
  }
  est.s_hat = est.e_hat[0] - est.e_hat[1] + est.e_hat[2] + est.e_hat[3];
  est.stderr_ = std::sqrt(var);
  return est;
}

// Shared estimator body; `angles[s]` are the nominal (alice, bob) angles
// of setting s, jittered per patient when requested.
ChshEstimate run_estimate(const CorrelationModel& model,
                          const std::array<std::pair<double, double>, 4>& angles,
                          std::int64_t n_patients, std::uint64_t seed,
                          bool round_robin, bool jitter, double spread,
                          int n_threads) {
  auto parts = run_chunked<EstimateAccum>(
      n_patients, n_threads, [&](EstimateAccum& acc, std::int64_t i) {
        SplitMix64 g = substream(seed, static_cast<std::uint64_t>(i));
        int s;
        if (round_robin) {
          s = static_cast<int>(i % 4);
        } else {
          s = std::min(3, static_cast<int>(g.uniform() * 4.0));
        }
        auto [aa, bb] = angles[s];
        if (jitter) {
          aa += (g.uniform() - 0.5) * spread;
          bb += (g.uniform() - 0.5) * spread;
        }
        const int cell = sample_cell(model.joint(aa, bb), g.uniform());
        auto& c = acc.counts[s];
        (cell == 0 ? c.uu : cell == 1 ? c.ud : cell == 2 ? c.du : c.dd)++;
      });
  return finish_estimate(parts);
}

std::array<std::pair<double, double>, 4> setting_angles(const Settings4& s) {
  return {{{s.a, s.b},
           {s.a, s.b_prime},
           {s.a_prime, s.b},
           {s.a_prime, s.b_prime}}};
}

}  // namespace

std::pair<Outcome, Outcome> sample_pair(const CorrelationModel& m, double a,
                                        double b, SplitMix64& rng) {
  const JointDistribution d = m.joint(a, b);
  if (!d.is_valid(1e-9))
    throw std::domain_error("cannot sample from a signed distribution");
  const int cell = sample_cell(d, rng.uniform());
  return {cell < 2 ? Outcome::up : Outcome::down,
          cell % 2 == 0 ? Outcome::up : Outcome::down};
}

ChshEstimate estimate_chsh(const PopulationConfig& cfg, int n_threads) {
  if (cfg.n_patients < 1)
    throw std::invalid_argument("n_patients must be positive");
  if (cfg.angle_mode == AngleMode::per_patient_random)
    throw std::invalid_argument(
        "estimate_chsh requires fixed_four or jittered angle mode");
  return run_estimate(cfg.source_model, setting_angles(cfg.settings),
                      cfg.n_patients, cfg.seed, cfg.round_robin,
                      cfg.angle_mode == AngleMode::jittered, cfg.spread,
                      n_threads);
}

double OutcomeRule::operator()(double t) const {
  switch (type) {
    case Type::indicator:
      return t >= threshold ? 1.0 : 0.0;
    case Type::constant:
      return value;
    case Type::linear:
      return t;
    case Type::logistic:
      return 1.0 / (1.0 + std::exp(-steepness * (t - midpoint)));
  }
  return 0.0;
}

TrialResult breilmann_trial(const BreilmannConfig& cfg, int n_threads) {
  if (cfg.n_patients < 1)
    throw std::invalid_argument("n_patients must be positive");
  if (cfg.compliance_threshold < 0.0 || cfg.compliance_threshold > 1.0)
    throw std::invalid_argument("compliance threshold outside [0, 1]");

  struct Accum {
    std::int64_t tp = 0, tf = 0, cp = 0, cf = 0;
  };
  auto parts = run_chunked<Accum>(
      cfg.n_patients, n_threads, [&](Accum& acc, std::int64_t i) {
        SplitMix64 g = substream(cfg.seed, static_cast<std::uint64_t>(i));
        const double t = cfg.trait_distribution == TraitDistribution::uniform
                             ? g.uniform()
                             : beta_draw(g, cfg.beta_alpha, cfg.beta_beta);
        const bool complied = t >= cfg.compliance_threshold;
        const double p = std::clamp(
            cfg.outcome_rule(t) + (complied ? cfg.pill_effect : 0.0), 0.0,
            1.0);
        const bool pass = g.uniform() < p;
        if (complied)
          (pass ? acc.tp : acc.tf)++;
        else
          (pass ? acc.cp : acc.cf)++;
      });

  TrialResult r;
  for (const auto& p : parts) {
    r.treated_pass += p.tp;
    r.treated_fail += p.tf;
    r.control_pass += p.cp;
    r.control_fail += p.cf;
  }
  const std::int64_t nt = r.treated_pass + r.treated_fail;
  const std::int64_t nc = r.control_pass + r.control_fail;
  r.degenerate_treated = nt == 0;
  r.degenerate_control = nc == 0;
  r.observed_rate_treated =
      nt > 0 ? static_cast<double>(r.treated_pass) / nt : kNan;
  r.observed_rate_control =
      nc > 0 ? static_cast<double>(r.control_pass) / nc : kNan;
  r.apparent_effect = r.observed_rate_treated - r.observed_rate_control;
  r.true_causal_effect = cfg.pill_effect;
  if (nt > 0 && nc > 0) {
    const double p1 = r.observed_rate_treated, p0 = r.observed_rate_control;
    r.ci_halfwidth =
        1.96 * std::sqrt(p1 * (1.0 - p1) / nt + p0 * (1.0 - p0) / nc);
  } else {
    r.ci_halfwidth = kNan;
  }
  return r;
}

MaskingReport masking_report(const PopulationConfig& cfg,
                             const std::optional<DistortionParams>& distortion,
                             int n_threads) {
  MaskingReport report;
  auto add = [&](std::string name, ChshEstimate est) {
    const bool violates = std::abs(est.s_hat) - 2.0 * est.stderr_ > 2.0;
    report.scenarios.push_back({std::move(name), est, violates});
  };

  PopulationConfig raw = cfg;
  raw.angle_mode = AngleMode::fixed_four;
  const ChshEstimate raw_est = estimate_chsh(raw, n_threads);
  add("raw", raw_est);

  if (distortion) {
    PopulationConfig dist = raw;
    dist.source_model =
        cfg.source_model.distortion()
            ? CorrelationModel(cfg.source_model)  // already distorted
            : cfg.source_model.distorted(*distortion);
    if (cfg.source_model.distortion()) {
      // compose the existing layer with the requested one
      CorrelationModel base =
          cfg.source_model.kind() == CorrelationModel::Kind::quantum
              ? CorrelationModel::quantum(cfg.source_model.spin())
          : cfg.source_model.kind() == CorrelationModel::Kind::state
              ? CorrelationModel::state(*cfg.source_model.rho())
              : CorrelationModel::classical();
      dist.source_model =
          base.distorted(cfg.source_model.distortion()->then(*distortion));
    }
    add("distorted", estimate_chsh(dist, n_threads));
  }

  PopulationConfig jit = raw;
  jit.angle_mode = AngleMode::jittered;
  jit.spread = cfg.spread > 0.0 ? cfg.spread : pi / 4.0;
  add("jittered", estimate_chsh(jit, n_threads));

  // Classical source matched at the first setting pair (a, b): a genuine
  // fixed-four-angle classical experiment whose (a, b) difference
  // reproduces the source's P(up,up) there. The other three settings keep
  // the source's angle offsets, so the classical CHSH bound still applies.
  const double p_uu =
      cfg.source_model.joint(cfg.settings.a, cfg.settings.b).p_uu;
  const double delta_c = std::clamp(2.0 * pi * p_uu, 0.0, pi);
  const Settings4 matched_settings{
      0.0, cfg.settings.a_prime - cfg.settings.a, delta_c,
      delta_c + cfg.settings.b_prime - cfg.settings.b};
  const ChshEstimate matched_est = run_estimate(
      CorrelationModel::classical(), setting_angles(matched_settings),
      cfg.n_patients, cfg.seed, cfg.round_robin, false, 0.0, n_threads);
  add("matched_classical", matched_est);

  report.e_source = raw_est.e_hat;
  report.e_matched = matched_est.e_hat;
  report.matched_e_difference =
      std::abs(report.e_source[0] - report.e_matched[0]);
  return report;
}

}  // namespace bellnoise
