#include "bellnoise/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "bellnoise/chsh.hpp"
#include "bellnoise/distortion.hpp"
#include "bellnoise/inhibition.hpp"
#include "bellnoise/io.hpp"
#include "bellnoise/trial.hpp"

namespace bellnoise {

namespace {

void write_output(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file " + out_path);
  f << content;
}

void write_json(const std::string& out_path, const json& j) {
  write_output(out_path, j.dump(2) + "\n");
}

json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open file " + path);
  return json::parse(f);
}

std::vector<double> parse_csv_doubles(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag_seed,
                           std::uint64_t config_seed) {
  if (flag_seed) return *flag_seed;
  if (const char* env = std::getenv("BELLNOISE_SEED"))
    return std::strtoull(env, nullptr, 10);
  return config_seed;
}

CorrelationModel model_from_name(const std::string& name,
                                 const std::string& state_file) {
  if (name == "classical") return CorrelationModel::classical();
  if (name == "quantum-half")
    return CorrelationModel::quantum(SpinConvention::half);
  if (name == "quantum-photon")
    return CorrelationModel::quantum(SpinConvention::photon);
  if (name == "state") {
    if (state_file.empty())
      throw std::runtime_error("--model state requires --state FILE");
    return CorrelationModel::state(
        density_matrix_from_json(read_json_file(state_file)));
  }
  throw std::runtime_error("unknown model \"" + name + "\"");
}

struct CommonOut {
  std::string out;
};

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Pair-correlation experiments: classical vs quantum models, "
               "noise, and trial simulation"};
  app.require_subcommand(1);

  // --- curve ---
  auto* curve = app.add_subcommand(
      "curve", "CSV of classical and quantum correlation functions");
  int curve_steps = 180;
  std::string curve_out;
  curve->add_option("--steps", curve_steps, "grid intervals over [0, pi]");
  curve->add_option("--out", curve_out, "output file (default stdout)");
  curve->callback(
      [&] { write_output(curve_out, emit_curve(curve_steps)); });

  // --- chsh ---
  auto* chsh_cmd =
      app.add_subcommand("chsh", "CHSH value at given or optimized settings");
  std::string chsh_model = "quantum-half", chsh_state, chsh_out;
  std::optional<double> chsh_vis, chsh_bcoef;
  bool chsh_opt = false, chsh_deg = false, chsh_crit = false;
  double chsh_tol = 1e-4;
  std::optional<double> sa, sap, sb, sbp;
  chsh_cmd->add_option("--model", chsh_model,
                       "classical | quantum-half | quantum-photon | state");
  chsh_cmd->add_option("--state", chsh_state, "density matrix JSON file");
  chsh_cmd->add_option("--visibility", chsh_vis, "distortion visibility");
  chsh_cmd->add_option("--b-coef", chsh_bcoef, "distortion offset b (K=4)");
  chsh_cmd->add_flag("--optimize", chsh_opt, "maximize |S| over settings");
  chsh_cmd->add_flag("--critical-visibility", chsh_crit,
                     "visibility where max |S| crosses 2 (quantum-half)");
  chsh_cmd->add_option("--tol", chsh_tol, "bisection tolerance");
  chsh_cmd->add_flag("--degrees", chsh_deg, "settings are in degrees");
  chsh_cmd->add_option("--a", sa, "setting a");
  chsh_cmd->add_option("--a-prime", sap, "setting a'");
  chsh_cmd->add_option("--b", sb, "setting b");
  chsh_cmd->add_option("--b-prime", sbp, "setting b'");
  chsh_cmd->add_option("--out", chsh_out, "output file");
  chsh_cmd->callback([&] {
    if (chsh_crit) {
      write_json(chsh_out,
                 {{"critical_visibility", critical_visibility_chsh(chsh_tol)},
                  {"tol", chsh_tol}});
      return;
    }
    CorrelationModel m = model_from_name(chsh_model, chsh_state);
    if (chsh_vis) m = m.with_visibility(*chsh_vis);
    else if (chsh_bcoef) m = m.distorted({*chsh_bcoef, 4});
    if (chsh_opt) {
      const ChshMaximum mx = maximize_chsh(m);
      write_json(chsh_out, {{"model", chsh_model},
                            {"value", mx.value},
                            {"settings", to_json(mx.settings)}});
      return;
    }
    if (!(sa && sap && sb && sbp))
      throw std::runtime_error(
          "chsh requires --optimize or all of --a --a-prime --b --b-prime");
    const double k = chsh_deg ? pi / 180.0 : 1.0;
    const Settings4 s{*sa * k, *sap * k, *sb * k, *sbp * k};
    write_json(chsh_out, {{"model", chsh_model},
                          {"value", chsh(m, s)},
                          {"settings", to_json(s)}});
  });

  // --- match ---
  auto* match = app.add_subcommand(
      "match", "classical angle difference matching quantum statistics");
  std::optional<double> match_dq, match_target;
  std::string match_spin = "half", match_out;
  bool match_deg = false;
  match->add_option("--delta-q", match_dq, "quantum angle difference");
  match->add_option("--target", match_target,
                    "target correlation in [-1, 1] instead");
  match->add_option("--spin", match_spin, "half | photon");
  match->add_flag("--degrees", match_deg, "delta-q is in degrees");
  match->add_option("--out", match_out, "output file");
  match->callback([&] {
    if (match_dq.has_value() == match_target.has_value())
      throw std::runtime_error(
          "match requires exactly one of --delta-q or --target");
    if (match_target) {
      write_json(match_out,
                 {{"target", *match_target},
                  {"delta_c", classical_angles_for_correlation(*match_target)}});
      return;
    }
    const SpinConvention spin = match_spin == "photon" ? SpinConvention::photon
                                                       : SpinConvention::half;
    const double dq = *match_dq * (match_deg ? pi / 180.0 : 1.0);
    const double dc = classical_match_delta(dq, spin);
    const auto cj = classical_joint(0.0, dc);
    const auto qj = quantum_joint(0.0, dq, spin);
    write_json(match_out,
               {{"delta_q", dq},
                {"delta_c", dc},
                {"max_entry_diff",
                 (cj.as_vector() - qj.as_vector()).cwiseAbs().maxCoeff()}});
  });

  // --- distort ---
  auto* distort = app.add_subcommand(
      "distort", "apply affine distortion to probabilities or a state");
  std::string distort_probs, distort_state_file, distort_out;
  std::optional<double> distort_b, distort_vis;
  distort->add_option("--probs", distort_probs,
                      "comma-separated distribution, e.g. 0,0.5,0.5,0");
  distort->add_option("--b-coef", distort_b, "offset b; scale is 1 + K b");
  distort->add_option("--state", distort_state_file,
                      "density matrix JSON file");
  distort->add_option("--visibility", distort_vis,
                      "white-noise visibility for --state (or --probs)");
  distort->add_option("--out", distort_out, "output file");
  distort->callback([&] {
    if (!distort_state_file.empty()) {
      if (!distort_vis)
        throw std::runtime_error("--state requires --visibility");
      const DensityMatrix rho =
          density_matrix_from_json(read_json_file(distort_state_file));
      write_json(distort_out,
                 density_matrix_to_json(distort_state(rho, *distort_vis)));
      return;
    }
    if (distort_probs.empty())
      throw std::runtime_error("distort requires --probs or --state");
    const std::vector<double> p = parse_csv_doubles(distort_probs);
    const int k = static_cast<int>(p.size());
    DistortionParams params{0.0, k};
    if (distort_b)
      params = {*distort_b, k};
    else if (distort_vis)
      params = DistortionParams::from_visibility(*distort_vis, k);
    else
      throw std::runtime_error("distort requires --b-coef or --visibility");
    const SignedDistribution out = affine_distort(
        Eigen::Map<const Eigen::VectorXd>(p.data(), k), params);
    const ComplementForm cf = to_complement_form(params);
    json j = {{"b_coef", params.b_coef},
              {"scale", params.scale()},
              {"complement_form", {{"a", cf.a_coef}, {"b", cf.b_coef}}},
              {"output", std::vector<double>(
                             out.entries.data(),
                             out.entries.data() + out.entries.size())},
              {"has_negative", out.has_negative()}};
    if (out.entries.maxCoeff() > 0.0) {
      const Eigen::VectorXd c = out.clamp_renormalize();
      j["clamped"] = std::vector<double>(c.data(), c.data() + c.size());
    }
    write_json(distort_out, j);
  });

  // --- separability ---
  auto* sep = app.add_subcommand(
      "separability", "PPT separability of a state or family threshold");
  std::string sep_family, sep_state, sep_out;
  double sep_tol = 1e-6;
  sep->add_option("--family", sep_family, "werner");
  sep->add_option("--state", sep_state, "density matrix JSON file");
  sep->add_option("--tol", sep_tol, "bisection / PSD tolerance");
  sep->add_option("--out", sep_out, "output file");
  sep->callback([&] {
    if (!sep_family.empty()) {
      if (sep_family != "werner")
        throw std::runtime_error("unknown family \"" + sep_family + "\"");
      write_json(sep_out,
                 {{"family", "werner"},
                  {"threshold", werner_separability_threshold(sep_tol)},
                  {"tol", sep_tol}});
      return;
    }
    if (sep_state.empty())
      throw std::runtime_error("separability requires --family or --state");
    const DensityMatrix rho =
        density_matrix_from_json(read_json_file(sep_state));
    const double min_eig = pt_min_eigenvalue(rho);
    write_json(sep_out, {{"separable", min_eig >= -DensityMatrix::kPsdTol},
                         {"pt_min_eigenvalue", min_eig}});
  });

  // --- trial ---
  auto* trial = app.add_subcommand(
      "trial", "CHSH estimation over a simulated patient population");
  std::string trial_config, trial_out;
  std::optional<std::uint64_t> trial_seed;
  int trial_threads = 1;
  trial->add_option("--config", trial_config, "population config JSON")
      ->required();
  trial->add_option("--seed", trial_seed, "override config/env seed");
  trial->add_option("--threads", trial_threads, "worker threads");
  trial->add_option("--out", trial_out, "output file");
  trial->callback([&] {
    PopulationConfig cfg =
        population_config_from_json(read_json_file(trial_config));
    cfg.seed = resolve_seed(trial_seed, cfg.seed);
    write_json(trial_out, to_json(estimate_chsh(cfg, trial_threads)));
  });

  // --- breilmann ---
  auto* brl = app.add_subcommand(
      "breilmann", "selection-bias trial: compliance and outcome share a "
                   "latent trait");
  std::string brl_config, brl_out;
  std::optional<std::uint64_t> brl_seed;
  int brl_threads = 1;
  brl->add_option("--config", brl_config, "trial config JSON")->required();
  brl->add_option("--seed", brl_seed, "override config/env seed");
  brl->add_option("--threads", brl_threads, "worker threads");
  brl->add_option("--out", brl_out, "output file");
  brl->callback([&] {
    BreilmannConfig cfg =
        breilmann_config_from_json(read_json_file(brl_config));
    cfg.seed = resolve_seed(brl_seed, cfg.seed);
    write_json(brl_out, to_json(breilmann_trial(cfg, brl_threads)));
  });

  // --- masking ---
  auto* mask = app.add_subcommand(
      "masking", "when noise, jitter, and matching hide a CHSH violation");
  std::string mask_config, mask_out;
  std::optional<std::uint64_t> mask_seed;
  std::optional<double> mask_vis, mask_b;
  int mask_threads = 1;
  mask->add_option("--config", mask_config, "population config JSON")
      ->required();
  mask->add_option("--visibility", mask_vis,
                   "distortion visibility for the distorted scenario");
  mask->add_option("--b-coef", mask_b, "distortion offset instead");
  mask->add_option("--seed", mask_seed, "override config/env seed");
  mask->add_option("--threads", mask_threads, "worker threads");
  mask->add_option("--out", mask_out, "output file");
  mask->callback([&] {
    PopulationConfig cfg =
        population_config_from_json(read_json_file(mask_config));
    cfg.seed = resolve_seed(mask_seed, cfg.seed);
    std::optional<DistortionParams> params;
    if (mask_vis)
      params = DistortionParams::from_visibility(*mask_vis);
    else if (mask_b)
      params = DistortionParams{*mask_b, 4};
    write_json(mask_out, to_json(masking_report(cfg, params, mask_threads)));
  });

  // --- inhibit ---
  auto* inh = app.add_subcommand(
      "inhibit", "steady state of a lateral inhibition network");
  std::string inh_inputs, inh_weights, inh_out;
  double inh_weight = 0.0;
  bool inh_rect = false;
  inh->add_option("--inputs", inh_inputs, "comma-separated unit inputs")
      ->required();
  inh->add_option("--weight", inh_weight,
                  "uniform off-diagonal inhibition weight");
  inh->add_option("--weights", inh_weights,
                  "full n*n weight matrix, row-major comma-separated");
  inh->add_flag("--rectified", inh_rect, "clamp activations at zero");
  inh->add_option("--out", inh_out, "output file");
  inh->callback([&] {
    const std::vector<double> x = parse_csv_doubles(inh_inputs);
    const auto n = static_cast<Eigen::Index>(x.size());
    InhibitionNetwork net;
    net.inputs = Eigen::Map<const Eigen::VectorXd>(x.data(), n);
    net.rectified = inh_rect;
    if (!inh_weights.empty()) {
      const std::vector<double> w = parse_csv_doubles(inh_weights);
      if (static_cast<Eigen::Index>(w.size()) != n * n)
        throw std::runtime_error("--weights must have n*n entries");
      net.weights = Eigen::Map<
          const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                              Eigen::RowMajor>>(w.data(), n, n);
    } else {
      net.weights = Eigen::MatrixXd::Constant(n, n, inh_weight);
      net.weights.diagonal().setZero();
    }
    const InhibitionResult r = inhibition_steady_state(net);
    write_json(inh_out,
               {{"output", std::vector<double>(
                               r.output.data(), r.output.data() + r.output.size())},
                {"iterations", r.iterations}});
  });

  try {
    app.parse(argc, const_cast<char**>(argv));
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      app.exit(e);
      return 0;
    }
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("bellnoise");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace bellnoise
