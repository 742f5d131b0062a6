#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bellnoise/cli.hpp"
#include "bellnoise/io.hpp"

using namespace bellnoise;
namespace fs = std::filesystem;

namespace {

fs::path tmp_file(const std::string& name) {
  return fs::temp_directory_path() / ("bellnoise_test_" + name);
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& content) {
  std::ofstream f(p, std::ios::binary);
  f << content;
}

json run_to_json(std::vector<std::string> args, const std::string& name) {
  const fs::path out = tmp_file(name);
  args.push_back("--out");
  args.push_back(out.string());
  REQUIRE(run_cli(args) == 0);
  return json::parse(slurp(out));
}

}  // namespace

TEST_CASE("curve output") {
  const std::string csv = emit_curve(180);
  std::stringstream ss(csv);
  std::string line;
  std::getline(ss, line);
  CHECK(line == "delta,e_classical,e_quantum_half,e_quantum_photon");
  int rows = 0;
  double last_ec = 0.0, last_eh = 0.0;
  while (std::getline(ss, line)) {
    double d, ec, eh, ep;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &d, &ec, &eh, &ep) ==
            4);
    // round trip: recompute from the parsed delta
    CHECK(std::abs(ec - correlation(classical_joint(0.0, d))) <= 1e-8);
    CHECK(std::abs(eh - correlation(quantum_joint(
                            0.0, d, SpinConvention::half))) <= 1e-8);
    CHECK(std::abs(ep - correlation(quantum_joint(
                            0.0, d, SpinConvention::photon))) <= 1e-8);
    if (rows == 0) {
      CHECK(ec == doctest::Approx(-1.0));
      CHECK(eh == doctest::Approx(-1.0));
    }
    if (rows == 45) {  // delta = pi/4
      CHECK(ec == doctest::Approx(-0.5));
      CHECK(eh == doctest::Approx(-0.707106781));
    }
    if (rows == 90) {  // delta = pi/2
      CHECK(ec == doctest::Approx(0.0));
      CHECK(eh == doctest::Approx(0.0));
    }
    last_ec = ec;
    last_eh = eh;
    ++rows;
  }
  CHECK(rows == 181);
  CHECK(last_ec == doctest::Approx(1.0));
  CHECK(last_eh == doctest::Approx(1.0));
}

TEST_CASE("chsh subcommand") {
  const json opt = run_to_json(
      {"chsh", "--model", "quantum-half", "--optimize"}, "chsh_opt.json");
  CHECK(opt.at("value").get<double>() == doctest::Approx(2.828427).epsilon(1e-6));

  const json fixed = run_to_json({"chsh", "--model", "classical", "--a", "0",
                                  "--a-prime", "90", "--b", "45", "--b-prime",
                                  "135", "--degrees"},
                                 "chsh_fixed.json");
  CHECK(std::abs(fixed.at("value").get<double>()) == doctest::Approx(2.0));
}

TEST_CASE("match subcommand") {
  const json m = run_to_json({"match", "--delta-q", "0.785398163"},
                             "match.json");
  CHECK(m.at("max_entry_diff").get<double>() <= 1e-9);
  const json t = run_to_json({"match", "--target", "0.26"}, "match_t.json");
  CHECK(t.at("delta_c").get<double>() == doctest::Approx(pi * 0.63));
  // exactly one of the two selectors
  CHECK(run_cli({"match"}) == 1);
}

TEST_CASE("separability subcommand") {
  const json w = run_to_json(
      {"separability", "--family", "werner", "--tol", "1e-6"}, "sep.json");
  CHECK(w.at("threshold").get<double>() ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-6));

  const fs::path state = tmp_file("singlet.json");
  spit(state, density_matrix_to_json(singlet_state()).dump());
  const json s =
      run_to_json({"separability", "--state", state.string()}, "sep_s.json");
  CHECK_FALSE(s.at("separable").get<bool>());
  CHECK(s.at("pt_min_eigenvalue").get<double>() == doctest::Approx(-0.5));
}

TEST_CASE("distort subcommand") {
  const json d = run_to_json({"distort", "--probs", "0,0.5,0.5,0", "--b-coef",
                              "-0.125"},
                             "distort.json");
  CHECK(d.at("output")[0].get<double>() == doctest::Approx(0.125));
  CHECK(d.at("output")[1].get<double>() == doctest::Approx(0.375));
  CHECK_FALSE(d.at("has_negative").get<bool>());
  CHECK(d.at("complement_form").at("a").get<double>() ==
        doctest::Approx(0.625));

  const fs::path state = tmp_file("singlet2.json");
  spit(state, density_matrix_to_json(singlet_state()).dump());
  const json w = run_to_json({"distort", "--state", state.string(),
                              "--visibility", "0.5"},
                             "distort_state.json");
  const DensityMatrix back = density_matrix_from_json(w);
  CHECK((back.matrix() - werner_state(0.5).matrix()).cwiseAbs().maxCoeff() <=
        1e-12);
}

TEST_CASE("inhibit subcommand") {
  const json r = run_to_json(
      {"inhibit", "--inputs", "1,0", "--weight", "0.5"}, "inhibit.json");
  CHECK(r.at("output")[0].get<double>() == doctest::Approx(4.0 / 3.0));
  CHECK(r.at("output")[1].get<double>() == doctest::Approx(-2.0 / 3.0));
  const json rc = run_to_json({"inhibit", "--inputs", "1,0", "--weight", "0.5",
                               "--rectified"},
                              "inhibit_r.json");
  CHECK(rc.at("output")[0].get<double>() == doctest::Approx(1.0));
  CHECK(rc.at("output")[1].get<double>() == doctest::Approx(0.0));
}

TEST_CASE("trial and breilmann subcommands with config files") {
  const fs::path pop = tmp_file("pop.json");
  spit(pop, json{{"version", 1},
                 {"n_patients", 20000},
                 {"seed", 42},
                 {"model", {{"type", "quantum"}, {"spin", "half"}}},
                 {"angle_mode",
                  {{"type", "fixed_four"},
                   {"settings",
                    {{"a", 0.0},
                     {"a_prime", pi / 2.0},
                     {"b", pi / 4.0},
                     {"b_prime", 3.0 * pi / 4.0}}}}}}
                .dump());
  const json est = run_to_json({"trial", "--config", pop.string()},
                               "trial.json");
  CHECK(std::abs(est.at("s_hat").get<double>()) ==
        doctest::Approx(2.828).epsilon(0.05));

  const fs::path brl = tmp_file("brl.json");
  spit(brl, json{{"version", 1},
                 {"n_patients", 10000},
                 {"seed", 7},
                 {"compliance_threshold", 0.5},
                 {"outcome_rule",
                  {{"type", "indicator"}, {"threshold", 0.5}}}}
                .dump());
  const json r = run_to_json({"breilmann", "--config", brl.string()},
                             "brl.json");
  CHECK(r.at("observed_rate_treated").get<double>() == 1.0);
  CHECK(r.at("true_causal_effect").get<double>() == 0.0);
}

TEST_CASE("masking subcommand") {
  const fs::path pop = tmp_file("pop_mask.json");
  spit(pop, json{{"version", 1},
                 {"n_patients", 20000},
                 {"seed", 3},
                 {"model", {{"type", "quantum"}, {"spin", "half"}}},
                 {"angle_mode",
                  {{"type", "fixed_four"},
                   {"settings",
                    {{"a", 0.0},
                     {"a_prime", pi / 2.0},
                     {"b", pi / 4.0},
                     {"b_prime", 3.0 * pi / 4.0}}}}}}
                .dump());
  const json rep = run_to_json({"masking", "--config", pop.string(),
                                "--visibility", "0.6"},
                               "mask.json");
  REQUIRE(rep.at("scenarios").size() == 4);
  CHECK(rep.at("scenarios")[0].at("verdict") == "violates classical bound");
  CHECK(rep.at("scenarios")[1].at("verdict") == "no violation");
}

TEST_CASE("error handling and exit codes") {
  CHECK(run_cli({"curve", "--no-such-flag"}) == 2);
  CHECK(run_cli({}) == 2);  // a subcommand is required

  // unknown config keys are errors
  const fs::path bad = tmp_file("bad.json");
  spit(bad, json{{"version", 1},
                 {"n_patients", 10},
                 {"typo_key", true},
                 {"model", {{"type", "classical"}}},
                 {"angle_mode", {{"type", "per_patient_random"}}}}
                .dump());
  CHECK(run_cli({"trial", "--config", bad.string()}) == 1);

  // missing version
  spit(bad, json{{"n_patients", 10}}.dump());
  CHECK(run_cli({"breilmann", "--config", bad.string()}) == 1);
}

TEST_CASE("seed resolution: flag beats env beats config") {
  const fs::path pop = tmp_file("pop_seed.json");
  spit(pop, json{{"version", 1},
                 {"n_patients", 5000},
                 {"seed", 1},
                 {"model", {{"type", "quantum"}, {"spin", "half"}}},
                 {"angle_mode",
                  {{"type", "fixed_four"},
                   {"settings",
                    {{"a", 0.0},
                     {"a_prime", pi / 2.0},
                     {"b", pi / 4.0},
                     {"b_prime", 3.0 * pi / 4.0}}}}}}
                .dump());
  const json from_config =
      run_to_json({"trial", "--config", pop.string()}, "seed_cfg.json");
  setenv("BELLNOISE_SEED", "99", 1);
  const json from_env =
      run_to_json({"trial", "--config", pop.string()}, "seed_env.json");
  const json from_flag = run_to_json(
      {"trial", "--config", pop.string(), "--seed", "1"}, "seed_flag.json");
  unsetenv("BELLNOISE_SEED");
  CHECK(from_env != from_config);
  CHECK(from_flag == from_config);
}

TEST_CASE("density matrix json round trip") {
  const DensityMatrix w = werner_state(0.37);
  const DensityMatrix back = density_matrix_from_json(density_matrix_to_json(w));
  CHECK((back.matrix() - w.matrix()).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK_THROWS(density_matrix_from_json(json::array({1, 2, 3})));
}
