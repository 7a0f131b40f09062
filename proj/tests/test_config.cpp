#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "epds/commands.hpp"
#include "epds/config.hpp"
#include "epds/report.hpp"

using namespace epds;
namespace fs = std::filesystem;

namespace {

const std::string kSource = EPDS_SOURCE_DIR;

std::string error_of(const std::string& yaml) {
  try {
    parse_config(yaml, "cfg.yaml");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("epds-test-" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

void check_same(const RunConfig& a, const RunConfig& b) {
  CHECK(a.plant.L_tau == b.plant.L_tau);
  CHECK(a.plant.R_tau == b.plant.R_tau);
  CHECK(a.plant.L_min == b.plant.L_min);
  CHECK(a.plant.L_max == b.plant.L_max);
  CHECK(a.plant.C_dc == b.plant.C_dc);
  CHECK(a.plant.Y == b.plant.Y);
  CHECK(a.c1.T_phi == b.c1.T_phi);
  CHECK(a.c1.T_theta == b.c1.T_theta);
  CHECK(a.c1.T_rhat == b.c1.T_rhat);
  CHECK(a.c1.T_eta == b.c1.T_eta);
  CHECK(a.c1.K_z == b.c1.K_z);
  CHECK(a.c1.W == b.c1.W);
  CHECK(a.c1.V_dc_star == b.c1.V_dc_star);
  CHECK(a.c2.k_droop == b.c2.k_droop);
  CHECK(a.c3.assumed_R == b.c3.assumed_R);
  CHECK(a.c3.T_theta == b.c3.T_theta);
  CHECK(a.graph.edges() == b.graph.edges());
  CHECK(a.graph.max_delay() == b.graph.max_delay());
  CHECK(a.graph.broadcast_delay() == b.graph.broadcast_delay());
  REQUIRE(a.scenario.segments.size() == b.scenario.segments.size());
  for (std::size_t k = 0; k < a.scenario.segments.size(); ++k) {
    CHECK(a.scenario.segments[k].name == b.scenario.segments[k].name);
    CHECK(a.scenario.segments[k].duration_s == b.scenario.segments[k].duration_s);
    CHECK(a.scenario.segments[k].I_ell_pu == b.scenario.segments[k].I_ell_pu);
  }
  CHECK(a.integrator.step_s == b.integrator.step_s);
  CHECK(a.integrator.record_every == b.integrator.record_every);
  CHECK(a.noise.seed == b.noise.seed);
}

const char* kMinimal = R"(schema_version: 1
plant:
  L_tau_H: [900.0e-6, 550.0e-6, 350.0e-6]
  R_tau_ohm: [1.33, 0.78, 0.71]
  L_min_H: 300.0e-6
  L_max_H: 1.0e-3
  C_dc_F: 0.318e-6
)";

}  // namespace

TEST_CASE("shipped default config is the reference setup") {
  const RunConfig cfg = load_config(kSource + "/configs/default.yaml");
  check_same(cfg, RunConfig::reference());
  CHECK((cfg.c3.assumed_R - 0.9 * cfg.plant.R_tau).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("every shipped config loads") {
  for (const auto& entry : fs::directory_iterator(kSource + "/configs")) {
    CAPTURE(entry.path().string());
    CHECK_NOTHROW(load_config(entry.path().string()));
  }
}

TEST_CASE("minimal config falls back to reference gains") {
  const RunConfig cfg = parse_config(kMinimal);
  CHECK(cfg.graph.edges().size() == 2);
  CHECK(cfg.c1.T_rhat == Vector::Constant(3, 10.0));
  CHECK(cfg.c1.T_eta == Vector::Constant(3, 1e6));
  CHECK(cfg.scenario.segments.size() == 3);
}

TEST_CASE("config errors name the line") {
  SUBCASE("negative resistance") {
    const std::string e = error_of(std::string(kMinimal) + "controllers:\n  c1:\n    T_phi: 1.0\n" +
                                   "  c2:\n    k_droop_ohm: -0.5\n");
    CHECK(e.find("cfg.yaml:12") != std::string::npos);
  }
  SUBCASE("unknown key") {
    const std::string e = error_of(std::string(kMinimal) + "integrator:\n  stepsize: 1.0e-6\n");
    CHECK(e.find("cfg.yaml:9") != std::string::npos);
    CHECK(e.find("stepsize") != std::string::npos);
  }
  SUBCASE("shape mismatch") {
    const std::string e = error_of(R"(schema_version: 1
plant:
  L_tau_H: [900.0e-6, 550.0e-6]
  R_tau_ohm: [1.33, 0.78, 0.71]
  L_min_H: 300.0e-6
  L_max_H: 1.0e-3
  C_dc_F: 0.318e-6
)");
    CHECK(e.find("cfg.yaml:") == 0);
  }
  SUBCASE("missing schema version") {
    CHECK(error_of("plant: {}\n").find("schema_version") != std::string::npos);
  }
  SUBCASE("newer schema") {
    CHECK(error_of("schema_version: 2\n").find("schema_version") != std::string::npos);
  }
  SUBCASE("disconnected graph") {
    CHECK_FALSE(error_of(std::string(kMinimal) + "graph:\n  edges: [[1, 2]]\n").empty());
  }
  SUBCASE("inductance outside its bounds") {
    CHECK(error_of(std::string(kMinimal) + "V_dc_star_V: 200\n").empty());
    CHECK_FALSE(error_of(R"(schema_version: 1
plant:
  L_tau_H: 2.0e-3
  R_tau_ohm: [1.33, 0.78, 0.71]
  L_min_H: 300.0e-6
  L_max_H: 1.0e-3
  C_dc_F: 0.318e-6
)").empty());
  }
  SUBCASE("not YAML") {
    CHECK_FALSE(error_of("plant: [unclosed\n").empty());
  }
}

TEST_CASE("dump and parse round trip") {
  RunConfig cfg = RunConfig::reference();
  cfg.graph = CommGraph::ring(3, 2e-3);
  cfg.graph.set_link_delay(0, 2, 1e-3);
  cfg.scenario.segments = {{"climb", 1.25, 2.5}, {"hold", 0.75, 0.1}};
  cfg.c1.K_z = Vector{{1.0, 2.0, 3.5}};
  cfg.c3.assumed_R = Vector{{0.1, 0.2, 0.3}};
  cfg.noise = {0.01, 0.02, 77};
  const RunConfig back = parse_config(dump_config(cfg));
  check_same(cfg, back);
  CHECK(back.graph.link_delay(0, 2) == 1e-3);
  CHECK(back.graph.link_delay(0, 1) == 2e-3);
  CHECK(back.noise.sigma_V_V == 0.02);
  CHECK(dump_config(back) == dump_config(cfg));
}

TEST_CASE("summary schema") {
  RunConfig cfg = parse_config(std::string(kMinimal) + "scenario:\n  segments:\n" +
                               "    - {name: a, duration_s: 0.002, I_ell_pu: 1.0}\n" +
                               "integrator:\n  step_s: 1.0e-7\n  record_every: 10\n");
  const SimulationResult r = run_simulation(cfg, ControllerKind::C1);
  const nlohmann::json doc = to_json(r.summary);
  CHECK(validate_summary(doc).empty());
  CHECK(doc["schema"] == "epds.summary");
  CHECK(doc["schema_version"] == kSummarySchemaVersion);
  CHECK(doc["resistance_estimate"].is_object());

  nlohmann::json broken = doc;
  broken.erase("steady_state");
  CHECK_FALSE(validate_summary(broken).empty());
  broken = doc;
  broken["schema_version"] = 99;
  CHECK_FALSE(validate_summary(broken).empty());

  const nlohmann::json droop = to_json(run_simulation(cfg, ControllerKind::C2).summary);
  CHECK(validate_summary(droop).empty());
  CHECK(droop["resistance_estimate"].is_null());
}

TEST_CASE("csv layout") {
  const auto h = trajectory_header(2);
  const std::vector<std::string> expected{"t_s",    "V_dc_V",  "I_tau_1_A", "I_tau_2_A",    "phi_1",
                                          "phi_2",  "theta_1", "theta_2",   "rhat_1_ohm",   "rhat_2_ohm",
                                          "eta_1",  "eta_2",   "u_1_V",     "u_2_V"};
  CHECK(h == expected);
  const auto m = metrics_header(2);
  CHECK(m.front() == "t_s");
  CHECK(m.back() == "rhat_err_2_pct");

  Trajectory t;
  TrajectorySample s;
  s.t = 0.1;
  s.plant = {Vector{{1.5, -2.0}}, 199.25};
  s.ctrl = AdaptiveCtrlState::zeros(2);
  s.u = Vector{{200.0, 201.0}};
  t.samples.push_back(s);
  std::ostringstream out;
  write_trajectory_csv(out, t);
  std::istringstream lines(out.str());
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  CHECK(row == "0.1,199.25,1.5,-2,0,0,0,0,0,0,0,0,200,201");
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1e-7) == "1e-07");
}

TEST_CASE("analytic verification on the reference config") {
  RunConfig cfg = RunConfig::reference();
  const auto results = run_verify(cfg, 30);
  for (const auto& r : results) {
    CAPTURE(r.name);
    CAPTURE(r.value);
    CHECK(r.pass);
  }
  cfg.c1.T_phi = Vector::Constant(3, 1e-4);
  bool gain_failed = false;
  for (const auto& r : run_verify(cfg, 5)) gain_failed = gain_failed || !r.pass;
  CHECK(gain_failed);
}

TEST_CASE("command exit codes and reproducible output") {
  std::ostringstream out, err;
  const fs::path dir = scratch_dir("cmd");
  const std::string quick = kSource + "/configs/quick.yaml";

  CHECK(cmd_verify(quick, out, err) == kExitOk);
  CHECK(cmd_simulate(quick, ControllerKind::C1, (dir / "a").string(), out, err) == kExitOk);
  CHECK(cmd_simulate(quick, ControllerKind::C1, (dir / "b").string(), out, err) == kExitOk);
  for (const char* f : {"trajectory.csv", "metrics.csv", "summary.json"}) {
    CAPTURE(f);
    REQUIRE(fs::exists(dir / "a" / f));
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
  }

  CHECK(cmd_simulate(kSource + "/configs/missing.yaml", std::nullopt, std::nullopt, out, err) == kExitConfigError);
  const fs::path bad = dir / "bad.yaml";
  std::ofstream(bad) << kMinimal << "integrator:\n  step_s: -1\n";
  CHECK(cmd_verify(bad.string(), out, err) == kExitConfigError);

  const fs::path coarse = dir / "coarse.yaml";
  std::ofstream(coarse) << kMinimal << "integrator:\n  step_s: 1.0e-3\n";
  CHECK(cmd_simulate(coarse.string(), ControllerKind::C1, (dir / "c").string(), out, err) == kExitNumericalAbort);

  const fs::path weak = dir / "weak.yaml";
  std::ofstream(weak) << kMinimal << "controllers:\n  c1:\n    T_phi: 1.0e-4\n";
  CHECK(cmd_verify(weak.string(), out, err) == kExitCheckFailed);
  fs::remove_all(dir);
}
