#include "epds/commands.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <random>

#include "epds/analysis.hpp"

namespace epds {

namespace fs = std::filesystem;
using nlohmann::json;

LogLevel log_level_from_env() {
  const char* v = std::getenv("EPDS_LOG");
  if (!v) return LogLevel::Warn;
  const std::string s(v);
  if (s == "error") return LogLevel::Error;
  if (s == "info") return LogLevel::Info;
  if (s == "debug") return LogLevel::Debug;
  return LogLevel::Warn;
}

namespace {

bool logs(LogLevel level) { return log_level_from_env() >= level; }

ClosedLoopState random_state(const PlantParams& p, const ControllerGains& g, std::mt19937_64& rng) {
  const Index n = p.size();
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto draw = [&](double centre, double half) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v[i] = centre + half * u(rng);
    return v;
  };
  ClosedLoopState x;
  x.z = draw(0.0, 5.0);
  x.V_dc = g.V_dc_star + 20.0 * u(rng);
  x.phi = draw(5.0, 5.0);
  x.theta = draw(0.0, 2.0);
  x.rhat = draw(1.0, 1.0);
  x.eta = p.L_tau + draw(0.0, 5e-4);
  return x;
}

CheckResult check(std::string name, double value, double tol, std::string detail = {}) {
  return {std::move(name), value, tol, value <= tol, std::move(detail)};
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

PlantParams loaded(const RunConfig& cfg, std::size_t segment) {
  PlantParams p = cfg.plant;
  p.I_ell = cfg.scenario.load_current(segment);
  p.Y = cfg.scenario.admittance(cfg.plant);
  return p;
}

template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const NumericalAbort& e) {
    err << "numerical abort at step " << e.step() << " (t = " << e.time() << " s): " << e.what() << "\n";
    return kExitNumericalAbort;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
}

}  // namespace

std::vector<CheckResult> run_verify(const RunConfig& cfg, int random_states) {
  std::vector<CheckResult> out;
  const ControllerGains& g = cfg.c1;

  const GainReport gains = verify_gains(g, cfg.plant);
  double worst_margin = std::numeric_limits<double>::infinity();
  for (const auto& c : gains.per_dgu) worst_margin = std::min(worst_margin, c.margin);
  out.push_back({"gain condition T_phi > L_max - L_min", worst_margin, 0.0, gains.pass,
                 "smallest margin"});

  const Vector theta0 = cfg.initial_state().ctrl.theta;
  double eq_worst = 0.0;
  for (std::size_t k = 0; k < cfg.scenario.segments.size(); ++k) {
    const PlantParams p = loaded(cfg, k);
    const EquilibriumPoint eq = compute_equilibrium(p, g, theta0);
    const ClosedLoopState xb = eq.state();
    const double r = inf_norm(weighted_rate(p, g, closed_loop_rhs(p, g, cfg.graph, xb)));
    eq_worst = std::max(eq_worst, r / (1.0 + inf_norm(xb)));
  }
  out.push_back(check("equilibrium residual / (1 + |x_bar|)", eq_worst, 1e-10));

  std::mt19937_64 rng(cfg.noise.seed);
  const PlantParams p = loaded(cfg, 0);
  double ph_worst = 0.0, skew_worst = 0.0, sdot_worst = 0.0, sdot_max = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < random_states; ++k) {
    const ClosedLoopState x = random_state(p, g, rng);
    const PhCheck ph = ph_form_check(p, g, cfg.graph, x);
    ph_worst = std::max(ph_worst, ph.residual / ph.scale);
    skew_worst = std::max(skew_worst, ph.skew_residual);
    const EquilibriumPoint eq = compute_equilibrium(p, g, x.theta);
    const LyapunovRate r = lyapunov_S_dot(p, g, cfg.graph, x, eq);
    const double denom = std::max({std::abs(r.analytic), std::abs(r.chain_rule), 1e-300});
    sdot_worst = std::max(sdot_worst, std::abs(r.analytic - r.chain_rule) / denom);
    sdot_max = std::max(sdot_max, r.analytic);
  }
  out.push_back(check("port-Hamiltonian residual / scale", ph_worst, 1e-9));
  out.push_back(check("|J + J^T|", skew_worst, 0.0));
  out.push_back(check("Lyapunov rate two-path relative gap", sdot_worst, 1e-9));
  out.push_back(check("max Lyapunov rate (must be <= 0)", sdot_max, 0.0));
  return out;
}

SimulationResult run_simulation(const RunConfig& cfg, ControllerKind kind) {
  const ControllerSetup setup = cfg.setup(kind);
  SimulationResult r;
  r.trajectory = integrate(cfg.plant, setup, cfg.graph, cfg.scenario, cfg.integrator, cfg.initial_state(), cfg.noise);
  r.summary = summarize(r.trajectory, cfg.plant, setup, cfg.scenario);
  return r;
}

void write_run_outputs(const std::string& dir, const RunConfig& cfg, const SimulationResult& r) {
  const fs::path d(dir);
  fs::create_directories(d);
  {
    std::ofstream f(d / "trajectory.csv", std::ios::binary);
    write_trajectory_csv(f, r.trajectory);
  }
  {
    std::ofstream f(d / "metrics.csv", std::ios::binary);
    const ControllerSetup setup = cfg.setup(controller_from_string(r.summary.controller));
    write_metrics_csv(f, r.trajectory, cfg.plant, setup.weights(), setup.V_dc_star());
  }
  const json doc = to_json(r.summary);
  const auto problems = validate_summary(doc);
  if (!problems.empty()) throw std::logic_error("summary does not match its schema: " + problems.front());
  write_file(d / "summary.json", doc.dump(2) + "\n");
}

double resolved_sharing_error(const RunSummary& s) {
  if (s.segments.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& g : s.segments) {
    sum += std::max(g.sharing_error_A, kSharingResolution * std::abs(g.mean_weighted_current_A));
  }
  return sum / static_cast<double>(s.segments.size());
}

CompareResult run_compare(const RunConfig& cfg) {
  std::vector<std::future<SimulationResult>> jobs;
  for (ControllerKind k : {ControllerKind::C1, ControllerKind::C2, ControllerKind::C3}) {
    jobs.push_back(std::async(std::launch::async, [&cfg, k] { return run_simulation(cfg, k); }));
  }
  CompareResult out;
  for (auto& j : jobs) out.runs.push_back(j.get());

  const auto& s1 = out.runs[0].summary;
  const auto& s2 = out.runs[1].summary;
  const auto& s3 = out.runs[2].summary;
  out.voltage_ordering = s1.steady_voltage_deviation_pct < s3.steady_voltage_deviation_pct &&
                         s3.steady_voltage_deviation_pct < s2.steady_voltage_deviation_pct;
  out.sharing_ratio = resolved_sharing_error(s1) / resolved_sharing_error(s3);
  out.raw_sharing_ratio = s1.steady_sharing_error_A / s3.steady_sharing_error_A;
  out.sharing_comparable = out.sharing_ratio >= 0.2 && out.sharing_ratio <= 5.0 &&
                           s1.steady_sharing_error_A < s2.steady_sharing_error_A &&
                           s3.steady_sharing_error_A < s2.steady_sharing_error_A;
  return out;
}

int cmd_simulate(const std::string& config_path, std::optional<ControllerKind> kind,
                 std::optional<std::string> out_dir, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = load_config(config_path);
    const ControllerKind k = kind.value_or(ControllerKind::C1);
    const std::string dir = out_dir.value_or(cfg.out_dir);
    if (logs(LogLevel::Info)) err << "simulating " << to_string(k) << " for " << cfg.scenario.total_duration() << " s\n";
    const SimulationResult r = run_simulation(cfg, k);
    if (logs(LogLevel::Warn)) {
      for (const auto& w : r.trajectory.warnings) err << "warning: " << w << "\n";
    }
    write_run_outputs(dir, cfg, r);
    out << std::setprecision(6);
    out << "controller " << r.summary.controller << ", " << r.summary.samples << " samples written to " << dir << "\n";
    for (const auto& s : r.summary.segments) {
      out << "  " << std::left << std::setw(10) << s.name << " V_end " << s.V_end_V << " V, deviation "
          << s.voltage_deviation_pct << " %, spread " << s.max_spread_pct << " %\n";
    }
    return static_cast<int>(kExitOk);
  });
}

int cmd_verify(const std::string& config_path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = load_config(config_path);
    for (const auto& flag : cfg.plant.assumption_flags()) out << "note: " << flag << "\n";
    const auto results = run_verify(cfg);
    bool ok = true;
    for (const auto& r : results) {
      out << (r.pass ? "PASS " : "FAIL ") << std::left << std::setw(42) << r.name << std::right
          << std::setw(14) << std::setprecision(4) << std::scientific << r.value;
      if (!r.detail.empty()) out << "  (" << r.detail << ")";
      out << "\n" << std::defaultfloat;
      ok = ok && r.pass;
    }
    return static_cast<int>(ok ? kExitOk : kExitCheckFailed);
  });
}

int cmd_compare(const std::string& config_path, std::optional<std::string> out_dir, std::ostream& out,
                std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = load_config(config_path);
    const fs::path dir(out_dir.value_or(cfg.out_dir));
    if (logs(LogLevel::Info)) err << "running c1, c2 and c3 concurrently\n";
    const CompareResult cmp = run_compare(cfg);

    fs::create_directories(dir);
    std::string long_csv = "controller,t_s,voltage_deviation_pct,sharing_error_A\n";
    json ranking = json::array();
    for (const auto& r : cmp.runs) {
      write_run_outputs((dir / r.summary.controller).string(), cfg, r);
      const ControllerSetup setup = cfg.setup(controller_from_string(r.summary.controller));
      const auto dev = voltage_deviation_pct(r.trajectory, setup.V_dc_star());
      const auto share = current_sharing_error(r.trajectory, setup.weights());
      for (std::size_t k = 0; k < dev.size(); ++k) {
        long_csv += r.summary.controller + "," + format_double(r.trajectory.samples[k].t) + "," +
                    format_double(dev[k]) + "," + format_double(share[k]) + "\n";
      }
      ranking.push_back({{"controller", r.summary.controller},
                         {"steady_voltage_deviation_pct", r.summary.steady_voltage_deviation_pct},
                         {"steady_sharing_error_A", r.summary.steady_sharing_error_A},
                         {"mean_sharing_error_A", r.summary.mean_sharing_error_A}});
    }
    write_file(dir / "compare.csv", long_csv);
    const json doc = {{"runs", ranking},
                      {"voltage_ordering_c1_c3_c2", cmp.voltage_ordering},
                      {"sharing_ratio_c1_c3", cmp.sharing_ratio},
                      {"raw_sharing_ratio_c1_c3", cmp.raw_sharing_ratio},
                      {"sharing_comparable", cmp.sharing_comparable}};
    write_file(dir / "compare.json", doc.dump(2) + "\n");

    out << std::setprecision(4);
    for (const auto& r : cmp.runs) {
      out << r.summary.controller << ": steady voltage deviation " << r.summary.steady_voltage_deviation_pct
          << " %, steady sharing error " << r.summary.steady_sharing_error_A << " A\n";
    }
    out << "voltage ordering c1 < c3 < c2: " << (cmp.voltage_ordering ? "yes" : "no") << "\n";
    out << "sharing ratio c1/c3: " << cmp.sharing_ratio << (cmp.sharing_comparable ? " (comparable)" : " (not comparable)")
        << "\n";
    return static_cast<int>(kExitOk);
  });
}

}  // namespace epds
