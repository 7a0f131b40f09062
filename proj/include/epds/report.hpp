#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "epds/plant.hpp"
#include "epds/scenario.hpp"
#include "epds/simkernel.hpp"

namespace epds {

inline constexpr int kSummarySchemaVersion = 1;

/// Voltage band used for settling times, percent of V*.
inline constexpr double kSettleBandPct = 0.5;

/// Trajectory CSV: t_s, V_dc_V, I_tau_*_A, phi_*, theta_*, rhat_*_ohm, eta_*, u_*_V.
std::vector<std::string> trajectory_header(Index n);
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

/// t_s, segment, voltage_deviation_pct, sharing_error_A, max_spread_A, rhat_err_*_pct.
std::vector<std::string> metrics_header(Index n);
void write_metrics_csv(std::ostream& out, const Trajectory& traj, const PlantParams& params,
                       const Vector& W, double V_star);

struct SegmentSummary {
  std::string name;
  double start_s = 0.0;
  double end_s = 0.0;
  double I_ell_A = 0.0;
  double V_end_V = 0.0;
  Vector I_end_A;
  double alpha_A = 0.0;  // equilibrium weighted current
  double mean_weighted_current_A = 0.0;
  // means over the last tenth of the segment
  double voltage_deviation_pct = 0.0;
  double sharing_error_A = 0.0;
  double max_spread_pct = 0.0;  // of the mean weighted current
  double equilibrium_current_error_pct = 0.0;  // max_i |I_i - alpha/w_i| / (alpha/w_i)
  std::optional<double> settling_time_s;  // empty if still outside the band at the end
};

struct RunSummary {
  std::string controller;
  Index n_s = 0;
  double V_dc_star_V = 0.0;
  std::size_t samples = 0;
  double t_end_s = 0.0;
  std::vector<SegmentSummary> segments;
  double steady_voltage_deviation_pct = 0.0;  // mean over segments
  double steady_sharing_error_A = 0.0;        // mean over segments
  double mean_sharing_error_A = 0.0;          // whole run
  Vector rhat_end_ohm;
  Vector rhat_error_pct;
  double invariant_drift = 0.0;
  double invariant_initial = 0.0;
  std::vector<std::string> warnings;
};

/// Per-segment steady-state figures. Samples in the last tenth of each
/// segment form its steady-state window.
RunSummary summarize(const Trajectory& traj, const PlantParams& params,
                     const ControllerSetup& controller, const Scenario& scenario);

nlohmann::json to_json(const RunSummary& s);

/// Structural check of a summary document; returns one message per problem.
std::vector<std::string> validate_summary(const nlohmann::json& doc);

/// Shortest round-trip decimal form of x.
std::string format_double(double x);

}  // namespace epds
