#pragma once

#include <optional>
#include <string>
#include <vector>

#include "epds/controllers.hpp"
#include "epds/plant.hpp"
#include "epds/types.hpp"

namespace epds {

struct Segment {
  std::string name;
  double duration_s = 0.0;
  double I_ell_pu = 0.0;
};

/// Piecewise-constant load profile in per-unit of (V_base, I_base).
struct Scenario {
  std::vector<Segment> segments;
  double V_base = 200.0;  // V
  double I_base = 6.7;    // A
  double V_dc_star = 200.0;  // V
  std::optional<double> Y_pu;  // admittance in I_base / V_base; plant value if absent

  void validate() const;
  double total_duration() const;
  /// Segment active at time t (the last one past the end).
  std::size_t segment_at(double t) const;
  double segment_start(std::size_t k) const;
  double segment_end(std::size_t k) const { return segment_start(k) + segments[k].duration_s; }

  double load_current(std::size_t k) const { return segments[k].I_ell_pu * I_base; }
  double admittance(const PlantParams& params) const;
};

double pu_to_amperes(double pu, double I_base);
double amperes_to_pu(double amperes, double I_base);

/// Takeoff 35 s / 2.98 pu, cruise 25 s / 2.3 pu, landing 25 s / 1.7 pu,
/// 200 V / 6.7 A bases.
Scenario builtin_regional_profile();

/// The same load levels with every segment set to segment_s. Short
/// segments only show the electrical transient, not controller settling.
Scenario test_scale_profile(double segment_s = 0.05);

/// The same load levels with segments long enough (90/45/30 s) for the
/// adaptive loop to settle under the reference gains.
Scenario settled_regional_profile();

/// "regional", "regional-settled" or "regional-short"; throws ConfigError otherwise.
Scenario builtin_scenario(const std::string& name);

struct TrajectorySample {
  double t = 0.0;
  std::size_t segment = 0;
  PlantState plant;
  AdaptiveCtrlState ctrl;
  Vector u;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  std::vector<std::string> warnings;
  Index size_n() const { return samples.empty() ? 0 : samples.front().plant.I_tau.size(); }
};

/// 100 |V_dc - V*| / V* per sample.
std::vector<double> voltage_deviation_pct(const Trajectory& traj, double V_star);

/// Norm of the stacked pairwise differences (w_i I_i - w_j I_j), i < j.
double sharing_error(const Vector& I_tau, const Vector& W);
std::vector<double> current_sharing_error(const Trajectory& traj, const Vector& W);

/// max_{i,j} |w_i I_i - w_j I_j|.
double max_sharing_spread(const Vector& I_tau, const Vector& W);

struct ResistanceError {
  Vector absolute;      // ohm
  Vector relative_pct;  // percent of R_tau
};

std::vector<ResistanceError> resistance_estimation_error(const Trajectory& traj,
                                                         const PlantParams& params);

}  // namespace epds
