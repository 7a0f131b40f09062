#pragma once

#include <span>
#include <vector>

#include "epds/graph.hpp"
#include "epds/plant.hpp"
#include "epds/types.hpp"

namespace epds {

/// Tuning of the distributed adaptive controller. Every vector holds the
/// diagonal of the corresponding per-source gain matrix.
struct ControllerGains {
  Vector T_phi;
  Vector T_theta;
  Vector T_rhat;
  Vector T_eta;
  Vector K_z;
  Vector W;  // current-sharing weights
  double V_dc_star = 200.0;  // V

  Index size() const { return W.size(); }
  void validate(Index n) const;

  /// T_phi = T_theta = I, T_rhat = 10 I, T_eta = 1e6 I, K_z = 2 I, W = I, V* = 200 V.
  static ControllerGains reference(Index n = 3);
};

struct AdaptiveCtrlState {
  Vector phi;    // A
  Vector theta;  // consensus variable
  Vector rhat;   // ohm
  Vector eta;    // H

  static AdaptiveCtrlState zeros(Index n);
  Index size() const { return phi.size(); }
};

/// One source's controller state.
struct DguState {
  double phi = 0.0;
  double theta = 0.0;
  double rhat = 0.0;
  double eta = 0.0;
};

struct DguStateRate {
  double phi = 0.0;
  double theta = 0.0;
  double rhat = 0.0;
  double eta = 0.0;
};

/// Data received from one neighbor (possibly delayed).
struct NeighborSample {
  Index id = 0;
  double I_tau = 0.0;
  double theta = 0.0;
};

/// What source i sees of the rest of the network: its neighbors' samples
/// and the broadcast bus voltage.
struct NeighborView {
  std::span<const NeighborSample> neighbors;
  double V_dc = 0.0;
};

struct C1Output {
  double u = 0.0;
  DguStateRate rate;
};

/// Evaluates the adaptive controller for source i: the control voltage and
/// the controller-state derivative share one evaluation of the bracketed
/// voltage/consensus error. Throws ConfigError if the neighbor set does
/// not match the graph.
C1Output c1_evaluate(const ControllerGains& gains, const CommGraph& graph, Index i,
                     const DguState& state, double I_own, const NeighborView& view);

DguStateRate c1_state_derivative(const ControllerGains& gains, const CommGraph& graph, Index i,
                                 const DguState& state, double I_own, const NeighborView& view);

double c1_control_law(const ControllerGains& gains, const CommGraph& graph, Index i,
                      const DguState& state, double I_own, const NeighborView& view);

/// V-I droop baseline.
struct DroopGains {
  Vector k_droop;  // ohm
  double V_dc_star = 200.0;

  void validate(Index n) const;
  /// k_i = 0.5 / w_i ohm, so droop sharing ratios follow the weights.
  static DroopGains from_weights(const Vector& W, double V_dc_star);
};

double c2_droop(const DroopGains& gains, Index i, double I_own);

/// Consensus baseline that compensates line drops with assumed (known)
/// resistances: u_i = V* + R_i I_i - w_i sum(theta_i - theta_j),
/// T_theta theta_i' = sum(w_i I_i - w_j I_j).
struct ConsensusGains {
  Vector T_theta;
  Vector W;
  Vector assumed_R;  // ohm
  double V_dc_star = 200.0;

  void validate(Index n) const;
  static ConsensusGains from_plant(const PlantParams& params, double resistance_scale,
                                   const Vector& W, double V_dc_star);
};

struct C3Output {
  double u = 0.0;
  double theta_rate = 0.0;
};

C3Output c3_known_r_consensus(const ConsensusGains& gains, const CommGraph& graph, Index i,
                              double theta, double I_own, const NeighborView& view);

struct GainCheck {
  bool pass = false;
  double bound = 0.0;   // L_max - L_min
  double margin = 0.0;  // T_phi - bound
};

struct GainReport {
  std::vector<GainCheck> per_dgu;
  bool pass = false;
};

/// Checks T_phi_i > L_max_i - L_min_i for every source.
GainReport verify_gains(const ControllerGains& gains, const PlantParams& params);

/// Interval for eta inside which the stability argument applies: centred on
/// the inductance interval and strictly narrower than T_phi.
struct EtaBand {
  Vector lower;
  Vector upper;
};
EtaBand eta_band(const ControllerGains& gains, const PlantParams& params);

}  // namespace epds
