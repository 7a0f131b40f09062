#include "epds/controllers.hpp"

#include <cmath>
#include <sstream>

namespace epds {

namespace {

void require_positive(const Vector& v, Index n, const char* name) {
  if (v.size() != n) {
    std::ostringstream msg;
    msg << name << " has " << v.size() << " entries, expected " << n;
    throw ConfigError(msg.str());
  }
  for (Index i = 0; i < n; ++i) {
    if (!std::isfinite(v[i]) || v[i] <= 0.0) {
      std::ostringstream msg;
      msg << name << "[" << i + 1 << "] must be positive, got " << v[i];
      throw ConfigError(msg.str());
    }
  }
}

void check_neighbors(const CommGraph& graph, Index i, const NeighborView& view) {
  const auto& expected = graph.neighbors(i);
  bool ok = view.neighbors.size() == expected.size();
  for (std::size_t a = 0; ok && a < view.neighbors.size(); ++a) {
    const Index id = view.neighbors[a].id;
    ok = graph.adjacent(i, id);
    for (std::size_t b = 0; ok && b < a; ++b) ok = view.neighbors[b].id != id;
  }
  if (!ok) {
    std::ostringstream msg;
    msg << "neighbor view of node " << i + 1 << " does not match the communication graph";
    throw ConfigError(msg.str());
  }
}

}  // namespace

void ControllerGains::validate(Index n) const {
  require_positive(T_phi, n, "T_phi");
  require_positive(T_theta, n, "T_theta");
  require_positive(T_rhat, n, "T_rhat");
  require_positive(T_eta, n, "T_eta");
  require_positive(K_z, n, "K_z");
  require_positive(W, n, "W");
  if (!std::isfinite(V_dc_star)) throw ConfigError("V_dc_star must be finite");
}

ControllerGains ControllerGains::reference(Index n) {
  ControllerGains g;
  g.T_phi = Vector::Ones(n);
  g.T_theta = Vector::Ones(n);
  g.T_rhat = Vector::Constant(n, 10.0);
  g.T_eta = Vector::Constant(n, 1e6);
  g.K_z = Vector::Constant(n, 2.0);
  g.W = Vector::Ones(n);
  g.V_dc_star = 200.0;
  return g;
}

AdaptiveCtrlState AdaptiveCtrlState::zeros(Index n) {
  return {Vector::Zero(n), Vector::Zero(n), Vector::Zero(n), Vector::Zero(n)};
}

C1Output c1_evaluate(const ControllerGains& gains, const CommGraph& graph, Index i,
                     const DguState& state, double I_own, const NeighborView& view) {
  check_neighbors(graph, i, view);
  const double w_i = gains.W[i];

  double theta_spread = 0.0;  // sum_j (theta_i - theta_j)
  double sharing = 0.0;       // sum_j (w_i I_i - w_j I_j)
  for (const auto& nb : view.neighbors) {
    theta_spread += state.theta - nb.theta;
    sharing += w_i * I_own - gains.W[nb.id] * nb.I_tau;
  }

  const double voltage_error = view.V_dc - gains.V_dc_star;
  const double consensus = w_i * theta_spread;
  // T_phi * phi' ; the same bracket drives eta and the control law.
  const double phi_drive = -voltage_error - consensus;
  const double bracket = phi_drive / gains.T_phi[i];
  const double z = I_own - state.phi;

  C1Output out;
  out.rate.phi = bracket;
  out.rate.theta = sharing / gains.T_theta[i];
  out.rate.rhat = -I_own * z / gains.T_rhat[i];
  out.rate.eta = -bracket * z / gains.T_eta[i];
  out.u = -gains.K_z[i] * z + state.rhat * I_own + gains.V_dc_star + bracket * state.eta - consensus;
  return out;
}

DguStateRate c1_state_derivative(const ControllerGains& gains, const CommGraph& graph, Index i,
                                 const DguState& state, double I_own, const NeighborView& view) {
  return c1_evaluate(gains, graph, i, state, I_own, view).rate;
}

double c1_control_law(const ControllerGains& gains, const CommGraph& graph, Index i,
                      const DguState& state, double I_own, const NeighborView& view) {
  return c1_evaluate(gains, graph, i, state, I_own, view).u;
}

void DroopGains::validate(Index n) const {
  require_positive(k_droop, n, "k_droop");
  if (!std::isfinite(V_dc_star)) throw ConfigError("V_dc_star must be finite");
}

DroopGains DroopGains::from_weights(const Vector& W, double V_dc_star) {
  return {(0.5 * W.cwiseInverse()).eval(), V_dc_star};
}

double c2_droop(const DroopGains& gains, Index i, double I_own) {
  return gains.V_dc_star - gains.k_droop[i] * I_own;
}

void ConsensusGains::validate(Index n) const {
  require_positive(T_theta, n, "T_theta");
  require_positive(W, n, "W");
  require_positive(assumed_R, n, "assumed_R");
  if (!std::isfinite(V_dc_star)) throw ConfigError("V_dc_star must be finite");
}

ConsensusGains ConsensusGains::from_plant(const PlantParams& params, double resistance_scale,
                                          const Vector& W, double V_dc_star) {
  return {Vector::Ones(params.size()), W, (resistance_scale * params.R_tau).eval(), V_dc_star};
}

C3Output c3_known_r_consensus(const ConsensusGains& gains, const CommGraph& graph, Index i,
                              double theta, double I_own, const NeighborView& view) {
  check_neighbors(graph, i, view);
  const double w_i = gains.W[i];
  double theta_spread = 0.0;
  double sharing = 0.0;
  for (const auto& nb : view.neighbors) {
    theta_spread += theta - nb.theta;
    sharing += w_i * I_own - gains.W[nb.id] * nb.I_tau;
  }
  C3Output out;
  out.u = gains.V_dc_star + gains.assumed_R[i] * I_own - w_i * theta_spread;
  out.theta_rate = sharing / gains.T_theta[i];
  return out;
}

GainReport verify_gains(const ControllerGains& gains, const PlantParams& params) {
  GainReport report;
  report.pass = true;
  for (Index i = 0; i < params.size(); ++i) {
    GainCheck c;
    c.bound = params.L_max[i] - params.L_min[i];
    c.margin = gains.T_phi[i] - c.bound;
    c.pass = gains.T_phi[i] > c.bound;
    report.pass = report.pass && c.pass;
    report.per_dgu.push_back(c);
  }
  return report;
}

EtaBand eta_band(const ControllerGains& gains, const PlantParams& params) {
  EtaBand band{params.L_min, params.L_max};
  for (Index i = 0; i < params.size(); ++i) {
    const double margin = gains.T_phi[i] - (params.L_max[i] - params.L_min[i]);
    if (margin > 0.0) {
      band.lower[i] -= 0.25 * margin;
      band.upper[i] += 0.25 * margin;
    }
  }
  return band;
}

}  // namespace epds
