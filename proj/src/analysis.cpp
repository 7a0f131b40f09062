#include "epds/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace epds {

namespace {

void require_n(const Vector& v, Index n, const char* name) {
  if (v.size() != n) {
    std::ostringstream msg;
    msg << name << " has " << v.size() << " entries, expected " << n;
    throw ConfigError(msg.str());
  }
}

void check_shapes(const PlantParams& params, const ControllerGains& gains, const CommGraph& graph,
                  const ClosedLoopState& x) {
  const Index n = params.size();
  require_n(gains.W, n, "W");
  if (graph.size() != n) throw ConfigError("graph size does not match the plant");
  require_n(x.z, n, "z");
  require_n(x.phi, n, "phi");
  require_n(x.theta, n, "theta");
  require_n(x.rhat, n, "rhat");
  require_n(x.eta, n, "eta");
}

// T_phi^-1 (-(V - V*) 1 - W Lcom theta)
Vector voltage_consensus_bracket(const ControllerGains& gains, const Matrix& lap,
                                 const ClosedLoopState& x) {
  const Vector drive = Vector::Constant(x.size(), -(x.V_dc - gains.V_dc_star)) -
                       gains.W.asDiagonal() * (lap * x.theta);
  return drive.cwiseQuotient(gains.T_phi);
}

}  // namespace

ClosedLoopState to_closed_loop(const PlantState& plant, const AdaptiveCtrlState& ctrl) {
  const Index n = plant.I_tau.size();
  require_n(ctrl.phi, n, "phi");
  require_n(ctrl.theta, n, "theta");
  require_n(ctrl.rhat, n, "rhat");
  require_n(ctrl.eta, n, "eta");
  return {plant.I_tau - ctrl.phi, plant.V_dc, ctrl.phi, ctrl.theta, ctrl.rhat, ctrl.eta};
}

std::pair<PlantState, AdaptiveCtrlState> from_closed_loop(const ClosedLoopState& cl) {
  const Index n = cl.z.size();
  require_n(cl.phi, n, "phi");
  require_n(cl.theta, n, "theta");
  require_n(cl.rhat, n, "rhat");
  require_n(cl.eta, n, "eta");
  return {PlantState{cl.z + cl.phi, cl.V_dc}, AdaptiveCtrlState{cl.phi, cl.theta, cl.rhat, cl.eta}};
}

ClosedLoopState closed_loop_rhs(const PlantParams& params, const ControllerGains& gains,
                                const CommGraph& graph, const ClosedLoopState& x) {
  check_shapes(params, gains, graph, x);
  const Index n = x.size();
  const Matrix lap = graph.laplacian();
  const Vector F = voltage_consensus_bracket(gains, lap, x);
  const Vector I = x.z + x.phi;
  const double dV = x.V_dc - gains.V_dc_star;

  const Vector Lz_dot = -gains.K_z.cwiseProduct(x.z) + I.cwiseProduct(x.rhat - params.R_tau) -
                        Vector::Constant(n, dV) - gains.W.asDiagonal() * (lap * x.theta) +
                        F.cwiseProduct(x.eta - params.L_tau);

  ClosedLoopState d;
  d.z = Lz_dot.cwiseQuotient(params.L_tau);
  d.V_dc = (I.sum() - params.I_ell - params.Y * x.V_dc) / params.C_dc;
  d.phi = F;
  d.theta = (lap * gains.W.asDiagonal() * I).cwiseQuotient(gains.T_theta);
  d.rhat = -I.cwiseProduct(x.z).cwiseQuotient(gains.T_rhat);
  d.eta = -F.cwiseProduct(x.z).cwiseQuotient(gains.T_eta);
  return d;
}

ClosedLoopState weighted_rate(const PlantParams& params, const ControllerGains& gains,
                              const ClosedLoopState& r) {
  return {params.L_tau.cwiseProduct(r.z),
          params.C_dc * r.V_dc,
          gains.T_phi.cwiseProduct(r.phi),
          gains.T_theta.cwiseProduct(r.theta),
          gains.T_rhat.cwiseProduct(r.rhat),
          gains.T_eta.cwiseProduct(r.eta)};
}

double inf_norm(const ClosedLoopState& x) {
  double m = std::abs(x.V_dc);
  for (const Vector* v : {&x.z, &x.phi, &x.theta, &x.rhat, &x.eta}) {
    if (v->size()) m = std::max(m, v->cwiseAbs().maxCoeff());
  }
  return m;
}

ClosedLoopState EquilibriumPoint::state() const {
  return {z_bar, V_bar, phi_bar, theta_bar, rhat_bar, eta_bar};
}

EquilibriumPoint compute_equilibrium(const PlantParams& params, const ControllerGains& gains,
                                     const Vector& theta_0, const std::optional<Vector>& eta_bar) {
  const Index n = params.size();
  require_n(gains.W, n, "W");
  require_n(gains.T_theta, n, "T_theta");
  require_n(theta_0, n, "theta_0");

  EquilibriumPoint eq;
  eq.alpha = (params.I_ell + params.Y * gains.V_dc_star) / gains.W.cwiseInverse().sum();
  eq.beta = gains.T_theta.dot(theta_0) / gains.T_theta.sum();
  eq.z_bar = Vector::Zero(n);
  eq.V_bar = gains.V_dc_star;
  eq.phi_bar = eq.alpha * gains.W.cwiseInverse();
  eq.theta_bar = Vector::Constant(n, eq.beta);
  eq.rhat_bar = params.R_tau;
  eq.eta_bar = eta_bar ? *eta_bar : params.L_tau;
  require_n(eq.eta_bar, n, "eta_bar");
  return eq;
}

double lyapunov_S(const PlantParams& params, const ControllerGains& gains, const ClosedLoopState& x,
                  const EquilibriumPoint& eq) {
  const Vector dphi = x.phi - eq.phi_bar;
  const Vector dtheta = x.theta - eq.theta_bar;
  const Vector drhat = x.rhat - eq.rhat_bar;
  const Vector deta = x.eta - params.L_tau;
  const double dV = x.V_dc - eq.V_bar;
  return 0.5 * (x.z.cwiseAbs2().dot(params.L_tau) + params.C_dc * dV * dV +
                dphi.cwiseAbs2().dot(gains.T_phi) + dtheta.cwiseAbs2().dot(gains.T_theta) +
                drhat.cwiseAbs2().dot(gains.T_rhat) + deta.cwiseAbs2().dot(gains.T_eta));
}

LyapunovRate lyapunov_S_dot(const PlantParams& params, const ControllerGains& gains,
                            const CommGraph& graph, const ClosedLoopState& x,
                            const EquilibriumPoint& eq) {
  const ClosedLoopState d = closed_loop_rhs(params, gains, graph, x);
  const double dV = x.V_dc - eq.V_bar;

  LyapunovRate rate;
  rate.analytic = -x.z.cwiseAbs2().dot(gains.K_z) - params.Y * dV * dV;
  rate.chain_rule = params.L_tau.cwiseProduct(x.z).dot(d.z) + params.C_dc * dV * d.V_dc +
                    gains.T_phi.cwiseProduct(x.phi - eq.phi_bar).dot(d.phi) +
                    gains.T_theta.cwiseProduct(x.theta - eq.theta_bar).dot(d.theta) +
                    gains.T_rhat.cwiseProduct(x.rhat - eq.rhat_bar).dot(d.rhat) +
                    gains.T_eta.cwiseProduct(x.eta - params.L_tau).dot(d.eta);
  return rate;
}

PortHamiltonianForm assemble_ph_form(const PlantParams& params, const ControllerGains& gains,
                                     const CommGraph& graph, const ClosedLoopState& x) {
  check_shapes(params, gains, graph, x);
  const Index n = x.size();
  const Index N = 5 * n + 1;
  // Block offsets in (z, V, phi, theta, rhat, eta).
  const Index oz = 0, oV = n, ophi = n + 1, otheta = 2 * n + 1;

  const Matrix lap = graph.laplacian();
  const Matrix WL = gains.W.asDiagonal() * lap;
  const Vector F = voltage_consensus_bracket(gains, lap, x);
  const Vector I = x.z + x.phi;

  PortHamiltonianForm ph;
  ph.J = Matrix::Zero(N, N);
  // Upper-left block couples (z, V, phi).
  ph.J.block(oz, oV, n, 1) = -Vector::Ones(n);
  ph.J.block(oV, oz, 1, n) = Vector::Ones(n).transpose();
  ph.J.block(oV, ophi, 1, n) = Vector::Ones(n).transpose();
  ph.J.block(ophi, oV, n, 1) = -Vector::Ones(n);
  // Upper-right block couples (z, V, phi) with (theta, rhat, eta).
  Matrix J12 = Matrix::Zero(2 * n + 1, 3 * n);
  J12.block(0, 0, n, n) = -WL;
  J12.block(0, n, n, n) = I.asDiagonal();
  J12.block(0, 2 * n, n, n) = F.asDiagonal();
  J12.block(n + 1, 0, n, n) = -WL;
  ph.J.block(0, otheta, 2 * n + 1, 3 * n) = J12;
  ph.J.block(otheta, 0, 3 * n, 2 * n + 1) = -J12.transpose();

  ph.R = Matrix::Zero(N, N);
  ph.R.diagonal().segment(oz, n) = gains.K_z;
  ph.R(oV, oV) = params.Y;

  Vector inertia(N);
  inertia << params.L_tau, params.C_dc, gains.T_phi, gains.T_theta, gains.T_rhat, gains.T_eta;
  ph.M = inertia.cwiseInverse().asDiagonal();

  const EquilibriumPoint ref = compute_equilibrium(params, gains, x.theta);
  ph.x.resize(N);
  ph.x << params.L_tau.cwiseProduct(x.z), params.C_dc * x.V_dc, gains.T_phi.cwiseProduct(x.phi),
      gains.T_theta.cwiseProduct(x.theta), gains.T_rhat.cwiseProduct(x.rhat),
      gains.T_eta.cwiseProduct(x.eta);
  ph.x_bar.resize(N);
  ph.x_bar << Vector::Zero(n), params.C_dc * ref.V_bar, gains.T_phi.cwiseProduct(ref.phi_bar),
      gains.T_theta.cwiseProduct(ref.theta_bar), gains.T_rhat.cwiseProduct(ref.rhat_bar),
      gains.T_eta.cwiseProduct(params.L_tau);
  // Differences are formed in natural coordinates to avoid cancellation in
  // the large T_eta-scaled entries.
  ph.grad_H.resize(N);
  ph.grad_H << x.z, x.V_dc - ref.V_bar, x.phi - ref.phi_bar, x.theta - ref.theta_bar,
      x.rhat - ref.rhat_bar, x.eta - params.L_tau;

  const ClosedLoopState d = closed_loop_rhs(params, gains, graph, x);
  ph.x_dot.resize(N);
  ph.x_dot << params.L_tau.cwiseProduct(d.z), params.C_dc * d.V_dc, gains.T_phi.cwiseProduct(d.phi),
      gains.T_theta.cwiseProduct(d.theta), gains.T_rhat.cwiseProduct(d.rhat),
      gains.T_eta.cwiseProduct(d.eta);
  return ph;
}

PhCheck ph_form_check(const PlantParams& params, const ControllerGains& gains,
                      const CommGraph& graph, const ClosedLoopState& x) {
  const PortHamiltonianForm ph = assemble_ph_form(params, gains, graph, x);
  const Vector structured = (ph.J - ph.R) * ph.grad_H;
  PhCheck check;
  check.residual = (ph.x_dot - structured).lpNorm<Eigen::Infinity>();
  check.scale = 1.0 + ph.x_dot.lpNorm<Eigen::Infinity>() + structured.lpNorm<Eigen::Infinity>();
  check.skew_residual = (ph.J + ph.J.transpose()).lpNorm<Eigen::Infinity>();
  check.hamiltonian_rate = -ph.grad_H.dot(ph.R * ph.grad_H);
  return check;
}

double check_invariant_set(const Trajectory& traj, const Vector& T_theta) {
  if (traj.samples.empty()) return 0.0;
  const double initial = T_theta.dot(traj.samples.front().ctrl.theta);
  double drift = 0.0;
  for (const auto& s : traj.samples) drift = std::max(drift, std::abs(T_theta.dot(s.ctrl.theta) - initial));
  return drift;
}

bool is_steady(const ClosedLoopState& rate, double tol) {
  const auto small = [tol](const Vector& v) { return v.size() == 0 || v.cwiseAbs().maxCoeff() < tol; };
  return small(rate.z) && std::abs(rate.V_dc) < tol && small(rate.phi) && small(rate.theta) &&
         small(rate.rhat) && small(rate.eta);
}

}  // namespace epds
