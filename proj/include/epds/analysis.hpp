#pragma once

#include <optional>

#include "epds/controllers.hpp"
#include "epds/graph.hpp"
#include "epds/plant.hpp"
#include "epds/scenario.hpp"
#include "epds/types.hpp"

namespace epds {

/// Closed-loop coordinates with z = I_tau - phi replacing the line currents.
/// The same struct carries time derivatives.
struct ClosedLoopState {
  Vector z;  // A
  double V_dc = 0.0;
  Vector phi;
  Vector theta;
  Vector rhat;
  Vector eta;

  Index size() const { return z.size(); }
};

ClosedLoopState to_closed_loop(const PlantState& plant, const AdaptiveCtrlState& ctrl);
std::pair<PlantState, AdaptiveCtrlState> from_closed_loop(const ClosedLoopState& cl);

/// Closed-loop vector field in (z, V, phi, theta, rhat, eta), assembled in
/// matrix form from the graph Laplacian and the true line parameters.
ClosedLoopState closed_loop_rhs(const PlantParams& params, const ControllerGains& gains,
                                const CommGraph& graph, const ClosedLoopState& x);

/// Rates multiplied by their masses (L z', C V', T_phi phi', ...), i.e.
/// the closed loop in the form whose right-hand sides are currents and
/// voltages. Residuals are compared in these units.
ClosedLoopState weighted_rate(const PlantParams& params, const ControllerGains& gains,
                              const ClosedLoopState& rate);
double inf_norm(const ClosedLoopState& x);

/// A point of the equilibrium family: z = 0, V = V*, phi = alpha W^-1 1,
/// theta = beta 1, rhat = R_tau 1, eta free.
struct EquilibriumPoint {
  Vector z_bar;
  double V_bar = 0.0;
  Vector phi_bar;
  Vector theta_bar;
  Vector rhat_bar;
  Vector eta_bar;
  double alpha = 0.0;
  double beta = 0.0;

  /// Equilibrium line currents (equal to phi_bar since z_bar = 0).
  const Vector& I_bar() const { return phi_bar; }
  ClosedLoopState state() const;
};

/// alpha = (I_ell + Y V*) / (1^T W^-1 1), beta = 1^T T_theta theta_0 / 1^T T_theta 1.
/// eta_bar defaults to the line inductances.
EquilibriumPoint compute_equilibrium(const PlantParams& params, const ControllerGains& gains,
                                     const Vector& theta_0,
                                     const std::optional<Vector>& eta_bar = std::nullopt);

/// Weighted quadratic storage around the equilibrium; the eta term is
/// measured from the true inductances regardless of eq.eta_bar.
double lyapunov_S(const PlantParams& params, const ControllerGains& gains, const ClosedLoopState& x,
                  const EquilibriumPoint& eq);

struct LyapunovRate {
  double analytic = 0.0;    // -z^T K_z z - Y (V - V_bar)^2
  double chain_rule = 0.0;  // grad S . closed_loop_rhs
};

LyapunovRate lyapunov_S_dot(const PlantParams& params, const ControllerGains& gains,
                            const CommGraph& graph, const ClosedLoopState& x,
                            const EquilibriumPoint& eq);

/// Port-Hamiltonian data of the closed loop at one state, in the energy
/// coordinates x = (L z, C V, T_phi phi, T_theta theta, T_rhat rhat, T_eta eta).
struct PortHamiltonianForm {
  Matrix J;       // skew-symmetric interconnection
  Matrix R;       // diag(K_z, Y, 0)
  Matrix M;       // Hessian of H_d
  Vector x;
  Vector x_bar;   // reference with theta_bar = beta 1 and eta_bar = l_tau
  Vector grad_H;  // M (x - x_bar)
  Vector x_dot;   // closed-loop vector field in energy coordinates
};

PortHamiltonianForm assemble_ph_form(const PlantParams& params, const ControllerGains& gains,
                                     const CommGraph& graph, const ClosedLoopState& x);

struct PhCheck {
  double residual = 0.0;       // ||x_dot - (J - R) grad_H||_inf
  double scale = 0.0;          // 1 + ||x_dot||_inf + ||(J - R) grad_H||_inf
  double skew_residual = 0.0;  // ||J + J^T||_inf
  double hamiltonian_rate = 0.0;  // -grad_H^T R grad_H
};

PhCheck ph_form_check(const PlantParams& params, const ControllerGains& gains,
                      const CommGraph& graph, const ClosedLoopState& x);

/// max_t |1^T T_theta theta(t) - 1^T T_theta theta(0)|.
double check_invariant_set(const Trajectory& traj, const Vector& T_theta);

/// True when every closed-loop derivative is below tol (SI units).
bool is_steady(const ClosedLoopState& rate, double tol = 1e-6);

}  // namespace epds
