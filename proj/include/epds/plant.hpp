#pragma once

#include <span>
#include <string>
#include <vector>

#include "epds/types.hpp"

namespace epds {

/// Electrical network: n_s controllable voltage sources feeding one
/// capacitive load bus through RL lines, loaded by a ZI load
/// (constant current I_ell in parallel with admittance Y). SI units.
struct PlantParams {
  Vector L_tau;  // H
  Vector R_tau;  // ohm
  Vector L_min;  // H, known lower bound per line (exclusive)
  Vector L_max;  // H, known upper bound per line (exclusive)
  double C_dc = 0.0;   // F
  double I_ell = 0.0;  // A
  double Y = 1e-3;     // S

  Index size() const { return L_tau.size(); }

  /// Throws ConfigError on wrong shapes, non-positive L/R/C, negative
  /// load, or an inductance outside its declared open interval.
  void validate() const;

  /// Conditions that are legal for the model but weaken the stability
  /// analysis (zero admittance, zero constant-current load).
  std::vector<std::string> assumption_flags() const;

  /// Three-line aircraft network (900/550/350 uH, 1.33/0.78/0.71 ohm, 0.318 uF)
  /// with the default load of 1 pu (6.7 A), Y = 1 mS and
  /// inductance bounds (300 uH, 1 mH) on every line.
  static PlantParams reference();
};

struct PlantState {
  Vector I_tau;  // A
  double V_dc = 0.0;  // V
};

struct PlantStateDerivative {
  Vector dI_tau;  // A/s
  double dV_dc = 0.0;  // V/s
};

/// dI/dt = L^-1 (-1 V_dc - R I + u),  dV/dt = C^-1 (1^T I - I_ell - Y V_dc).
/// Throws std::domain_error on non-finite state or input.
PlantStateDerivative plant_derivative(const PlantParams& params, const PlantState& state,
                                      const Vector& u);

/// Allocation-free form used by the integrator; returns dV/dt. No checks.
double plant_derivative_into(const PlantParams& params, std::span<const double> I_tau,
                             double V_dc, std::span<const double> u, std::span<double> dI_tau);

}  // namespace epds
