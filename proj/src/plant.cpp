#include "epds/plant.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace epds {

namespace {

void require_size(const Vector& v, Index n, const char* name) {
  if (v.size() != n) {
    std::ostringstream msg;
    msg << name << " has " << v.size() << " entries, expected " << n;
    throw ConfigError(msg.str());
  }
}

void require_positive(const Vector& v, const char* name) {
  for (Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i]) || v[i] <= 0.0) {
      std::ostringstream msg;
      msg << name << "[" << i + 1 << "] must be positive and finite, got " << v[i];
      throw ConfigError(msg.str());
    }
  }
}

}  // namespace

void PlantParams::validate() const {
  const Index n = size();
  if (n < 1) throw ConfigError("plant needs at least one line");
  require_size(R_tau, n, "R_tau");
  require_size(L_min, n, "L_min");
  require_size(L_max, n, "L_max");
  require_positive(L_tau, "L_tau");
  require_positive(R_tau, "R_tau");
  for (Index i = 0; i < n; ++i) {
    if (!(L_min[i] < L_tau[i] && L_tau[i] < L_max[i])) {
      std::ostringstream msg;
      msg << "L_tau[" << i + 1 << "] = " << L_tau[i] << " H is not inside the open interval ("
          << L_min[i] << ", " << L_max[i] << ")";
      throw ConfigError(msg.str());
    }
  }
  if (!std::isfinite(C_dc) || C_dc <= 0.0) throw ConfigError("C_dc must be positive");
  if (!std::isfinite(I_ell) || I_ell < 0.0) throw ConfigError("I_ell must be non-negative");
  if (!std::isfinite(Y) || Y < 0.0) throw ConfigError("Y must be non-negative");
}

std::vector<std::string> PlantParams::assumption_flags() const {
  std::vector<std::string> flags;
  if (Y == 0.0) flags.emplace_back("Y = 0: no voltage damping, Lyapunov descent only in z");
  if (I_ell == 0.0) flags.emplace_back("I_ell = 0: equilibrium currents are zero, r_hat is not identifiable");
  return flags;
}

PlantParams PlantParams::reference() {
  PlantParams p;
  p.L_tau = (Vector(3) << 900e-6, 550e-6, 350e-6).finished();
  p.R_tau = (Vector(3) << 1.33, 0.78, 0.71).finished();
  p.L_min = Vector::Constant(3, 300e-6);
  p.L_max = Vector::Constant(3, 1e-3);
  p.C_dc = 0.318e-6;
  p.I_ell = 6.7;
  p.Y = 1e-3;
  return p;
}

double plant_derivative_into(const PlantParams& params, std::span<const double> I_tau,
                             double V_dc, std::span<const double> u, std::span<double> dI_tau) {
  double injected = 0.0;
  for (std::size_t i = 0; i < I_tau.size(); ++i) {
    const auto k = static_cast<Index>(i);
    dI_tau[i] = (-V_dc - params.R_tau[k] * I_tau[i] + u[i]) / params.L_tau[k];
    injected += I_tau[i];
  }
  return (injected - params.I_ell - params.Y * V_dc) / params.C_dc;
}

PlantStateDerivative plant_derivative(const PlantParams& params, const PlantState& state,
                                      const Vector& u) {
  const Index n = params.size();
  require_size(state.I_tau, n, "I_tau");
  require_size(u, n, "u");
  if (!state.I_tau.allFinite() || !std::isfinite(state.V_dc)) {
    throw std::domain_error("plant state is not finite");
  }
  if (!u.allFinite()) throw std::domain_error("control input is not finite");

  PlantStateDerivative d;
  d.dI_tau.resize(n);
  d.dV_dc = plant_derivative_into(params, {state.I_tau.data(), static_cast<std::size_t>(n)},
                                  state.V_dc, {u.data(), static_cast<std::size_t>(n)},
                                  {d.dI_tau.data(), static_cast<std::size_t>(n)});
  return d;
}

}  // namespace epds
