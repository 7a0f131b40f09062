#pragma once

#include <cstdint>
#include <vector>

#include "epds/controllers.hpp"
#include "epds/graph.hpp"
#include "epds/plant.hpp"
#include "epds/scenario.hpp"
#include "epds/types.hpp"

namespace epds {

enum class IntegrationMethod { RK4, Euler };

struct IntegratorConfig {
  IntegrationMethod method = IntegrationMethod::RK4;
  double step_s = 1e-7;
  long record_every = 1;
  double t_end = 0.0;  // 0 runs the whole scenario

  void validate() const;
};

enum class ControllerKind { C1, C2, C3 };

const char* to_string(ControllerKind kind);
ControllerKind controller_from_string(const std::string& name);

/// Gains for all three controllers; only the one selected by kind is used.
struct ControllerSetup {
  ControllerKind kind = ControllerKind::C1;
  ControllerGains adaptive;
  DroopGains droop;
  ConsensusGains consensus;

  double V_dc_star() const;
  const Vector& weights() const;
  void validate(Index n) const;

  /// Reference gains; droop k = 0.5/w ohm; consensus baseline with
  /// resistances known to within resistance_scale.
  static ControllerSetup reference(const PlantParams& params, ControllerKind kind,
                                   double resistance_scale = 0.9);
};

struct SimState {
  PlantState plant;
  AdaptiveCtrlState ctrl;

  /// I_tau = 0, V_dc = V*, all controller states zero.
  static SimState initial(Index n, double V_dc_star);
};

/// Optional Gaussian measurement noise, sampled once per step.
struct NoiseConfig {
  double sigma_I_A = 0.0;
  double sigma_V_V = 0.0;
  std::uint64_t seed = 0;

  bool enabled() const { return sigma_I_A > 0.0 || sigma_V_V > 0.0; }
};

/// Number of steps a sample is held back: ceil(delay / step).
std::size_t delay_depth(double delay_s, double step_s);

/// Ring buffer of one signal at integration-step resolution.
class DelayBuffer {
 public:
  explicit DelayBuffer(std::size_t depth = 0, double initial = 0.0);

  void push(double value);
  /// Sample pushed lag pushes ago (lag 0 is the newest); lag <= depth.
  double at(std::size_t lag) const;
  double read() const { return at(depth_); }
  std::size_t depth() const { return depth_; }

 private:
  std::vector<double> ring_;
  std::size_t head_ = 0;
  std::size_t depth_ = 0;
};

/// Histories of the exchanged signals (I_j, theta_j, broadcast V_dc) and
/// the per-link lags derived from the graph delays.
class DelayedSignals {
 public:
  DelayedSignals(const CommGraph& graph, double step_s, const Vector& I_tau, const Vector& theta,
                 double V_dc);

  void push(const Eigen::Ref<const Vector>& I_tau, const Eigen::Ref<const Vector>& theta, double V_dc);
  std::size_t link_lag(Index i, Index j) const {
    return lag_[static_cast<std::size_t>(i * n_ + j)];
  }
  std::size_t broadcast_lag() const { return broadcast_lag_; }
  double I_tau(Index j, std::size_t lag) const { return I_[static_cast<std::size_t>(j)].at(lag); }
  double theta(Index j, std::size_t lag) const { return theta_[static_cast<std::size_t>(j)].at(lag); }
  double V_dc(std::size_t lag) const { return V_.at(lag); }

 private:
  Index n_;
  std::vector<std::size_t> lag_;
  std::size_t broadcast_lag_ = 0;
  std::vector<DelayBuffer> I_;
  std::vector<DelayBuffer> theta_;
  DelayBuffer V_;
};

/// Neighbor view of node i built purely from the delayed histories
/// (zero-order hold, sample aged by the link delay). scratch is reused.
NeighborView delayed_view(const DelayedSignals& signals, const CommGraph& graph, Index i,
                          std::vector<NeighborSample>& scratch);

/// Integrates plant + controller as one ODE. Deterministic: identical
/// inputs give bit-identical trajectories. Throws NumericalAbort on a
/// non-finite state and ConfigError on invalid inputs.
Trajectory integrate(const PlantParams& params, const ControllerSetup& controller,
                     const CommGraph& graph, const Scenario& scenario, const IntegratorConfig& cfg,
                     const SimState& x0, const NoiseConfig& noise = {});

/// Largest characteristic rate (1/s) of the network, used for the step warning.
double stiffness_rate(const PlantParams& params, const ControllerSetup& controller);

}  // namespace epds
