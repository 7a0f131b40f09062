#include "epds/simkernel.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace epds {

void IntegratorConfig::validate() const {
  if (!std::isfinite(step_s) || step_s <= 0.0) throw ConfigError("step_s must be positive");
  if (record_every < 1) throw ConfigError("record_every must be >= 1");
  if (!std::isfinite(t_end) || t_end < 0.0) throw ConfigError("t_end must be >= 0");
}

const char* to_string(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::C1: return "c1";
    case ControllerKind::C2: return "c2";
    case ControllerKind::C3: return "c3";
  }
  return "?";
}

ControllerKind controller_from_string(const std::string& name) {
  if (name == "c1" || name == "C1") return ControllerKind::C1;
  if (name == "c2" || name == "C2") return ControllerKind::C2;
  if (name == "c3" || name == "C3") return ControllerKind::C3;
  throw ConfigError("unknown controller '" + name + "' (expected c1, c2 or c3)");
}

double ControllerSetup::V_dc_star() const {
  switch (kind) {
    case ControllerKind::C1: return adaptive.V_dc_star;
    case ControllerKind::C2: return droop.V_dc_star;
    case ControllerKind::C3: return consensus.V_dc_star;
  }
  return adaptive.V_dc_star;
}

const Vector& ControllerSetup::weights() const {
  return kind == ControllerKind::C3 ? consensus.W : adaptive.W;
}

void ControllerSetup::validate(Index n) const {
  switch (kind) {
    case ControllerKind::C1: adaptive.validate(n); break;
    case ControllerKind::C2: droop.validate(n); adaptive.validate(n); break;
    case ControllerKind::C3: consensus.validate(n); break;
  }
}

ControllerSetup ControllerSetup::reference(const PlantParams& params, ControllerKind kind,
                                           double resistance_scale) {
  ControllerSetup setup;
  setup.kind = kind;
  setup.adaptive = ControllerGains::reference(params.size());
  setup.droop = DroopGains::from_weights(setup.adaptive.W, setup.adaptive.V_dc_star);
  setup.consensus = ConsensusGains::from_plant(params, resistance_scale, setup.adaptive.W,
                                               setup.adaptive.V_dc_star);
  return setup;
}

SimState SimState::initial(Index n, double V_dc_star) {
  return {PlantState{Vector::Zero(n), V_dc_star}, AdaptiveCtrlState::zeros(n)};
}

std::size_t delay_depth(double delay_s, double step_s) {
  if (delay_s <= 0.0) return 0;
  // Tolerate round-off when the delay is an exact multiple of the step.
  return static_cast<std::size_t>(std::ceil(delay_s / step_s - 1e-9));
}

DelayBuffer::DelayBuffer(std::size_t depth, double initial)
    : ring_(depth + 1, initial), head_(0), depth_(depth) {}

void DelayBuffer::push(double value) {
  head_ = head_ + 1 == ring_.size() ? 0 : head_ + 1;
  ring_[head_] = value;
}

double DelayBuffer::at(std::size_t lag) const {
  const std::size_t size = ring_.size();
  return ring_[(head_ + size - lag % size) % size];
}

DelayedSignals::DelayedSignals(const CommGraph& graph, double step_s, const Vector& I_tau,
                               const Vector& theta, double V_dc)
    : n_(graph.size()),
      lag_(static_cast<std::size_t>(graph.size() * graph.size()), 0),
      broadcast_lag_(delay_depth(graph.broadcast_delay(), step_s)),
      V_(broadcast_lag_, V_dc) {
  std::vector<std::size_t> depth(static_cast<std::size_t>(n_), 0);
  for (Index i = 0; i < n_; ++i) {
    for (Index j : graph.neighbors(i)) {
      const std::size_t lag = delay_depth(graph.link_delay(i, j), step_s);
      lag_[static_cast<std::size_t>(i * n_ + j)] = lag;
      depth[static_cast<std::size_t>(j)] = std::max(depth[static_cast<std::size_t>(j)], lag);
    }
  }
  for (Index j = 0; j < n_; ++j) {
    I_.emplace_back(depth[static_cast<std::size_t>(j)], I_tau[j]);
    theta_.emplace_back(depth[static_cast<std::size_t>(j)], theta[j]);
  }
}

void DelayedSignals::push(const Eigen::Ref<const Vector>& I_tau, const Eigen::Ref<const Vector>& theta,
                          double V_dc) {
  for (Index j = 0; j < n_; ++j) {
    I_[static_cast<std::size_t>(j)].push(I_tau[j]);
    theta_[static_cast<std::size_t>(j)].push(theta[j]);
  }
  V_.push(V_dc);
}

NeighborView delayed_view(const DelayedSignals& signals, const CommGraph& graph, Index i,
                          std::vector<NeighborSample>& scratch) {
  const auto& nbrs = graph.neighbors(i);
  scratch.resize(nbrs.size());
  for (std::size_t a = 0; a < nbrs.size(); ++a) {
    const Index j = nbrs[a];
    const std::size_t lag = signals.link_lag(i, j);
    scratch[a] = {j, signals.I_tau(j, lag), signals.theta(j, lag)};
  }
  return {scratch, signals.V_dc(signals.broadcast_lag())};
}

double stiffness_rate(const PlantParams& params, const ControllerSetup& controller) {
  const Index n = params.size();
  double rate = std::sqrt(params.L_tau.cwiseInverse().sum() / params.C_dc);
  rate = std::max(rate, params.Y / params.C_dc);
  for (Index i = 0; i < n; ++i) {
    double damping = params.R_tau[i];
    if (controller.kind == ControllerKind::C1) damping += controller.adaptive.K_z[i];
    if (controller.kind == ControllerKind::C2) damping += controller.droop.k_droop[i];
    rate = std::max(rate, damping / params.L_tau[i]);
  }
  return rate;
}

namespace {

class ClosedLoopSimulator {
 public:
  ClosedLoopSimulator(const PlantParams& params, const ControllerSetup& controller,
                      const CommGraph& graph, const DelayedSignals& signals)
      : params_(params),
        ctl_(controller),
        graph_(graph),
        signals_(signals),
        n_(params.size()),
        scratch_(static_cast<std::size_t>(params.size())),
        u_(Vector::Zero(params.size())),
        noise_I_(Vector::Zero(params.size())) {}

  Index I(Index i) const { return i; }
  Index V() const { return n_; }
  Index phi(Index i) const { return n_ + 1 + i; }
  Index theta(Index i) const { return 2 * n_ + 1 + i; }
  Index rhat(Index i) const { return 3 * n_ + 1 + i; }
  Index eta(Index i) const { return 4 * n_ + 1 + i; }

  void set_load(double I_ell, double Y) {
    params_.I_ell = I_ell;
    params_.Y = Y;
  }
  void set_noise(const Vector& noise_I, double noise_V) {
    noise_I_ = noise_I;
    noise_V_ = noise_V;
  }
  const Vector& last_u() const { return u_; }

  void rhs(const Vector& y, Vector& dy) {
    dy.setZero();
    const std::size_t blag = signals_.broadcast_lag();
    const double V_seen = blag == 0 ? y[V()] + noise_V_ : signals_.V_dc(blag);

    for (Index i = 0; i < n_; ++i) {
      const double I_own = y[I(i)] + noise_I_[i];
      auto& samples = scratch_[static_cast<std::size_t>(i)];
      const auto& nbrs = graph_.neighbors(i);
      samples.resize(nbrs.size());
      for (std::size_t a = 0; a < nbrs.size(); ++a) {
        const Index j = nbrs[a];
        const std::size_t lag = signals_.link_lag(i, j);
        if (lag == 0) {
          samples[a] = {j, y[I(j)] + noise_I_[j], y[theta(j)]};
        } else {
          samples[a] = {j, signals_.I_tau(j, lag), signals_.theta(j, lag)};
        }
      }
      const NeighborView view{samples, V_seen};

      switch (ctl_.kind) {
        case ControllerKind::C1: {
          const DguState s{y[phi(i)], y[theta(i)], y[rhat(i)], y[eta(i)]};
          const C1Output out = c1_evaluate(ctl_.adaptive, graph_, i, s, I_own, view);
          u_[i] = out.u;
          dy[phi(i)] = out.rate.phi;
          dy[theta(i)] = out.rate.theta;
          dy[rhat(i)] = out.rate.rhat;
          dy[eta(i)] = out.rate.eta;
          break;
        }
        case ControllerKind::C2:
          u_[i] = c2_droop(ctl_.droop, i, I_own);
          break;
        case ControllerKind::C3: {
          const C3Output out = c3_known_r_consensus(ctl_.consensus, graph_, i, y[theta(i)], I_own, view);
          u_[i] = out.u;
          dy[theta(i)] = out.theta_rate;
          break;
        }
      }
    }

    const auto n = static_cast<std::size_t>(n_);
    dy[V()] = plant_derivative_into(params_, {y.data(), n}, y[V()], {u_.data(), n}, {dy.data(), n});
  }

 private:
  PlantParams params_;
  const ControllerSetup& ctl_;
  const CommGraph& graph_;
  const DelayedSignals& signals_;
  Index n_;
  std::vector<std::vector<NeighborSample>> scratch_;
  Vector u_;
  Vector noise_I_;
  double noise_V_ = 0.0;
};

Vector pack(const SimState& s) {
  const Index n = s.plant.I_tau.size();
  Vector y(5 * n + 1);
  y << s.plant.I_tau, s.plant.V_dc, s.ctrl.phi, s.ctrl.theta, s.ctrl.rhat, s.ctrl.eta;
  return y;
}

TrajectorySample unpack(const Vector& y, Index n, double t, std::size_t segment, const Vector& u) {
  TrajectorySample s;
  s.t = t;
  s.segment = segment;
  s.plant.I_tau = y.segment(0, n);
  s.plant.V_dc = y[n];
  s.ctrl.phi = y.segment(n + 1, n);
  s.ctrl.theta = y.segment(2 * n + 1, n);
  s.ctrl.rhat = y.segment(3 * n + 1, n);
  s.ctrl.eta = y.segment(4 * n + 1, n);
  s.u = u;
  return s;
}

}  // namespace

Trajectory integrate(const PlantParams& params, const ControllerSetup& controller,
                     const CommGraph& graph, const Scenario& scenario, const IntegratorConfig& cfg,
                     const SimState& x0, const NoiseConfig& noise) {
  params.validate();
  const Index n = params.size();
  controller.validate(n);
  graph.validate(n);
  scenario.validate();
  cfg.validate();
  if (x0.plant.I_tau.size() != n || x0.ctrl.phi.size() != n || x0.ctrl.theta.size() != n ||
      x0.ctrl.rhat.size() != n || x0.ctrl.eta.size() != n) {
    throw ConfigError("initial state does not match the plant size");
  }

  Trajectory traj;
  if (controller.kind == ControllerKind::C1) {
    const GainReport report = verify_gains(controller.adaptive, params);
    if (!report.pass) traj.warnings.emplace_back("T_phi violates the inductance-spread condition");
  }
  const double h = cfg.step_s;
  if (h * stiffness_rate(params, controller) > 0.5) {
    std::ostringstream msg;
    msg << "step " << h << " s is large relative to the fastest network rate "
        << stiffness_rate(params, controller) << " 1/s";
    traj.warnings.push_back(msg.str());
  }

  const double t_end = cfg.t_end > 0.0 ? cfg.t_end : scenario.total_duration();
  const long steps = std::lround(t_end / h);
  const double Y = scenario.admittance(params);

  Vector y = pack(x0);
  const Index N = y.size();
  Vector k1(N), k2(N), k3(N), k4(N), tmp(N);

  DelayedSignals signals(graph, h, x0.plant.I_tau, x0.ctrl.theta, x0.plant.V_dc);
  ClosedLoopSimulator sim(params, controller, graph, signals);

  std::mt19937_64 rng(noise.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector noise_I = Vector::Zero(n);
  Vector measured = Vector::Zero(n);
  double noise_V = 0.0;

  const EtaBand band = eta_band(controller.adaptive, params);
  std::vector<bool> eta_warned(static_cast<std::size_t>(n), false);

  traj.samples.reserve(static_cast<std::size_t>(steps / cfg.record_every + 1));
  for (long k = 0;; ++k) {
    const double t = static_cast<double>(k) * h;
    const std::size_t segment = scenario.segment_at(t);
    sim.set_load(scenario.load_current(segment), Y);

    if (noise.enabled()) {
      for (Index i = 0; i < n; ++i) noise_I[i] = noise.sigma_I_A * gauss(rng);
      noise_V = noise.sigma_V_V * gauss(rng);
      sim.set_noise(noise_I, noise_V);
    }
    if (k > 0) {
      if (noise.enabled()) {
        measured = y.head(n) + noise_I;
        signals.push(measured, y.segment(2 * n + 1, n), y[n] + noise_V);
      } else {
        signals.push(y.head(n), y.segment(2 * n + 1, n), y[n]);
      }
    }

    if (k % cfg.record_every == 0 || k == steps) {
      sim.rhs(y, k1);
      traj.samples.push_back(unpack(y, n, t, segment, sim.last_u()));
      if (controller.kind == ControllerKind::C1) {
        for (Index i = 0; i < n; ++i) {
          const double eta = y[4 * n + 1 + i];
          if (!eta_warned[static_cast<std::size_t>(i)] && (eta < band.lower[i] || eta > band.upper[i])) {
            eta_warned[static_cast<std::size_t>(i)] = true;
            std::ostringstream msg;
            msg << "eta[" << i + 1 << "] = " << eta << " left [" << band.lower[i] << ", "
                << band.upper[i] << "] at t = " << t << " s";
            traj.warnings.push_back(msg.str());
          }
        }
      }
    }
    if (k == steps) break;

    if (cfg.method == IntegrationMethod::Euler) {
      sim.rhs(y, k1);
      y += h * k1;
    } else {
      sim.rhs(y, k1);
      tmp = y + (0.5 * h) * k1;
      sim.rhs(tmp, k2);
      tmp = y + (0.5 * h) * k2;
      sim.rhs(tmp, k3);
      tmp = y + h * k3;
      sim.rhs(tmp, k4);
      y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }

    if (!y.allFinite()) {
      std::ostringstream msg;
      msg << "non-finite state at step " << k + 1 << " (t = " << static_cast<double>(k + 1) * h << " s)";
      throw NumericalAbort(k + 1, static_cast<double>(k + 1) * h, msg.str());
    }
  }
  return traj;
}

}  // namespace epds
