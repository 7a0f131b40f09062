#include <doctest.h>

#include <random>

#include "epds/analysis.hpp"
#include "support.hpp"

using namespace epds;

namespace {

ClosedLoopState random_state(std::mt19937_64& rng, const PlantParams& p, const ControllerGains& g) {
  const Index n = p.size();
  ClosedLoopState x;
  x.z = oracle::uniform(rng, n, -3.0, 3.0);
  x.V_dc = g.V_dc_star + oracle::uniform(rng, 1, -10.0, 10.0)[0];
  x.phi = oracle::uniform(rng, n, 0.0, 10.0);
  x.theta = oracle::uniform(rng, n, -2.0, 2.0);
  x.rhat = oracle::uniform(rng, n, 0.0, 2.0);
  x.eta = p.L_tau + oracle::uniform(rng, n, -2e-4, 2e-4);
  return x;
}

oracle::Vec stacked_y(const ClosedLoopState& x) {
  const Index n = x.size();
  oracle::Vec y(5 * n + 1);
  y << x.z + x.phi, x.V_dc, x.phi, x.theta, x.rhat, x.eta;
  return y;
}

struct Case {
  PlantParams p;
  ControllerGains g;
  CommGraph graph;
};

Case random_case(std::mt19937_64& rng, Index n) {
  return {testing::random_plant(rng, n), testing::random_gains(rng, n), testing::random_graph(rng, n)};
}

oracle::Mat lap_of(const CommGraph& graph) {
  return oracle::laplacian(static_cast<int>(graph.size()), testing::edge_list(graph));
}

}  // namespace

TEST_CASE("change of variables") {
  std::mt19937_64 rng(1);
  const PlantParams p = PlantParams::reference();
  const ControllerGains g = ControllerGains::reference(3);
  const Vector I = oracle::uniform(rng, 3, 0, 10);
  AdaptiveCtrlState c{I, oracle::uniform(rng, 3, -1, 1), oracle::uniform(rng, 3, 0, 2), oracle::uniform(rng, 3, 0, 1e-3)};
  CHECK(to_closed_loop({I, 200.0}, c).z.isZero(0.0));

  for (int trial = 0; trial < 20; ++trial) {
    const ClosedLoopState x = random_state(rng, p, g);
    const auto [plant, ctrl] = from_closed_loop(x);
    const ClosedLoopState back = to_closed_loop(plant, ctrl);
    CHECK((back.z - x.z).cwiseAbs().maxCoeff() <= 1e-15 * (1.0 + x.phi.cwiseAbs().maxCoeff()));
    CHECK(back.V_dc == x.V_dc);
    CHECK(back.phi == x.phi);
    CHECK(back.theta == x.theta);
    CHECK(back.rhat == x.rhat);
    CHECK(back.eta == x.eta);
  }
  CHECK_THROWS_AS(to_closed_loop({Vector::Zero(2), 0.0}, AdaptiveCtrlState::zeros(3)), ConfigError);
}

TEST_CASE("closed-loop field equals plant plus controller in line-current coordinates") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const Case c = random_case(rng, 2 + trial % 4);
    const ClosedLoopState x = random_state(rng, c.p, c.g);
    const ClosedLoopState d = closed_loop_rhs(c.p, c.g, c.graph, x);
    const oracle::Vec o = oracle::closed_loop(testing::to_net(c.p), testing::to_gains(c.g), lap_of(c.graph), stacked_y(x));
    const Index n = x.size();
    // z' = I' - phi'
    const oracle::Vec dz = o.head(n) - o.segment(n + 1, n);
    const auto close = [](const Vector& a, const oracle::Vec& b) {
      return (a - b).cwiseAbs().maxCoeff() <= 1e-10 * (1.0 + b.cwiseAbs().maxCoeff());
    };
    CHECK(close(d.z, dz));
    CHECK(std::abs(d.V_dc - o[n]) <= 1e-10 * (1.0 + std::abs(o[n])));
    CHECK(close(d.phi, o.segment(n + 1, n)));
    CHECK(close(d.theta, o.segment(2 * n + 1, n)));
    CHECK(close(d.rhat, o.segment(3 * n + 1, n)));
    CHECK(close(d.eta, o.segment(4 * n + 1, n)));
  }
}

TEST_CASE("equilibrium zeroes the closed loop for any eta") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const Case c = random_case(rng, 3);
    const Vector theta0 = oracle::uniform(rng, 3, -1, 1);
    const Vector eta_bar = oracle::uniform(rng, 3, -1.0, 1.0);
    const EquilibriumPoint eq = compute_equilibrium(c.p, c.g, theta0, eta_bar);
    CHECK(eq.eta_bar == eta_bar);
    const ClosedLoopState xb = eq.state();
    const double r = inf_norm(weighted_rate(c.p, c.g, closed_loop_rhs(c.p, c.g, c.graph, xb)));
    CHECK(r <= 1e-10 * (1.0 + inf_norm(xb)));
  }
}

TEST_CASE("symmetric sharing") {
  PlantParams p = PlantParams::reference();
  p.I_ell = 6.0;
  p.Y = 0.0;
  const EquilibriumPoint eq = compute_equilibrium(p, ControllerGains::reference(3), Vector::Zero(3));
  CHECK(eq.alpha == doctest::Approx(2.0));
  CHECK(eq.beta == 0.0);
  CHECK(eq.I_bar() == Vector::Constant(3, 2.0));
  CHECK(eq.z_bar.isZero(0.0));
  CHECK(eq.V_bar == 200.0);
  CHECK(eq.rhat_bar == p.R_tau);
  CHECK(eq.eta_bar == p.L_tau);
}

TEST_CASE("beta is the weighted mean of the initial consensus state") {
  ControllerGains g = ControllerGains::reference(3);
  g.T_theta = Vector{{1.0, 2.0, 3.0}};
  const EquilibriumPoint eq = compute_equilibrium(PlantParams::reference(), g, Vector{{3.0, 0.0, 1.0}});
  CHECK(eq.beta == doctest::Approx(1.0));
  CHECK(eq.theta_bar == Vector::Constant(3, eq.beta));
}

TEST_CASE("takeoff equilibrium agrees with a root-find of the closed loop") {
  PlantParams p = PlantParams::reference();
  p.I_ell = 2.98 * 6.7;
  const ControllerGains g = ControllerGains::reference(3);
  CHECK(p.I_ell == doctest::Approx(19.966));
  const Vector theta0{{0.3, -0.1, 0.4}};
  const EquilibriumPoint eq = compute_equilibrium(p, g, theta0);
  CHECK(eq.alpha == doctest::Approx((19.966 + 1e-3 * 200.0) / 3.0).epsilon(1e-14));

  // start away from the answer: equal split of a wrong load, sagging bus
  oracle::Vec guess(13);
  guess << 5.0, 5.0, 5.0, 190.0, 5.0, 5.0, 5.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0;
  const oracle::Vec y = oracle::find_equilibrium(testing::to_net(p), testing::to_gains(g),
                                                 oracle::laplacian(3, {{0, 1}, {1, 2}}), p.L_tau,
                                                 g.T_theta.dot(theta0), guess);
  for (Index i = 0; i < 3; ++i) {
    CHECK(y[i] == doctest::Approx(eq.I_bar()[i]).epsilon(1e-9));
    CHECK(y[4 + i] == doctest::Approx(eq.phi_bar[i]).epsilon(1e-9));
    CHECK(y[7 + i] == doctest::Approx(eq.beta).epsilon(1e-9));
    CHECK(y[10 + i] == doctest::Approx(p.R_tau[i]).epsilon(1e-9));
  }
  CHECK(y[3] == doctest::Approx(200.0).epsilon(1e-12));
}

TEST_CASE("unequal weights share in inverse proportion") {
  std::mt19937_64 rng(9);
  const Case c = random_case(rng, 4);
  const EquilibriumPoint eq = compute_equilibrium(c.p, c.g, Vector::Zero(4));
  const Vector weighted = c.g.W.cwiseProduct(eq.I_bar());
  CHECK(weighted.maxCoeff() - weighted.minCoeff() <= 1e-12 * weighted.maxCoeff());
  CHECK(eq.I_bar().sum() == doctest::Approx(c.p.I_ell + c.p.Y * c.g.V_dc_star));
}

TEST_CASE("storage function") {
  std::mt19937_64 rng(6);
  const PlantParams p = PlantParams::reference();
  const ControllerGains g = ControllerGains::reference(3);
  const EquilibriumPoint eq = compute_equilibrium(p, g, Vector::Zero(3));
  CHECK(lyapunov_S(p, g, eq.state(), eq) == 0.0);

  ClosedLoopState x = eq.state();
  x.V_dc += 1.0;
  CHECK(lyapunov_S(p, g, x, eq) == doctest::Approx(0.5 * p.C_dc));

  for (int trial = 0; trial < 100; ++trial) {
    const Case c = random_case(rng, 3);
    const EquilibriumPoint e = compute_equilibrium(c.p, c.g, oracle::uniform(rng, 3, -1, 1));
    const ClosedLoopState s = random_state(rng, c.p, c.g);
    const double o = oracle::lyapunov(testing::to_net(c.p), testing::to_gains(c.g), s.z, s.V_dc, s.phi, s.theta, s.rhat,
                                      s.eta, e.V_bar, e.phi_bar, e.beta);
    CHECK(lyapunov_S(c.p, c.g, s, e) == doctest::Approx(o).epsilon(1e-12));
    CHECK(o >= 0.0);
  }
}

TEST_CASE("storage rate: closed form against chain rule") {
  std::mt19937_64 rng(7);
  const PlantParams p = PlantParams::reference();
  const ControllerGains g = ControllerGains::reference(3);
  const CommGraph graph = CommGraph::path(3);
  const EquilibriumPoint eq = compute_equilibrium(p, g, Vector::Zero(3));
  ClosedLoopState x = eq.state();
  x.theta = oracle::uniform(rng, 3, -1, 1);
  x.theta.array() -= x.theta.mean();
  x.rhat += oracle::uniform(rng, 3, -0.1, 0.1);
  CHECK(lyapunov_S_dot(p, g, graph, x, eq).analytic == 0.0);

  for (int trial = 0; trial < 300; ++trial) {
    const Case c = random_case(rng, 2 + trial % 4);
    const ClosedLoopState s = random_state(rng, c.p, c.g);
    const EquilibriumPoint e = compute_equilibrium(c.p, c.g, s.theta);
    const LyapunovRate r = lyapunov_S_dot(c.p, c.g, c.graph, s, e);
    CHECK(r.analytic <= 0.0);
    CHECK(std::abs(r.analytic - r.chain_rule) <= 1e-9 * std::max(std::abs(r.analytic), std::abs(r.chain_rule)));
  }
}

TEST_CASE("port-Hamiltonian form") {
  std::mt19937_64 rng(8);
  const PlantParams p = PlantParams::reference();
  const ControllerGains g = ControllerGains::reference(3);
  const CommGraph graph = CommGraph::path(3);

  const EquilibriumPoint eq = compute_equilibrium(p, g, Vector::Zero(3));
  const PhCheck at_eq = ph_form_check(p, g, graph, eq.state());
  CHECK(at_eq.residual <= 1e-12 * at_eq.scale);

  for (int trial = 0; trial < 100; ++trial) {
    const ClosedLoopState x = random_state(rng, p, g);
    const PhCheck c = ph_form_check(p, g, graph, x);
    CHECK(c.residual <= 1e-9 * c.scale);
    CHECK(c.skew_residual == 0.0);
    CHECK(c.hamiltonian_rate <= 0.0);
  }

  for (int trial = 0; trial < 50; ++trial) {
    const Case c = random_case(rng, 2 + trial % 4);
    const ClosedLoopState x = random_state(rng, c.p, c.g);
    const PortHamiltonianForm ph = assemble_ph_form(c.p, c.g, c.graph, x);
    CHECK((ph.J + ph.J.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(ph.R.diagonal().minCoeff() >= 0.0);
    const PhCheck k = ph_form_check(c.p, c.g, c.graph, x);
    CHECK(k.residual <= 1e-9 * k.scale);
  }
}

TEST_CASE("invariant drift and steadiness") {
  Trajectory t;
  for (int k = 0; k < 5; ++k) {
    TrajectorySample s;
    s.t = k;
    s.plant = {Vector::Ones(3), 200.0};
    s.ctrl = {Vector::Ones(3), Vector{{1.0, -2.0, 0.5}}, Vector::Ones(3), Vector::Ones(3)};
    s.u = Vector::Constant(3, 200.0);
    t.samples.push_back(s);
  }
  CHECK(check_invariant_set(t, Vector::Ones(3)) == 0.0);
  t.samples[3].ctrl.theta[0] += 0.25;
  CHECK(check_invariant_set(t, Vector{{2.0, 1.0, 1.0}}) == doctest::Approx(0.5));

  ClosedLoopState rate{Vector::Zero(3), 0.0, Vector::Zero(3), Vector::Zero(3), Vector::Zero(3), Vector::Zero(3)};
  CHECK(is_steady(rate));
  rate.V_dc = 2e-6;
  CHECK_FALSE(is_steady(rate));
}
