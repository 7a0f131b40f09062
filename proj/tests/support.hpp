#pragma once

#include <random>

#include "epds/controllers.hpp"
#include "epds/graph.hpp"
#include "epds/plant.hpp"
#include "oracles.hpp"

namespace testing {

inline oracle::Net to_net(const epds::PlantParams& p) {
  return {oracle::to_std(p.L_tau), oracle::to_std(p.R_tau), p.C_dc, p.I_ell, p.Y};
}

inline oracle::Gains to_gains(const epds::ControllerGains& g) {
  return {g.T_phi, g.T_theta, g.T_rhat, g.T_eta, g.K_z, g.W, g.V_dc_star};
}

inline std::vector<std::pair<int, int>> edge_list(const epds::CommGraph& g) {
  std::vector<std::pair<int, int>> out;
  for (auto [a, b] : g.edges()) out.emplace_back(static_cast<int>(a), static_cast<int>(b));
  return out;
}

// Random network with inductances inside their bounds.
inline epds::PlantParams random_plant(std::mt19937_64& rng, epds::Index n) {
  epds::PlantParams p;
  p.L_tau = oracle::uniform(rng, n, 2e-4, 2e-3);
  p.R_tau = oracle::uniform(rng, n, 0.1, 2.0);
  p.L_min = 0.5 * p.L_tau;
  p.L_max = 1.5 * p.L_tau;
  std::uniform_real_distribution<double> d(0.0, 1.0);
  p.C_dc = 1e-7 + 1e-5 * d(rng);
  p.I_ell = 1.0 + 20.0 * d(rng);
  p.Y = 1e-3 + 1e-2 * d(rng);
  return p;
}

inline epds::ControllerGains random_gains(std::mt19937_64& rng, epds::Index n) {
  epds::ControllerGains g;
  g.T_phi = oracle::uniform(rng, n, 0.5, 2.0);
  g.T_theta = oracle::uniform(rng, n, 0.1, 2.0);
  g.T_rhat = oracle::uniform(rng, n, 1.0, 20.0);
  g.T_eta = oracle::uniform(rng, n, 1e3, 1e6);
  g.K_z = oracle::uniform(rng, n, 0.5, 5.0);
  g.W = oracle::uniform(rng, n, 0.5, 2.0);
  std::uniform_real_distribution<double> d(100.0, 400.0);
  g.V_dc_star = d(rng);
  return g;
}

// Random connected graph: a random spanning tree plus extra edges.
inline epds::CommGraph random_graph(std::mt19937_64& rng, epds::Index n) {
  std::vector<std::pair<epds::Index, epds::Index>> edges;
  for (epds::Index i = 1; i < n; ++i) {
    std::uniform_int_distribution<epds::Index> pick(0, i - 1);
    edges.emplace_back(pick(rng), i);
  }
  std::bernoulli_distribution extra(0.3);
  for (epds::Index i = 0; i < n; ++i) {
    for (epds::Index j = i + 1; j < n; ++j) {
      if (extra(rng)) edges.emplace_back(i, j);
    }
  }
  return epds::CommGraph(n, edges);
}

}  // namespace testing
