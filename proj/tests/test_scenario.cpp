#include <doctest.h>

#include <cmath>
#include <random>

#include "epds/scenario.hpp"
#include "epds/simkernel.hpp"
#include "support.hpp"

using namespace epds;

namespace {

Trajectory from_currents(const std::vector<Vector>& currents, const std::vector<double>& volts) {
  Trajectory t;
  for (std::size_t k = 0; k < currents.size(); ++k) {
    TrajectorySample s;
    s.t = static_cast<double>(k);
    s.plant = {currents[k], volts[k]};
    const Index n = currents[k].size();
    s.ctrl = AdaptiveCtrlState::zeros(n);
    s.u = Vector::Zero(n);
    t.samples.push_back(s);
  }
  return t;
}

}  // namespace

TEST_CASE("regional profile") {
  const Scenario s = builtin_regional_profile();
  REQUIRE(s.segments.size() == 3);
  CHECK(s.segments[0].name == "takeoff");
  CHECK(s.segments[0].duration_s == 35.0);
  CHECK(s.segments[0].I_ell_pu == 2.98);
  CHECK(s.segments[1].duration_s == 25.0);
  CHECK(s.segments[1].I_ell_pu == 2.3);
  CHECK(s.segments[2].duration_s == 25.0);
  CHECK(s.segments[2].I_ell_pu == 1.7);
  CHECK(s.V_base == 200.0);
  CHECK(s.I_base == 6.7);
  CHECK(s.total_duration() == 85.0);
  CHECK(s.load_current(0) == doctest::Approx(19.966));
  CHECK(s.load_current(2) == doctest::Approx(11.39));
  CHECK(pu_to_amperes(1.0, 6.7) == 6.7);
}

TEST_CASE("other builtins keep the load levels") {
  const Scenario a = settled_regional_profile();
  const Scenario b = builtin_scenario("regional-short");
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(a.segments[k].I_ell_pu == builtin_regional_profile().segments[k].I_ell_pu);
    CHECK(b.segments[k].I_ell_pu == builtin_regional_profile().segments[k].I_ell_pu);
    CHECK(b.segments[k].duration_s == 0.05);
  }
  CHECK(a.total_duration() == 165.0);
  CHECK_THROWS_AS(builtin_scenario("transatlantic"), ConfigError);
}

TEST_CASE("segment lookup") {
  const Scenario s = builtin_regional_profile();
  CHECK(s.segment_at(0.0) == 0);
  CHECK(s.segment_at(34.999) == 0);
  CHECK(s.segment_at(35.0) == 1);
  CHECK(s.segment_at(60.0) == 2);
  CHECK(s.segment_at(1000.0) == 2);
  CHECK(s.segment_start(2) == 60.0);
  CHECK(s.segment_end(1) == 60.0);
}

TEST_CASE("scenario validation") {
  Scenario s = builtin_regional_profile();
  s.segments[1].duration_s = 0.0;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = builtin_regional_profile();
  s.segments[2].I_ell_pu = -1.0;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s.segments.clear();
  CHECK_THROWS_AS(s.validate(), ConfigError);
}

TEST_CASE("per-unit round trip") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> d(-50.0, 50.0), base(0.1, 100.0);
  for (int k = 0; k < 1000; ++k) {
    const double x = d(rng), b = base(rng);
    CHECK(amperes_to_pu(pu_to_amperes(x, b), b) == doctest::Approx(x).epsilon(1e-15));
  }
}

TEST_CASE("admittance in per unit") {
  Scenario s = builtin_regional_profile();
  const PlantParams p = PlantParams::reference();
  CHECK(s.admittance(p) == p.Y);
  s.Y_pu = 0.5;
  CHECK(s.admittance(p) == doctest::Approx(0.5 * 6.7 / 200.0));
}

TEST_CASE("voltage deviation") {
  const Trajectory t = from_currents({Vector::Ones(2), Vector::Ones(2), Vector::Ones(2)}, {200.0, 202.0, 197.0});
  const auto d = voltage_deviation_pct(t, 200.0);
  CHECK(d[0] == 0.0);
  CHECK(d[1] == doctest::Approx(1.0));
  std::mt19937_64 rng(4);
  std::vector<double> volts;
  std::vector<Vector> cur;
  for (int k = 0; k < 100; ++k) {
    volts.push_back(oracle::uniform(rng, 1, 150, 250)[0]);
    cur.push_back(Vector::Ones(2));
  }
  const auto series = voltage_deviation_pct(from_currents(cur, volts), 200.0);
  for (int k = 0; k < 100; ++k) {
    const double naive = volts[k] > 200.0 ? (volts[k] - 200.0) / 2.0 : (200.0 - volts[k]) / 2.0;
    CHECK(series[static_cast<std::size_t>(k)] == doctest::Approx(naive).epsilon(1e-13));
  }
}

TEST_CASE("sharing error") {
  CHECK(sharing_error(Vector::Constant(3, 2.0), Vector::Ones(3)) == 0.0);
  CHECK(sharing_error(Vector{{1.0, 3.0}}, Vector::Ones(2)) == doctest::Approx(2.0));
  CHECK(sharing_error(Vector{{1.0, 2.0, 3.0}}, Vector::Ones(3)) == doctest::Approx(std::sqrt(6.0)));
  // weights scale the currents before comparison
  CHECK(sharing_error(Vector{{2.0, 1.0}}, Vector{{1.0, 2.0}}) == 0.0);
  CHECK(max_sharing_spread(Vector{{1.0, 2.0, 4.0}}, Vector::Ones(3)) == 3.0);

  const Trajectory t = from_currents({Vector{{1.0, 2.0, 3.0}}, Vector::Ones(3)}, {200.0, 200.0});
  const auto e = current_sharing_error(t, Vector::Ones(3));
  CHECK(e[0] == doctest::Approx(std::sqrt(6.0)));
  CHECK(e[1] == 0.0);
}

TEST_CASE("resistance estimation error") {
  const PlantParams p = PlantParams::reference();
  Trajectory t = from_currents({Vector::Ones(3), Vector::Ones(3)}, {200.0, 200.0});
  t.samples[1].ctrl.rhat = p.R_tau;
  const auto e = resistance_estimation_error(t, p);
  CHECK(e[0].absolute[0] == 1.33);
  CHECK(e[0].absolute[1] == 0.78);
  CHECK(e[0].absolute[2] == 0.71);
  CHECK(e[0].relative_pct == Vector::Constant(3, 100.0));
  CHECK(e[1].absolute.isZero(0.0));
}

TEST_CASE("metrics do not depend on the recording interval") {
  const PlantParams p = PlantParams::reference();
  const ControllerSetup c = ControllerSetup::reference(p, ControllerKind::C1);
  IntegratorConfig fine, coarse;
  fine.step_s = coarse.step_s = 1e-7;
  fine.record_every = 10;
  coarse.record_every = 20;
  const Scenario sc = test_scale_profile(5e-4);
  const Trajectory a = integrate(p, c, CommGraph::path(3), sc, fine, SimState::initial(3, 200.0));
  const Trajectory b = integrate(p, c, CommGraph::path(3), sc, coarse, SimState::initial(3, 200.0));
  const auto va = voltage_deviation_pct(a, 200.0), vb = voltage_deviation_pct(b, 200.0);
  const auto sa = current_sharing_error(a, c.weights()), sb = current_sharing_error(b, c.weights());
  REQUIRE(a.samples.size() == 2 * b.samples.size() - 1);
  for (std::size_t k = 0; k < b.samples.size(); ++k) {
    CHECK(a.samples[2 * k].t == b.samples[k].t);
    CHECK(va[2 * k] == vb[k]);
    CHECK(sa[2 * k] == sb[k]);
  }
}
