#pragma once

#include <optional>
#include <string>

#include "epds/controllers.hpp"
#include "epds/graph.hpp"
#include "epds/plant.hpp"
#include "epds/scenario.hpp"
#include "epds/simkernel.hpp"

namespace epds {

inline constexpr int kConfigSchemaVersion = 1;

/// Everything one run needs, cross-validated at load time.
struct RunConfig {
  int schema_version = kConfigSchemaVersion;
  PlantParams plant;
  ControllerGains c1;
  DroopGains c2;
  ConsensusGains c3;
  CommGraph graph;
  Scenario scenario;
  IntegratorConfig integrator;
  std::optional<SimState> initial;  // SimState::initial if absent
  NoiseConfig noise;
  std::string out_dir = "out";

  ControllerSetup setup(ControllerKind kind) const;
  SimState initial_state() const;

  /// Throws ConfigError when shapes disagree, the graph is disconnected,
  /// a gain is non-positive or a physical parameter is invalid.
  void validate() const;

  /// Reference network, reference gains, path graph without delay, the
  /// settled regional profile and RK4 at 3 us.
  static RunConfig reference();
};

/// Parses a YAML run configuration. Errors carry "source:line: message".
RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

/// YAML rendering of a config; parse_config(dump_config(c)) reproduces c.
std::string dump_config(const RunConfig& config);

}  // namespace epds
