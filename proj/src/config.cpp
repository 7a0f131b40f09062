#include "epds/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace epds {

namespace {

// Every error names the source and the 1-based line of the offending node.
class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& msg) const {
    fail_at(node.Mark(), msg);
  }

  [[noreturn]] void fail_at(const YAML::Mark& mark, const std::string& msg) const {
    std::ostringstream out;
    out << source_;
    if (!mark.is_null()) out << ":" << mark.line + 1;
    out << ": " << msg;
    throw ConfigError(out.str());
  }

  void require_map(const YAML::Node& node, const std::string& what) const {
    if (!node.IsMap()) fail(node, what + " must be a mapping");
  }

  void allow_keys(const YAML::Node& map, const std::string& what,
                  std::initializer_list<const char*> keys) const {
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      const bool known = std::any_of(keys.begin(), keys.end(),
                                     [&](const char* k) { return key == k; });
      if (!known) fail(kv.first, "unknown key '" + key + "' in " + what);
    }
  }

  YAML::Node required(const YAML::Node& map, const char* key, const std::string& what) const {
    const YAML::Node node = map[key];
    if (!node) fail(map, what + " is missing '" + key + "'");
    return node;
  }

  double number(const YAML::Node& node, const std::string& what) const {
    if (!node.IsScalar()) fail(node, what + " must be a number");
    try {
      return node.as<double>();
    } catch (const YAML::BadConversion&) {
      fail(node, what + " must be a number, got '" + node.Scalar() + "'");
    }
  }

  long integer(const YAML::Node& node, const std::string& what) const {
    if (!node.IsScalar()) fail(node, what + " must be an integer");
    try {
      return node.as<long>();
    } catch (const YAML::BadConversion&) {
      fail(node, what + " must be an integer, got '" + node.Scalar() + "'");
    }
  }

  std::string text(const YAML::Node& node, const std::string& what) const {
    if (!node.IsScalar()) fail(node, what + " must be a string");
    return node.Scalar();
  }

  // A scalar is broadcast to every source.
  Vector vec(const YAML::Node& node, Index n, const std::string& what) const {
    if (node.IsScalar()) return Vector::Constant(n, number(node, what));
    if (!node.IsSequence()) fail(node, what + " must be a number or a list");
    if (static_cast<Index>(node.size()) != n) {
      std::ostringstream msg;
      msg << what << " has " << node.size() << " entries, expected " << n;
      fail(node, msg.str());
    }
    Vector v(n);
    for (Index i = 0; i < n; ++i) v[i] = number(node[static_cast<std::size_t>(i)], what);
    return v;
  }

  Vector positive_vec(const YAML::Node& node, Index n, const std::string& what) const {
    Vector v = vec(node, n, what);
    for (Index i = 0; i < n; ++i) {
      if (!(v[i] > 0.0) || !std::isfinite(v[i])) fail(node, what + " entries must be positive");
    }
    return v;
  }

  double positive(const YAML::Node& node, const std::string& what) const {
    const double x = number(node, what);
    if (!(x > 0.0) || !std::isfinite(x)) fail(node, what + " must be positive");
    return x;
  }

  double non_negative(const YAML::Node& node, const std::string& what) const {
    const double x = number(node, what);
    if (!(x >= 0.0) || !std::isfinite(x)) fail(node, what + " must be non-negative");
    return x;
  }

  // Re-raises a ConfigError from a library validator at the node's line.
  template <typename F>
  void checked(const YAML::Node& node, F&& f) const {
    try {
      f();
    } catch (const ConfigError& e) {
      fail(node, e.what());
    }
  }

 private:
  std::string source_;
};

void read_plant(const Reader& rd, const YAML::Node& node, RunConfig& cfg) {
  rd.require_map(node, "plant");
  rd.allow_keys(node, "plant",
                {"L_tau_H", "R_tau_ohm", "L_min_H", "L_max_H", "C_dc_F", "I_ell_A", "Y_S"});
  const YAML::Node L = rd.required(node, "L_tau_H", "plant");
  if (!L.IsSequence() || L.size() == 0) rd.fail(L, "plant.L_tau_H must be a non-empty list");
  const auto n = static_cast<Index>(L.size());

  PlantParams& p = cfg.plant;
  p.L_tau = rd.vec(L, n, "plant.L_tau_H");
  p.R_tau = rd.vec(rd.required(node, "R_tau_ohm", "plant"), n, "plant.R_tau_ohm");
  p.L_min = rd.vec(rd.required(node, "L_min_H", "plant"), n, "plant.L_min_H");
  p.L_max = rd.vec(rd.required(node, "L_max_H", "plant"), n, "plant.L_max_H");
  p.C_dc = rd.number(rd.required(node, "C_dc_F", "plant"), "plant.C_dc_F");
  p.I_ell = node["I_ell_A"] ? rd.number(node["I_ell_A"], "plant.I_ell_A") : 6.7;
  p.Y = node["Y_S"] ? rd.number(node["Y_S"], "plant.Y_S") : 1e-3;
  rd.checked(node, [&] { p.validate(); });
}

void read_controllers(const Reader& rd, const YAML::Node& node, double V_star, RunConfig& cfg) {
  const Index n = cfg.plant.size();
  cfg.c1 = ControllerGains::reference(n);
  cfg.c1.V_dc_star = V_star;
  double resistance_scale = 0.9;
  std::optional<Vector> assumed_R;
  std::optional<Vector> k_droop;
  Vector c3_T_theta = Vector::Ones(n);

  if (node) {
    rd.require_map(node, "controllers");
    rd.allow_keys(node, "controllers", {"c1", "c2", "c3"});
    if (const YAML::Node c1 = node["c1"]) {
      rd.require_map(c1, "controllers.c1");
      rd.allow_keys(c1, "controllers.c1", {"T_phi", "T_theta", "T_rhat", "T_eta", "K_z_ohm", "W"});
      auto get = [&](const char* key, Vector& dst) {
        if (c1[key]) dst = rd.positive_vec(c1[key], n, std::string("controllers.c1.") + key);
      };
      get("T_phi", cfg.c1.T_phi);
      get("T_theta", cfg.c1.T_theta);
      get("T_rhat", cfg.c1.T_rhat);
      get("T_eta", cfg.c1.T_eta);
      get("K_z_ohm", cfg.c1.K_z);
      get("W", cfg.c1.W);
    }
    if (const YAML::Node c2 = node["c2"]) {
      rd.require_map(c2, "controllers.c2");
      rd.allow_keys(c2, "controllers.c2", {"k_droop_ohm"});
      if (c2["k_droop_ohm"]) k_droop = rd.positive_vec(c2["k_droop_ohm"], n, "controllers.c2.k_droop_ohm");
    }
    if (const YAML::Node c3 = node["c3"]) {
      rd.require_map(c3, "controllers.c3");
      rd.allow_keys(c3, "controllers.c3", {"T_theta", "assumed_R_ohm", "resistance_scale"});
      if (c3["assumed_R_ohm"] && c3["resistance_scale"]) {
        rd.fail(c3, "controllers.c3 takes assumed_R_ohm or resistance_scale, not both");
      }
      if (c3["T_theta"]) c3_T_theta = rd.positive_vec(c3["T_theta"], n, "controllers.c3.T_theta");
      if (c3["assumed_R_ohm"]) assumed_R = rd.positive_vec(c3["assumed_R_ohm"], n, "controllers.c3.assumed_R_ohm");
      if (c3["resistance_scale"]) {
        resistance_scale = rd.positive(c3["resistance_scale"], "controllers.c3.resistance_scale");
      }
    }
  }

  cfg.c2 = k_droop ? DroopGains{*k_droop, V_star} : DroopGains::from_weights(cfg.c1.W, V_star);
  cfg.c3 = ConsensusGains::from_plant(cfg.plant, resistance_scale, cfg.c1.W, V_star);
  cfg.c3.T_theta = c3_T_theta;
  if (assumed_R) cfg.c3.assumed_R = *assumed_R;
}

void read_graph(const Reader& rd, const YAML::Node& node, RunConfig& cfg) {
  const Index n = cfg.plant.size();
  if (!node) {
    cfg.graph = CommGraph::path(n);
    return;
  }
  rd.require_map(node, "graph");
  rd.allow_keys(node, "graph", {"topology", "edges", "link_delay_s", "broadcast_delay_s", "link_delays"});
  const double delay = node["link_delay_s"] ? rd.non_negative(node["link_delay_s"], "graph.link_delay_s") : 0.0;
  const double broadcast =
      node["broadcast_delay_s"] ? rd.non_negative(node["broadcast_delay_s"], "graph.broadcast_delay_s") : delay;

  if (node["topology"] && node["edges"]) rd.fail(node, "graph takes topology or edges, not both");
  std::vector<std::pair<Index, Index>> edges;
  if (const YAML::Node e = node["edges"]) {
    if (!e.IsSequence()) rd.fail(e, "graph.edges must be a list of [i, j] pairs (1-based)");
    for (const auto& pair : e) {
      if (!pair.IsSequence() || pair.size() != 2) rd.fail(pair, "each edge must be a pair [i, j]");
      const long a = rd.integer(pair[0], "edge endpoint");
      const long b = rd.integer(pair[1], "edge endpoint");
      if (a < 1 || b < 1 || a > n || b > n) rd.fail(pair, "edge endpoint out of range 1.." + std::to_string(n));
      edges.emplace_back(a - 1, b - 1);
    }
  } else {
    const std::string topo = node["topology"] ? rd.text(node["topology"], "graph.topology") : "path";
    CommGraph g;
    if (topo == "path") g = CommGraph::path(n);
    else if (topo == "ring") g = CommGraph::ring(n);
    else if (topo == "complete") g = CommGraph::complete(n);
    else rd.fail(node["topology"], "unknown topology '" + topo + "' (expected path, ring or complete)");
    edges = g.edges();
  }
  rd.checked(node, [&] { cfg.graph = CommGraph(n, edges, delay, broadcast); });

  if (const YAML::Node ld = node["link_delays"]) {
    if (!ld.IsSequence()) rd.fail(ld, "graph.link_delays must be a list");
    for (const auto& item : ld) {
      rd.require_map(item, "link delay entry");
      rd.allow_keys(item, "link delay entry", {"edge", "delay_s"});
      const YAML::Node e = rd.required(item, "edge", "link delay entry");
      if (!e.IsSequence() || e.size() != 2) rd.fail(e, "edge must be a pair [i, j]");
      const long a = rd.integer(e[0], "edge endpoint");
      const long b = rd.integer(e[1], "edge endpoint");
      const double d = rd.non_negative(rd.required(item, "delay_s", "link delay entry"), "delay_s");
      rd.checked(item, [&] {
        if (a < 1 || b < 1 || a > n || b > n || !cfg.graph.adjacent(a - 1, b - 1)) {
          throw ConfigError("link delay given for a pair that is not an edge");
        }
        cfg.graph.set_link_delay(a - 1, b - 1, d);
      });
    }
  }
  rd.checked(node, [&] { cfg.graph.validate(n); });
}

void read_scenario(const Reader& rd, const YAML::Node& node, double V_star, RunConfig& cfg) {
  if (!node) {
    cfg.scenario = settled_regional_profile();
  } else {
    rd.require_map(node, "scenario");
    rd.allow_keys(node, "scenario", {"builtin", "segments", "V_base_V", "I_base_A", "Y_pu"});
    if (node["builtin"] && node["segments"]) rd.fail(node, "scenario takes builtin or segments, not both");
    if (const YAML::Node b = node["builtin"]) {
      rd.checked(b, [&] { cfg.scenario = builtin_scenario(rd.text(b, "scenario.builtin")); });
    } else {
      const YAML::Node segs = rd.required(node, "segments", "scenario");
      if (!segs.IsSequence() || segs.size() == 0) rd.fail(segs, "scenario.segments must be a non-empty list");
      cfg.scenario = Scenario{};
      for (const auto& s : segs) {
        rd.require_map(s, "segment");
        rd.allow_keys(s, "segment", {"name", "duration_s", "I_ell_pu"});
        Segment seg;
        seg.name = s["name"] ? rd.text(s["name"], "segment name") : "segment" + std::to_string(cfg.scenario.segments.size() + 1);
        seg.duration_s = rd.positive(rd.required(s, "duration_s", "segment"), "duration_s");
        seg.I_ell_pu = rd.positive(rd.required(s, "I_ell_pu", "segment"), "I_ell_pu");
        cfg.scenario.segments.push_back(seg);
      }
    }
    if (node["V_base_V"]) cfg.scenario.V_base = rd.positive(node["V_base_V"], "scenario.V_base_V");
    if (node["I_base_A"]) cfg.scenario.I_base = rd.positive(node["I_base_A"], "scenario.I_base_A");
    if (node["Y_pu"]) cfg.scenario.Y_pu = rd.non_negative(node["Y_pu"], "scenario.Y_pu");
  }
  cfg.scenario.V_dc_star = V_star;
}

void read_integrator(const Reader& rd, const YAML::Node& node, RunConfig& cfg) {
  if (!node) return;
  rd.require_map(node, "integrator");
  rd.allow_keys(node, "integrator", {"method", "step_s", "record_every", "t_end_s"});
  auto& ic = cfg.integrator;
  if (const YAML::Node m = node["method"]) {
    const std::string name = rd.text(m, "integrator.method");
    if (name == "rk4") ic.method = IntegrationMethod::RK4;
    else if (name == "euler") ic.method = IntegrationMethod::Euler;
    else rd.fail(m, "unknown method '" + name + "' (expected rk4 or euler)");
  }
  if (node["step_s"]) ic.step_s = rd.positive(node["step_s"], "integrator.step_s");
  if (const YAML::Node r = node["record_every"]) {
    ic.record_every = rd.integer(r, "integrator.record_every");
    if (ic.record_every < 1) rd.fail(r, "integrator.record_every must be at least 1");
  }
  if (node["t_end_s"]) ic.t_end = rd.non_negative(node["t_end_s"], "integrator.t_end_s");
}

void read_initial(const Reader& rd, const YAML::Node& node, double V_star, RunConfig& cfg) {
  if (!node) return;
  rd.require_map(node, "initial");
  rd.allow_keys(node, "initial", {"I_tau_A", "V_dc_V", "phi_A", "theta", "rhat_ohm", "eta_H"});
  const Index n = cfg.plant.size();
  SimState x = SimState::initial(n, V_star);
  if (node["I_tau_A"]) x.plant.I_tau = rd.vec(node["I_tau_A"], n, "initial.I_tau_A");
  if (node["V_dc_V"]) x.plant.V_dc = rd.number(node["V_dc_V"], "initial.V_dc_V");
  if (node["phi_A"]) x.ctrl.phi = rd.vec(node["phi_A"], n, "initial.phi_A");
  if (node["theta"]) x.ctrl.theta = rd.vec(node["theta"], n, "initial.theta");
  if (node["rhat_ohm"]) x.ctrl.rhat = rd.vec(node["rhat_ohm"], n, "initial.rhat_ohm");
  if (node["eta_H"]) x.ctrl.eta = rd.vec(node["eta_H"], n, "initial.eta_H");
  cfg.initial = x;
}

void read_noise(const Reader& rd, const YAML::Node& node, RunConfig& cfg) {
  if (!node) return;
  rd.require_map(node, "noise");
  rd.allow_keys(node, "noise", {"sigma_I_A", "sigma_V_V"});
  if (node["sigma_I_A"]) cfg.noise.sigma_I_A = rd.non_negative(node["sigma_I_A"], "noise.sigma_I_A");
  if (node["sigma_V_V"]) cfg.noise.sigma_V_V = rd.non_negative(node["sigma_V_V"], "noise.sigma_V_V");
}

void emit_vec(YAML::Emitter& out, const char* key, const Vector& v) {
  out << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (Index i = 0; i < v.size(); ++i) out << v[i];
  out << YAML::EndSeq;
}

}  // namespace

ControllerSetup RunConfig::setup(ControllerKind kind) const {
  ControllerSetup s;
  s.kind = kind;
  s.adaptive = c1;
  s.droop = c2;
  s.consensus = c3;
  return s;
}

SimState RunConfig::initial_state() const {
  return initial ? *initial : SimState::initial(plant.size(), c1.V_dc_star);
}

void RunConfig::validate() const {
  plant.validate();
  const Index n = plant.size();
  c1.validate(n);
  c2.validate(n);
  c3.validate(n);
  graph.validate(n);
  scenario.validate();
  integrator.validate();
  if (initial) {
    const auto& x = *initial;
    if (x.plant.I_tau.size() != n || x.ctrl.size() != n) throw ConfigError("initial state has the wrong size");
  }
}

RunConfig RunConfig::reference() {
  RunConfig cfg;
  cfg.plant = PlantParams::reference();
  const Index n = cfg.plant.size();
  const ControllerSetup s = ControllerSetup::reference(cfg.plant, ControllerKind::C1);
  cfg.c1 = s.adaptive;
  cfg.c2 = s.droop;
  cfg.c3 = s.consensus;
  cfg.graph = CommGraph::path(n);
  cfg.scenario = settled_regional_profile();
  cfg.integrator.step_s = 3e-6;
  cfg.integrator.record_every = 1000;
  cfg.noise.seed = 1;
  return cfg;
}

RunConfig parse_config(const std::string& text, const std::string& source) {
  const Reader rd(source);
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    rd.fail_at(e.mark, e.msg);
  }
  if (!root.IsMap()) rd.fail_at(root.Mark(), "top level must be a mapping");
  rd.allow_keys(root, "config",
                {"schema_version", "V_dc_star_V", "plant", "controllers", "graph", "scenario",
                 "integrator", "initial", "noise", "seed", "output"});

  RunConfig cfg;
  const YAML::Node version = rd.required(root, "schema_version", "config");
  cfg.schema_version = static_cast<int>(rd.integer(version, "schema_version"));
  if (cfg.schema_version != kConfigSchemaVersion) {
    rd.fail(version, "unsupported schema_version " + std::to_string(cfg.schema_version) +
                         " (this build reads " + std::to_string(kConfigSchemaVersion) + ")");
  }
  const double V_star = root["V_dc_star_V"] ? rd.positive(root["V_dc_star_V"], "V_dc_star_V") : 200.0;

  read_plant(rd, rd.required(root, "plant", "config"), cfg);
  read_controllers(rd, root["controllers"], V_star, cfg);
  read_graph(rd, root["graph"], cfg);
  read_scenario(rd, root["scenario"], V_star, cfg);
  read_integrator(rd, root["integrator"], cfg);
  read_initial(rd, root["initial"], V_star, cfg);
  read_noise(rd, root["noise"], cfg);
  if (root["seed"]) {
    const long seed = rd.integer(root["seed"], "seed");
    if (seed < 0) rd.fail(root["seed"], "seed must be non-negative");
    cfg.noise.seed = static_cast<std::uint64_t>(seed);
  }
  if (const YAML::Node o = root["output"]) {
    rd.require_map(o, "output");
    rd.allow_keys(o, "output", {"dir"});
    if (o["dir"]) cfg.out_dir = rd.text(o["dir"], "output.dir");
  }
  rd.checked(root, [&] { cfg.validate(); });
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

std::string dump_config(const RunConfig& c) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "schema_version" << YAML::Value << c.schema_version;
  out << YAML::Key << "V_dc_star_V" << YAML::Value << c.c1.V_dc_star;

  out << YAML::Key << "plant" << YAML::Value << YAML::BeginMap;
  emit_vec(out, "L_tau_H", c.plant.L_tau);
  emit_vec(out, "R_tau_ohm", c.plant.R_tau);
  emit_vec(out, "L_min_H", c.plant.L_min);
  emit_vec(out, "L_max_H", c.plant.L_max);
  out << YAML::Key << "C_dc_F" << YAML::Value << c.plant.C_dc;
  out << YAML::Key << "I_ell_A" << YAML::Value << c.plant.I_ell;
  out << YAML::Key << "Y_S" << YAML::Value << c.plant.Y;
  out << YAML::EndMap;

  out << YAML::Key << "controllers" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "c1" << YAML::Value << YAML::BeginMap;
  emit_vec(out, "T_phi", c.c1.T_phi);
  emit_vec(out, "T_theta", c.c1.T_theta);
  emit_vec(out, "T_rhat", c.c1.T_rhat);
  emit_vec(out, "T_eta", c.c1.T_eta);
  emit_vec(out, "K_z_ohm", c.c1.K_z);
  emit_vec(out, "W", c.c1.W);
  out << YAML::EndMap;
  out << YAML::Key << "c2" << YAML::Value << YAML::BeginMap;
  emit_vec(out, "k_droop_ohm", c.c2.k_droop);
  out << YAML::EndMap;
  out << YAML::Key << "c3" << YAML::Value << YAML::BeginMap;
  emit_vec(out, "T_theta", c.c3.T_theta);
  emit_vec(out, "assumed_R_ohm", c.c3.assumed_R);
  out << YAML::EndMap;
  out << YAML::EndMap;

  out << YAML::Key << "graph" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "edges" << YAML::Value << YAML::BeginSeq;
  for (const auto& [a, b] : c.graph.edges()) out << YAML::Flow << YAML::BeginSeq << a + 1 << b + 1 << YAML::EndSeq;
  out << YAML::EndSeq;
  out << YAML::Key << "broadcast_delay_s" << YAML::Value << c.graph.broadcast_delay();
  out << YAML::Key << "link_delays" << YAML::Value << YAML::BeginSeq;
  for (const auto& [a, b] : c.graph.edges()) {
    out << YAML::BeginMap;
    out << YAML::Key << "edge" << YAML::Value << YAML::Flow << YAML::BeginSeq << a + 1 << b + 1 << YAML::EndSeq;
    out << YAML::Key << "delay_s" << YAML::Value << c.graph.link_delay(a, b);
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::EndMap;

  out << YAML::Key << "scenario" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "V_base_V" << YAML::Value << c.scenario.V_base;
  out << YAML::Key << "I_base_A" << YAML::Value << c.scenario.I_base;
  if (c.scenario.Y_pu) out << YAML::Key << "Y_pu" << YAML::Value << *c.scenario.Y_pu;
  out << YAML::Key << "segments" << YAML::Value << YAML::BeginSeq;
  for (const auto& s : c.scenario.segments) {
    out << YAML::Flow << YAML::BeginMap << YAML::Key << "name" << YAML::Value << s.name << YAML::Key
        << "duration_s" << YAML::Value << s.duration_s << YAML::Key << "I_ell_pu" << YAML::Value
        << s.I_ell_pu << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::EndMap;

  out << YAML::Key << "integrator" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "method" << YAML::Value
      << (c.integrator.method == IntegrationMethod::RK4 ? "rk4" : "euler");
  out << YAML::Key << "step_s" << YAML::Value << c.integrator.step_s;
  out << YAML::Key << "record_every" << YAML::Value << c.integrator.record_every;
  out << YAML::Key << "t_end_s" << YAML::Value << c.integrator.t_end;
  out << YAML::EndMap;

  if (c.initial) {
    const auto& x = *c.initial;
    out << YAML::Key << "initial" << YAML::Value << YAML::BeginMap;
    emit_vec(out, "I_tau_A", x.plant.I_tau);
    out << YAML::Key << "V_dc_V" << YAML::Value << x.plant.V_dc;
    emit_vec(out, "phi_A", x.ctrl.phi);
    emit_vec(out, "theta", x.ctrl.theta);
    emit_vec(out, "rhat_ohm", x.ctrl.rhat);
    emit_vec(out, "eta_H", x.ctrl.eta);
    out << YAML::EndMap;
  }

  out << YAML::Key << "noise" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "sigma_I_A" << YAML::Value << c.noise.sigma_I_A;
  out << YAML::Key << "sigma_V_V" << YAML::Value << c.noise.sigma_V_V;
  out << YAML::EndMap;
  out << YAML::Key << "seed" << YAML::Value << static_cast<unsigned long long>(c.noise.seed);
  out << YAML::Key << "output" << YAML::Value << YAML::BeginMap << YAML::Key << "dir" << YAML::Value
      << c.out_dir << YAML::EndMap;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace epds
