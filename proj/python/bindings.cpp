#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "epds/analysis.hpp"
#include "epds/commands.hpp"
#include "epds/config.hpp"
#include "epds/report.hpp"

namespace py = pybind11;
using namespace epds;

namespace {

py::object json_to_py(const nlohmann::json& doc) {
  return py::module_::import("json").attr("loads")(doc.dump());
}

// Column-stacked samples: one row per recorded time.
py::dict trajectory_arrays(const Trajectory& t) {
  const Index rows = static_cast<Index>(t.samples.size());
  const Index n = t.size_n();
  Vector time(rows), V(rows);
  Matrix I(rows, n), phi(rows, n), theta(rows, n), rhat(rows, n), eta(rows, n), u(rows, n);
  for (Index k = 0; k < rows; ++k) {
    const auto& s = t.samples[static_cast<std::size_t>(k)];
    time[k] = s.t;
    V[k] = s.plant.V_dc;
    I.row(k) = s.plant.I_tau.transpose();
    phi.row(k) = s.ctrl.phi.transpose();
    theta.row(k) = s.ctrl.theta.transpose();
    rhat.row(k) = s.ctrl.rhat.transpose();
    eta.row(k) = s.ctrl.eta.transpose();
    u.row(k) = s.u.transpose();
  }
  py::dict d;
  d["t"] = time;
  d["V_dc"] = V;
  d["I_tau"] = I;
  d["phi"] = phi;
  d["theta"] = theta;
  d["rhat"] = rhat;
  d["eta"] = eta;
  d["u"] = u;
  d["warnings"] = t.warnings;
  return d;
}

ControllerKind kind_of(const std::string& name) { return controller_from_string(name); }

}  // namespace

PYBIND11_MODULE(_epds, m) {
  m.doc() = "DC power distribution network simulator";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericalAbort>(m, "NumericalAbort", PyExc_RuntimeError);

  py::class_<RunConfig>(m, "Config")
      .def_static("reference", &RunConfig::reference)
      .def_static("load", &load_config, py::arg("path"))
      .def_static("parse", &parse_config, py::arg("text"), py::arg("source") = "<config>")
      .def("dump", &dump_config)
      .def_property_readonly("n_s", [](const RunConfig& c) { return c.plant.size(); })
      .def_property_readonly("L_tau", [](const RunConfig& c) { return c.plant.L_tau; })
      .def_property_readonly("R_tau", [](const RunConfig& c) { return c.plant.R_tau; })
      .def_property_readonly("duration", [](const RunConfig& c) { return c.scenario.total_duration(); })
      .def_property(
          "step", [](const RunConfig& c) { return c.integrator.step_s; },
          [](RunConfig& c, double h) {
            c.integrator.step_s = h;
            c.integrator.validate();
          })
      .def_property(
          "record_every", [](const RunConfig& c) { return c.integrator.record_every; },
          [](RunConfig& c, long k) {
            c.integrator.record_every = k;
            c.integrator.validate();
          })
      .def(
          "use_builtin_scenario",
          [](RunConfig& c, const std::string& name) {
            const double V_star = c.scenario.V_dc_star;
            c.scenario = builtin_scenario(name);
            c.scenario.V_dc_star = V_star;
          },
          py::arg("name"))
      .def(
          "set_link_delay",
          [](RunConfig& c, double delay_s) {
            c.graph = CommGraph(c.plant.size(), c.graph.edges(), delay_s, delay_s);
          },
          py::arg("delay_s"));

  m.def(
      "simulate",
      [](const RunConfig& cfg, const std::string& controller) {
        SimulationResult r;
        {
          py::gil_scoped_release release;
          r = run_simulation(cfg, kind_of(controller));
        }
        py::dict d = trajectory_arrays(r.trajectory);
        d["summary"] = json_to_py(to_json(r.summary));
        return d;
      },
      py::arg("config"), py::arg("controller") = "c1",
      "Integrates one controller over the configured scenario.");

  m.def(
      "verify",
      [](const RunConfig& cfg, int random_states) {
        py::list out;
        for (const auto& r : run_verify(cfg, random_states)) {
          py::dict d;
          d["name"] = r.name;
          d["value"] = r.value;
          d["tolerance"] = r.tolerance;
          d["pass"] = r.pass;
          out.append(d);
        }
        return out;
      },
      py::arg("config"), py::arg("random_states") = 100);

  m.def(
      "compare",
      [](const RunConfig& cfg) {
        CompareResult r;
        {
          py::gil_scoped_release release;
          r = run_compare(cfg);
        }
        py::dict d;
        py::list runs;
        for (const auto& run : r.runs) runs.append(json_to_py(to_json(run.summary)));
        d["runs"] = runs;
        d["voltage_ordering"] = r.voltage_ordering;
        d["sharing_ratio"] = r.sharing_ratio;
        d["raw_sharing_ratio"] = r.raw_sharing_ratio;
        d["sharing_comparable"] = r.sharing_comparable;
        return d;
      },
      py::arg("config"), "Runs c1, c2 and c3 on the same scenario.");

  m.def(
      "equilibrium",
      [](const RunConfig& cfg, std::size_t segment, std::optional<Vector> theta0) {
        if (segment >= cfg.scenario.segments.size()) throw py::index_error("segment out of range");
        PlantParams p = cfg.plant;
        p.I_ell = cfg.scenario.load_current(segment);
        p.Y = cfg.scenario.admittance(cfg.plant);
        const EquilibriumPoint eq =
            compute_equilibrium(p, cfg.c1, theta0.value_or(cfg.initial_state().ctrl.theta));
        const double residual = inf_norm(weighted_rate(p, cfg.c1, closed_loop_rhs(p, cfg.c1, cfg.graph, eq.state())));
        py::dict d;
        d["V_dc"] = eq.V_bar;
        d["I_tau"] = eq.I_bar();
        d["theta"] = eq.theta_bar;
        d["rhat"] = eq.rhat_bar;
        d["alpha"] = eq.alpha;
        d["beta"] = eq.beta;
        d["residual"] = residual;
        return d;
      },
      py::arg("config"), py::arg("segment") = 0, py::arg("theta0") = py::none());

  m.attr("config_schema_version") = kConfigSchemaVersion;
  m.attr("summary_schema_version") = kSummarySchemaVersion;
}
