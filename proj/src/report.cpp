#include "epds/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

#include "epds/analysis.hpp"

namespace epds {

using nlohmann::json;

std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

void put_row(std::ostream& out, const std::vector<double>& row) {
  std::string line;
  line.reserve(row.size() * 12);
  for (std::size_t k = 0; k < row.size(); ++k) {
    if (k) line += ',';
    line += format_double(row[k]);
  }
  line += '\n';
  out << line;
}

void put_header(std::ostream& out, const std::vector<std::string>& cols) {
  for (std::size_t k = 0; k < cols.size(); ++k) out << (k ? "," : "") << cols[k];
  out << '\n';
}

void add_indexed(std::vector<std::string>& cols, const std::string& stem, Index n,
                 const std::string& unit) {
  for (Index i = 1; i <= n; ++i) cols.push_back(stem + std::to_string(i) + unit);
}

json vec_json(const Vector& v) {
  if (v.size() == 0) return nullptr;
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

}  // namespace

std::vector<std::string> trajectory_header(Index n) {
  std::vector<std::string> cols{"t_s", "V_dc_V"};
  add_indexed(cols, "I_tau_", n, "_A");
  add_indexed(cols, "phi_", n, "");
  add_indexed(cols, "theta_", n, "");
  add_indexed(cols, "rhat_", n, "_ohm");
  add_indexed(cols, "eta_", n, "");
  add_indexed(cols, "u_", n, "_V");
  return cols;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  const Index n = traj.size_n();
  put_header(out, trajectory_header(n));
  std::vector<double> row;
  for (const auto& s : traj.samples) {
    row.clear();
    row.push_back(s.t);
    row.push_back(s.plant.V_dc);
    for (const Vector* v : {&s.plant.I_tau, &s.ctrl.phi, &s.ctrl.theta, &s.ctrl.rhat, &s.ctrl.eta, &s.u}) {
      row.insert(row.end(), v->data(), v->data() + v->size());
    }
    put_row(out, row);
  }
}

std::vector<std::string> metrics_header(Index n) {
  std::vector<std::string> cols{"t_s", "segment", "voltage_deviation_pct", "sharing_error_A",
                                "max_spread_A"};
  add_indexed(cols, "rhat_err_", n, "_pct");
  return cols;
}

void write_metrics_csv(std::ostream& out, const Trajectory& traj, const PlantParams& params,
                       const Vector& W, double V_star) {
  put_header(out, metrics_header(traj.size_n()));
  const auto dev = voltage_deviation_pct(traj, V_star);
  const auto share = current_sharing_error(traj, W);
  const auto rerr = resistance_estimation_error(traj, params);
  std::vector<double> row;
  for (std::size_t k = 0; k < traj.samples.size(); ++k) {
    const auto& s = traj.samples[k];
    row.assign({s.t, static_cast<double>(s.segment + 1), dev[k], share[k], max_sharing_spread(s.plant.I_tau, W)});
    row.insert(row.end(), rerr[k].relative_pct.data(), rerr[k].relative_pct.data() + rerr[k].relative_pct.size());
    put_row(out, row);
  }
}

RunSummary summarize(const Trajectory& traj, const PlantParams& params,
                     const ControllerSetup& controller, const Scenario& scenario) {
  RunSummary out;
  out.controller = to_string(controller.kind);
  out.n_s = params.size();
  out.V_dc_star_V = controller.V_dc_star();
  out.samples = traj.samples.size();
  out.warnings = traj.warnings;
  if (traj.samples.empty()) return out;
  out.t_end_s = traj.samples.back().t;

  const Vector& W = controller.weights();
  const double V_star = out.V_dc_star_V;
  const double Y = scenario.admittance(params);
  const double inv_w_sum = W.cwiseInverse().sum();

  for (std::size_t k = 0; k < scenario.segments.size(); ++k) {
    const double start = scenario.segment_start(k);
    const double end = scenario.segment_end(k);
    if (start > out.t_end_s) break;

    SegmentSummary seg;
    seg.name = scenario.segments[k].name;
    seg.start_s = start;
    seg.end_s = std::min(end, out.t_end_s);
    seg.I_ell_A = scenario.load_current(k);
    seg.alpha_A = (seg.I_ell_A + Y * V_star) / inv_w_sum;

    const double window_start = seg.end_s - 0.1 * (seg.end_s - start);
    const TrajectorySample* last = nullptr;
    std::size_t count = 0;
    double last_outside = -1.0;
    for (const auto& s : traj.samples) {
      if (s.segment != k) continue;
      last = &s;
      const double dev = 100.0 * std::abs(s.plant.V_dc - V_star) / V_star;
      if (dev > kSettleBandPct) last_outside = s.t;
      if (s.t < window_start) continue;
      const double mean_w = (W.array() * s.plant.I_tau.array()).mean();
      seg.mean_weighted_current_A += mean_w;
      seg.voltage_deviation_pct += dev;
      seg.sharing_error_A += sharing_error(s.plant.I_tau, W);
      seg.max_spread_pct += 100.0 * max_sharing_spread(s.plant.I_tau, W) / std::abs(mean_w);
      const Vector target = seg.alpha_A * W.cwiseInverse();
      seg.equilibrium_current_error_pct +=
          100.0 * ((s.plant.I_tau - target).cwiseAbs().cwiseQuotient(target)).maxCoeff();
      ++count;
    }
    if (!last) continue;
    if (count > 0) {
      seg.mean_weighted_current_A /= static_cast<double>(count);
      seg.voltage_deviation_pct /= static_cast<double>(count);
      seg.sharing_error_A /= static_cast<double>(count);
      seg.max_spread_pct /= static_cast<double>(count);
      seg.equilibrium_current_error_pct /= static_cast<double>(count);
    }
    seg.V_end_V = last->plant.V_dc;
    seg.I_end_A = last->plant.I_tau;
    const double dev_end = 100.0 * std::abs(last->plant.V_dc - V_star) / V_star;
    if (dev_end <= kSettleBandPct) seg.settling_time_s = last_outside < 0.0 ? 0.0 : last_outside - start;
    out.segments.push_back(seg);
  }

  for (const auto& seg : out.segments) {
    out.steady_voltage_deviation_pct += seg.voltage_deviation_pct;
    out.steady_sharing_error_A += seg.sharing_error_A;
  }
  if (!out.segments.empty()) {
    out.steady_voltage_deviation_pct /= static_cast<double>(out.segments.size());
    out.steady_sharing_error_A /= static_cast<double>(out.segments.size());
  }
  const auto share = current_sharing_error(traj, W);
  for (double e : share) out.mean_sharing_error_A += e;
  out.mean_sharing_error_A /= static_cast<double>(share.size());

  if (controller.kind == ControllerKind::C1) {
    out.rhat_end_ohm = traj.samples.back().ctrl.rhat;
    out.rhat_error_pct = 100.0 * (out.rhat_end_ohm - params.R_tau).cwiseAbs().cwiseQuotient(params.R_tau);
  }
  const Vector T_theta = controller.kind == ControllerKind::C3 ? controller.consensus.T_theta
                                                               : controller.adaptive.T_theta;
  out.invariant_drift = check_invariant_set(traj, T_theta);
  out.invariant_initial = T_theta.dot(traj.samples.front().ctrl.theta);
  return out;
}

json to_json(const RunSummary& s) {
  json segs = json::array();
  for (const auto& g : s.segments) {
    segs.push_back({
        {"name", g.name},
        {"start_s", g.start_s},
        {"end_s", g.end_s},
        {"I_ell_A", g.I_ell_A},
        {"alpha_A", g.alpha_A},
        {"mean_weighted_current_A", g.mean_weighted_current_A},
        {"V_end_V", g.V_end_V},
        {"I_end_A", vec_json(g.I_end_A)},
        {"voltage_deviation_pct", g.voltage_deviation_pct},
        {"sharing_error_A", g.sharing_error_A},
        {"max_spread_pct", g.max_spread_pct},
        {"equilibrium_current_error_pct", g.equilibrium_current_error_pct},
        {"settling_time_s", g.settling_time_s ? json(*g.settling_time_s) : json(nullptr)},
    });
  }
  return {
      {"schema", "epds.summary"},
      {"schema_version", kSummarySchemaVersion},
      {"controller", s.controller},
      {"n_s", s.n_s},
      {"V_dc_star_V", s.V_dc_star_V},
      {"samples", s.samples},
      {"t_end_s", s.t_end_s},
      {"segments", segs},
      {"steady_state",
       {{"voltage_deviation_pct", s.steady_voltage_deviation_pct},
        {"sharing_error_A", s.steady_sharing_error_A}}},
      {"mean_sharing_error_A", s.mean_sharing_error_A},
      {"resistance_estimate",
       s.rhat_end_ohm.size() ? json{{"rhat_end_ohm", vec_json(s.rhat_end_ohm)},
                                    {"relative_error_pct", vec_json(s.rhat_error_pct)}}
                             : json(nullptr)},
      {"invariant", {{"initial", s.invariant_initial}, {"max_drift", s.invariant_drift}}},
      {"warnings", s.warnings},
  };
}

namespace {

struct Checker {
  std::vector<std::string>& errors;

  const json* field(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object() || !obj.contains(key)) {
      errors.push_back(path + "." + key + ": missing");
      return nullptr;
    }
    return &obj.at(key);
  }

  void number(const json& obj, const std::string& key, const std::string& path, bool nullable = false) {
    if (const json* v = field(obj, key, path)) {
      if (!(v->is_number() || (nullable && v->is_null()))) errors.push_back(path + "." + key + ": expected number");
    }
  }

  void numbers(const json& obj, const std::string& key, const std::string& path, std::size_t n,
               bool nullable = false) {
    const json* v = field(obj, key, path);
    if (!v) return;
    if (nullable && v->is_null()) return;
    if (!v->is_array() || v->size() != n ||
        !std::all_of(v->begin(), v->end(), [](const json& x) { return x.is_number(); })) {
      errors.push_back(path + "." + key + ": expected " + std::to_string(n) + " numbers");
    }
  }
};

}  // namespace

std::vector<std::string> validate_summary(const json& doc) {
  std::vector<std::string> errors;
  Checker c{errors};
  if (!doc.is_object()) return {"$: expected an object"};

  if (const json* v = c.field(doc, "schema", "$"); v && *v != "epds.summary") errors.push_back("$.schema: expected \"epds.summary\"");
  if (const json* v = c.field(doc, "schema_version", "$"); v && *v != kSummarySchemaVersion) {
    errors.push_back("$.schema_version: unsupported");
  }
  if (const json* v = c.field(doc, "controller", "$");
      v && !(v->is_string() && (*v == "c1" || *v == "c2" || *v == "c3"))) {
    errors.push_back("$.controller: expected c1, c2 or c3");
  }
  std::size_t n = 0;
  if (const json* v = c.field(doc, "n_s", "$")) {
    if (v->is_number_integer() && v->get<long long>() > 0) n = v->get<std::size_t>();
    else errors.push_back("$.n_s: expected a positive integer");
  }
  c.number(doc, "V_dc_star_V", "$");
  c.number(doc, "samples", "$");
  c.number(doc, "t_end_s", "$");
  c.number(doc, "mean_sharing_error_A", "$");

  if (const json* segs = c.field(doc, "segments", "$")) {
    if (!segs->is_array()) {
      errors.push_back("$.segments: expected an array");
    } else {
      for (std::size_t k = 0; k < segs->size(); ++k) {
        const json& g = (*segs)[k];
        const std::string p = "$.segments[" + std::to_string(k) + "]";
        if (const json* v = c.field(g, "name", p); v && !v->is_string()) errors.push_back(p + ".name: expected string");
        for (const char* key : {"start_s", "end_s", "I_ell_A", "alpha_A", "mean_weighted_current_A", "V_end_V", "voltage_deviation_pct",
                                "sharing_error_A", "max_spread_pct", "equilibrium_current_error_pct"}) {
          c.number(g, key, p);
        }
        c.number(g, "settling_time_s", p, true);
        c.numbers(g, "I_end_A", p, n);
      }
    }
  }
  if (const json* ss = c.field(doc, "steady_state", "$")) {
    c.number(*ss, "voltage_deviation_pct", "$.steady_state");
    c.number(*ss, "sharing_error_A", "$.steady_state");
  }
  if (const json* r = c.field(doc, "resistance_estimate", "$"); r && !r->is_null()) {
    c.numbers(*r, "rhat_end_ohm", "$.resistance_estimate", n);
    c.numbers(*r, "relative_error_pct", "$.resistance_estimate", n);
  }
  if (const json* inv = c.field(doc, "invariant", "$")) {
    c.number(*inv, "initial", "$.invariant");
    c.number(*inv, "max_drift", "$.invariant");
  }
  if (const json* w = c.field(doc, "warnings", "$");
      w && !(w->is_array() && std::all_of(w->begin(), w->end(), [](const json& x) { return x.is_string(); }))) {
    errors.push_back("$.warnings: expected an array of strings");
  }
  return errors;
}

}  // namespace epds
