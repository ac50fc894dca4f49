#include "poscad/config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include <fmt/format.h>

#include "poscad/errors.hpp"

namespace poscad {

using nlohmann::json;

namespace {

std::string join_problems(const std::vector<std::string>& problems) {
  std::string msg = "invalid configuration:";
  for (const auto& p : problems) msg += "\n  " + p;
  return msg;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error(join_problems(problems)), problems_(std::move(problems)) {}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::V: return "V";
    case SweepAxis::D: return "D";
    case SweepAxis::error_rate: return "error_rate";
  }
  return "unknown";
}

namespace {

// Collects problems instead of stopping at the first one.
class Reader {
 public:
  std::vector<std::string> problems;

  void add(const std::string& field, const std::string& what) { problems.push_back(field + ": " + what); }

  const json* section(const json& doc, const std::string& name) {
    if (!doc.contains(name)) return nullptr;
    const json& s = doc.at(name);
    if (!s.is_object()) {
      add(name, "expected an object");
      return nullptr;
    }
    return &s;
  }

  void known_keys(const json& obj, const std::string& prefix, std::set<std::string> keys) {
    for (const auto& [key, value] : obj.items()) {
      if (!keys.count(key)) add(prefix.empty() ? key : prefix + "." + key, "unknown key");
    }
  }

  void number(const json* obj, const std::string& prefix, const char* key, double& out) {
    if (!obj || !obj->contains(key)) return;
    const json& v = obj->at(key);
    if (!v.is_number()) return add(prefix + "." + key, "expected a number");
    out = v.get<double>();
    if (!std::isfinite(out)) add(prefix + "." + key, "must be finite");
  }

  template <typename Int>
  void integer(const json* obj, const std::string& prefix, const char* key, Int& out, long long min_value) {
    if (!obj || !obj->contains(key)) return;
    const json& v = obj->at(key);
    if (!v.is_number_integer()) return add(prefix + "." + key, "expected an integer");
    const long long x = v.get<long long>();
    if (x < min_value) return add(prefix + "." + key, fmt::format("must be at least {}", min_value));
    out = static_cast<Int>(x);
  }

  void boolean(const json* obj, const std::string& prefix, const char* key, bool& out) {
    if (!obj || !obj->contains(key)) return;
    const json& v = obj->at(key);
    if (!v.is_boolean()) return add(prefix + "." + key, "expected true or false");
    out = v.get<bool>();
  }

  std::optional<std::string> string(const json* obj, const std::string& prefix, const char* key) {
    if (!obj || !obj->contains(key)) return std::nullopt;
    const json& v = obj->at(key);
    if (!v.is_string()) {
      add(prefix + "." + key, "expected a string");
      return std::nullopt;
    }
    return v.get<std::string>();
  }
};

void read_topology(Reader& r, const json& doc, SimConfig& sim) {
  const json* s = r.section(doc, "topology");
  if (!s) return;
  r.known_keys(*s, "topology",
               {"kind", "k", "core", "aggregation", "edge_per_aggregation", "hosts_per_edge", "switches", "ports",
                "hosts_per_switch", "controllers"});
  if (auto kind = r.string(s, "topology", "kind")) {
    if (auto parsed = parse_topology_kind(*kind)) {
      sim.topology.kind = *parsed;
    } else {
      r.add("topology.kind", fmt::format("unknown topology '{}' (fat_tree, f10, three_tier, jellyfish)", *kind));
    }
  }
  auto& t = sim.topology;
  r.integer(s, "topology", "k", t.k, 2);
  r.integer(s, "topology", "core", t.core, 1);
  r.integer(s, "topology", "aggregation", t.aggregation, 1);
  r.integer(s, "topology", "edge_per_aggregation", t.edge_per_aggregation, 1);
  r.integer(s, "topology", "hosts_per_edge", t.hosts_per_edge, 1);
  r.integer(s, "topology", "switches", t.jellyfish.switches, 1);
  r.integer(s, "topology", "ports", t.jellyfish.ports, 1);
  r.integer(s, "topology", "hosts_per_switch", t.jellyfish.hosts_per_switch, 1);
  r.integer(s, "topology", "controllers", t.jellyfish.controllers, 1);
}

void read_costs(Reader& r, const json& doc, SimConfig& sim) {
  const json* s = r.section(doc, "costs");
  if (!s) return;
  r.known_keys(*s, "costs", {"computation_cost"});
  if (!s->contains("computation_cost")) return;
  const json& v = s->at("computation_cost");
  if (v.is_string() && v.get<std::string>() == "mean_hops") {
    sim.computation_cost.clear();
  } else if (v.is_number()) {
    sim.computation_cost = {v.get<double>()};
  } else if (v.is_array() && !v.empty() && std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_number(); })) {
    sim.computation_cost = v.get<std::vector<double>>();
  } else {
    return r.add("costs.computation_cost", "expected \"mean_hops\", a number or a list of numbers");
  }
  for (double p : sim.computation_cost) {
    if (!(p >= 0.0) || !std::isfinite(p)) return r.add("costs.computation_cost", "must be finite and non-negative");
  }
}

void read_arrivals(Reader& r, const json& doc, SimConfig& sim, const std::string& base_dir) {
  const json* s = r.section(doc, "arrivals");
  if (!s) return;
  r.known_keys(*s, "arrivals", {"process", "mean_rate", "slot_ms", "pareto_shape", "distribution_file", "a_max"});
  auto& a = sim.arrivals;
  if (auto p = r.string(s, "arrivals", "process")) {
    if (auto parsed = parse_arrival_process(*p)) {
      a.process = *parsed;
    } else {
      r.add("arrivals.process", fmt::format("unknown process '{}' (poisson, pareto, empirical)", *p));
    }
  }
  r.number(s, "arrivals", "mean_rate", a.mean_rate);
  r.number(s, "arrivals", "slot_ms", a.slot_ms);
  r.number(s, "arrivals", "pareto_shape", a.pareto_shape);
  r.integer(s, "arrivals", "a_max", a.a_max, 1);
  if (a.mean_rate < 0.0) r.add("arrivals.mean_rate", "must be non-negative");
  if (a.slot_ms <= 0.0) r.add("arrivals.slot_ms", "must be positive");
  if (a.pareto_shape <= 1.0) r.add("arrivals.pareto_shape", "must exceed 1 for a finite mean");

  auto file = r.string(s, "arrivals", "distribution_file");
  if (a.process == ArrivalProcessKind::empirical) {
    if (!file) return r.add("arrivals.distribution_file", "required for the empirical process");
    std::filesystem::path path(*file);
    if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
    try {
      a.empirical = load_inter_arrival_distribution(path.string());
    } catch (const TrafficError& e) {
      r.add("arrivals.distribution_file", e.what());
    }
  }
}

void read_hotspot(Reader& r, const json& doc, SimConfig& sim) {
  if (!doc.contains("hotspot")) return;
  if (doc.at("hotspot").is_null()) {
    sim.hotspot.reset();
    return;
  }
  const json* s = r.section(doc, "hotspot");
  if (!s) return;
  r.known_keys(*s, "hotspot", {"pod", "rate"});
  HotSpotSpec h;
  r.integer(s, "hotspot", "pod", h.pod_index, 0);
  r.number(s, "hotspot", "rate", h.rate);
  if (h.rate < 0.0) r.add("hotspot.rate", "must be non-negative");
  sim.hotspot = h;
}

void read_prediction(Reader& r, const json& doc, SimConfig& sim) {
  const json* s = r.section(doc, "prediction");
  if (!s) return;
  r.known_keys(*s, "prediction", {"mean_window", "error_rate"});
  r.integer(s, "prediction", "mean_window", sim.prediction.mean_window, 0);
  r.number(s, "prediction", "error_rate", sim.prediction.error_rate);
  if (sim.prediction.error_rate < 0.0 || sim.prediction.error_rate >= 1.0) {
    r.add("prediction.error_rate", "must lie in [0, 1)");
  }
}

void read_policy(Reader& r, const json& doc, SimConfig& sim) {
  const json* s = r.section(doc, "policy");
  if (!s) return;
  r.known_keys(*s, "policy", {"kind", "V", "gamma", "beta1", "beta2", "devolution"});
  if (auto k = r.string(s, "policy", "kind")) {
    if (auto parsed = parse_policy_kind(*k)) {
      sim.policy.kind = *parsed;
    } else {
      r.add("policy.kind", fmt::format("unknown policy '{}' (poscad, static, random, jsq)", *k));
    }
  }
  auto& p = sim.policy.params;
  r.number(s, "policy", "V", p.V);
  r.number(s, "policy", "gamma", p.gamma);
  r.number(s, "policy", "beta1", p.beta1);
  r.number(s, "policy", "beta2", p.beta2);
  r.boolean(s, "policy", "devolution", sim.policy.devolution);
  if (p.V < 0.0) r.add("policy.V", "must be non-negative");
  if (p.gamma < 0.0) r.add("policy.gamma", "must be non-negative");
  if (p.beta1 <= 0.0) r.add("policy.beta1", "must be positive");
  if (p.beta2 <= 0.0) r.add("policy.beta2", "must be positive");
}

void read_capacity(Reader& r, const json& doc, SimConfig& sim) {
  const json* s = r.section(doc, "capacity");
  if (!s) return;
  r.known_keys(*s, "capacity", {"controller", "switch"});
  r.integer(s, "capacity", "controller", sim.controller_capacity, 0);
  r.integer(s, "capacity", "switch", sim.switch_capacity, 0);
}

void read_run(Reader& r, const json& doc, SimConfig& sim) {
  const json* s = r.section(doc, "run");
  bool warmup_given = false;
  if (s) {
    r.known_keys(*s, "run", {"horizon", "warmup", "seed"});
    r.integer(s, "run", "horizon", sim.horizon, 1);
    warmup_given = s->contains("warmup");
    r.integer(s, "run", "warmup", sim.warmup, 0);
    r.integer(s, "run", "seed", sim.seed, 0);
  }
  if (!warmup_given) sim.warmup = sim.horizon / 10;
  if (sim.horizon <= sim.warmup) r.add("run.warmup", "must be less than run.horizon");
}

std::optional<SweepSpec> read_sweep(Reader& r, const json& doc) {
  const json* s = r.section(doc, "sweep");
  if (!s) return std::nullopt;
  r.known_keys(*s, "sweep", {"axis", "values", "replications"});
  SweepSpec sweep;
  if (auto axis = r.string(s, "sweep", "axis")) {
    if (*axis == "V") {
      sweep.axis = SweepAxis::V;
    } else if (*axis == "D") {
      sweep.axis = SweepAxis::D;
    } else if (*axis == "error_rate") {
      sweep.axis = SweepAxis::error_rate;
    } else {
      r.add("sweep.axis", fmt::format("unknown axis '{}' (V, D, error_rate)", *axis));
    }
  } else if (!s->contains("axis")) {
    r.add("sweep.axis", "required");
  }
  if (!s->contains("values") || !s->at("values").is_array() || s->at("values").empty()) {
    r.add("sweep.values", "expected a non-empty list of numbers");
  } else {
    for (const auto& v : s->at("values")) {
      if (!v.is_number()) {
        r.add("sweep.values", "expected a non-empty list of numbers");
        break;
      }
      sweep.values.push_back(v.get<double>());
    }
  }
  r.integer(s, "sweep", "replications", sweep.replications, 1);
  for (double v : sweep.values) {
    if (sweep.axis == SweepAxis::D && (v < 0.0 || v != std::floor(v))) {
      r.add("sweep.values", "D values must be non-negative integers");
      break;
    }
    if (sweep.axis == SweepAxis::error_rate && (v < 0.0 || v >= 1.0)) {
      r.add("sweep.values", "error rates must lie in [0, 1)");
      break;
    }
    if (sweep.axis == SweepAxis::V && v < 0.0) {
      r.add("sweep.values", "V values must be non-negative");
      break;
    }
  }
  return sweep;
}

// Builds the topology once so that shape errors and out-of-range pods surface
// at load time.
void check_topology(Reader& r, const SimConfig& sim) {
  try {
    const Topology topo = build_topology(sim.topology, sim.seed);
    if (sim.hotspot && sim.hotspot->pod_index >= topo.pods.size()) {
      r.add("hotspot.pod", fmt::format("pod {} does not exist ({} pods)", sim.hotspot->pod_index, topo.pods.size()));
    }
    if (sim.computation_cost.size() > 1 && sim.computation_cost.size() != topo.num_switches) {
      r.add("costs.computation_cost",
            fmt::format("{} values given for {} switches", sim.computation_cost.size(), topo.num_switches));
    }
  } catch (const TopologyError& e) {
    r.add("topology", e.what());
  }
}

}  // namespace

ExperimentConfig parse_config(const json& doc, const std::string& base_dir) {
  if (!doc.is_object()) throw ConfigError({"config: expected a JSON object at the top level"});
  Reader r;
  r.known_keys(doc, "",
               {"topology", "costs", "arrivals", "hotspot", "prediction", "policy", "capacity", "run", "sweep"});
  ExperimentConfig out;
  read_topology(r, doc, out.sim);
  read_costs(r, doc, out.sim);
  read_arrivals(r, doc, out.sim, base_dir);
  read_hotspot(r, doc, out.sim);
  read_prediction(r, doc, out.sim);
  read_policy(r, doc, out.sim);
  read_capacity(r, doc, out.sim);
  read_run(r, doc, out.sim);
  out.sweep = read_sweep(r, doc);
  if (r.problems.empty()) check_topology(r, out.sim);
  if (!r.problems.empty()) throw ConfigError(std::move(r.problems));
  return out;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({fmt::format("config: cannot read '{}'", path)});
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError({fmt::format("config: {}", e.what())});
  }
  const auto dir = std::filesystem::path(path).parent_path();
  return parse_config(doc, dir.empty() ? "." : dir.string());
}

json to_json(const SimConfig& c) {
  json topo{{"kind", to_string(c.topology.kind)}};
  switch (c.topology.kind) {
    case TopologyKind::fat_tree:
    case TopologyKind::f10: topo["k"] = c.topology.k; break;
    case TopologyKind::three_tier:
      topo["core"] = c.topology.core;
      topo["aggregation"] = c.topology.aggregation;
      topo["edge_per_aggregation"] = c.topology.edge_per_aggregation;
      topo["hosts_per_edge"] = c.topology.hosts_per_edge;
      break;
    case TopologyKind::jellyfish:
      topo["switches"] = c.topology.jellyfish.switches;
      topo["ports"] = c.topology.jellyfish.ports;
      topo["hosts_per_switch"] = c.topology.jellyfish.hosts_per_switch;
      topo["controllers"] = c.topology.jellyfish.controllers;
      break;
  }
  json costs;
  if (c.computation_cost.empty()) {
    costs["computation_cost"] = "mean_hops";
  } else if (c.computation_cost.size() == 1) {
    costs["computation_cost"] = c.computation_cost.front();
  } else {
    costs["computation_cost"] = c.computation_cost;
  }
  json arrivals{{"process", to_string(c.arrivals.process)},
                {"mean_rate", c.arrivals.mean_rate},
                {"slot_ms", c.arrivals.slot_ms},
                {"a_max", c.arrivals.a_max}};
  if (c.arrivals.process == ArrivalProcessKind::pareto) arrivals["pareto_shape"] = c.arrivals.pareto_shape;
  if (c.arrivals.process == ArrivalProcessKind::empirical) arrivals["empirical_bins"] = c.arrivals.empirical.size();
  json hotspot = nullptr;
  if (c.hotspot) hotspot = json{{"pod", c.hotspot->pod_index}, {"rate", c.hotspot->rate}};
  return json{
      {"topology", topo},
      {"costs", costs},
      {"arrivals", arrivals},
      {"hotspot", hotspot},
      {"prediction", {{"mean_window", c.prediction.mean_window}, {"error_rate", c.prediction.error_rate}}},
      {"policy",
       {{"kind", to_string(c.policy.kind)},
        {"V", c.policy.params.V},
        {"gamma", c.policy.params.gamma},
        {"beta1", c.policy.params.beta1},
        {"beta2", c.policy.params.beta2},
        {"devolution", c.policy.devolution}}},
      {"capacity", {{"controller", c.controller_capacity}, {"switch", c.switch_capacity}}},
      {"run", {{"horizon", c.horizon}, {"warmup", c.warmup}, {"seed", c.seed}}},
  };
}

SimConfig apply_axis(const SimConfig& base, SweepAxis axis, double value) {
  SimConfig c = base;
  switch (axis) {
    case SweepAxis::V: c.policy.params.V = value; break;
    case SweepAxis::D: c.prediction.mean_window = static_cast<int>(value); break;
    case SweepAxis::error_rate: c.prediction.error_rate = value; break;
  }
  return c;
}

}  // namespace poscad
