#include <doctest.h>

#include <algorithm>
#include <filesystem>

#include "poscad/config.hpp"
#include "poscad/errors.hpp"

using namespace poscad;
using nlohmann::json;

namespace {

std::vector<std::string> problems_of(const json& doc) {
  try {
    parse_config(doc);
  } catch (const ConfigError& e) {
    return e.problems();
  }
  return {};
}

bool mentions(const std::vector<std::string>& problems, const std::string& field) {
  return std::any_of(problems.begin(), problems.end(),
                     [&](const std::string& p) { return p.rfind(field + ":", 0) == 0; });
}

}  // namespace

TEST_CASE("empty config takes the defaults") {
  const ExperimentConfig c = parse_config(json::object());
  CHECK(c.sim.topology.kind == TopologyKind::fat_tree);
  CHECK(c.sim.topology.k == 8);
  CHECK(c.sim.controller_capacity == 600);
  CHECK(c.sim.switch_capacity == 10);
  CHECK(c.sim.arrivals.mean_rate == 5.88);
  CHECK(c.sim.arrivals.slot_ms == 10.0);
  REQUIRE(c.sim.hotspot.has_value());
  CHECK(c.sim.hotspot->rate == 200.0);
  CHECK(c.sim.policy.params.V == 100.0);
  CHECK(c.sim.policy.params.gamma == 1.0);
  CHECK(c.sim.horizon == 100000);
  CHECK(c.sim.warmup == 10000);
  CHECK_FALSE(c.sweep.has_value());
}

TEST_CASE("a full config is read field by field") {
  const json doc = json::parse(R"({
    "topology": {"kind": "jellyfish", "switches": 20, "ports": 6, "hosts_per_switch": 2, "controllers": 4},
    "costs": {"computation_cost": 2.5},
    "arrivals": {"process": "pareto", "mean_rate": 3, "pareto_shape": 1.8},
    "hotspot": null,
    "prediction": {"mean_window": 4, "error_rate": 0.3},
    "policy": {"kind": "jsq", "V": 7, "beta1": 2, "devolution": false},
    "capacity": {"controller": 100, "switch": 20},
    "run": {"horizon": 500, "warmup": 50, "seed": 9},
    "sweep": {"axis": "D", "values": [0, 2, 4], "replications": 3}
  })");
  const ExperimentConfig c = parse_config(doc);
  CHECK(c.sim.topology.kind == TopologyKind::jellyfish);
  CHECK(c.sim.topology.jellyfish.switches == 20);
  CHECK(c.sim.computation_cost == std::vector<double>{2.5});
  CHECK(c.sim.arrivals.process == ArrivalProcessKind::pareto);
  CHECK(c.sim.arrivals.pareto_shape == 1.8);
  CHECK_FALSE(c.sim.hotspot.has_value());
  CHECK(c.sim.prediction.mean_window == 4);
  CHECK(c.sim.policy.kind == PolicyKind::jsq);
  CHECK(c.sim.policy.params.beta1 == 2.0);
  CHECK_FALSE(c.sim.policy.devolution);
  CHECK(c.sim.switch_capacity == 20);
  CHECK(c.sim.seed == 9);
  REQUIRE(c.sweep.has_value());
  CHECK(c.sweep->axis == SweepAxis::D);
  CHECK(c.sweep->replications == 3);
}

TEST_CASE("warmup defaults to a tenth of the horizon") {
  const ExperimentConfig c = parse_config(json::parse(R"({"run": {"horizon": 5000}})"));
  CHECK(c.sim.warmup == 500);
}

TEST_CASE("horizon not above warmup names the field") {
  const auto p = problems_of(json::parse(R"({"run": {"horizon": 100, "warmup": 100}})"));
  REQUIRE(p.size() == 1);
  CHECK(mentions(p, "run.warmup"));
}

TEST_CASE("unknown policy and unknown keys are rejected") {
  CHECK(mentions(problems_of(json::parse(R"({"policy": {"kind": "greedy"}})")), "policy.kind"));
  CHECK(mentions(problems_of(json::parse(R"({"policy": {"VV": 3}})")), "policy.VV"));
  CHECK(mentions(problems_of(json::parse(R"({"polcy": {}})")), "polcy"));
}

TEST_CASE("every problem is reported at once") {
  const auto p = problems_of(json::parse(R"({
    "topology": {"kind": "torus"},
    "arrivals": {"mean_rate": -1, "slot_ms": "ten"},
    "prediction": {"error_rate": 1.5, "mean_window": -2},
    "policy": {"beta1": 0},
    "run": {"horizon": 10, "warmup": 20},
    "sweep": {"axis": "W", "values": []}
  })"));
  for (const char* f : {"topology.kind", "arrivals.mean_rate", "arrivals.slot_ms", "prediction.error_rate",
                        "prediction.mean_window", "policy.beta1", "run.warmup", "sweep.axis", "sweep.values"}) {
    CHECK_MESSAGE(mentions(p, f), f);
  }
}

TEST_CASE("topology-dependent checks") {
  CHECK(mentions(problems_of(json::parse(R"({"topology": {"k": 4}, "hotspot": {"pod": 4}})")), "hotspot.pod"));
  CHECK(mentions(problems_of(json::parse(R"({"topology": {"k": 5}})")), "topology"));
  CHECK(mentions(problems_of(json::parse(R"({"topology": {"k": 4}, "costs": {"computation_cost": [1, 2]}})")),
                 "costs.computation_cost"));
}

TEST_CASE("empirical process needs a readable distribution") {
  CHECK(mentions(problems_of(json::parse(R"({"arrivals": {"process": "empirical"}})")),
                 "arrivals.distribution_file"));
  CHECK(mentions(
      problems_of(json::parse(R"({"arrivals": {"process": "empirical", "distribution_file": "/no/such.csv"}})")),
      "arrivals.distribution_file"));
  const ExperimentConfig c = parse_config(
      json::parse(R"({"arrivals": {"process": "empirical", "distribution_file": "data/inter_arrival.csv"}})"),
      POSCAD_SOURCE_DIR);
  CHECK_FALSE(c.sim.arrivals.empirical.empty());
}

TEST_CASE("sweep values are checked against the axis") {
  CHECK(mentions(problems_of(json::parse(R"({"sweep": {"axis": "D", "values": [1.5]}})")), "sweep.values"));
  CHECK(mentions(problems_of(json::parse(R"({"sweep": {"axis": "error_rate", "values": [1]}})")), "sweep.values"));
  CHECK(mentions(problems_of(json::parse(R"({"sweep": {"axis": "V", "values": [1], "replications": 0}})")),
                 "sweep.replications"));
}

TEST_CASE("config echo parses back to the same config") {
  const json doc = json::parse(R"({
    "topology": {"kind": "three_tier", "core": 2, "aggregation": 3, "edge_per_aggregation": 2, "hosts_per_edge": 2},
    "prediction": {"mean_window": 2, "error_rate": 0.1},
    "policy": {"V": 10},
    "run": {"horizon": 300, "warmup": 30, "seed": 4}
  })");
  const SimConfig a = parse_config(doc).sim;
  const SimConfig b = parse_config(to_json(a)).sim;
  CHECK(to_json(a) == to_json(b));
}

TEST_CASE("sweep axes set the matching parameter") {
  SimConfig base;
  CHECK(apply_axis(base, SweepAxis::V, 1000).policy.params.V == 1000);
  CHECK(apply_axis(base, SweepAxis::D, 6).prediction.mean_window == 6);
  CHECK(apply_axis(base, SweepAxis::error_rate, 0.3).prediction.error_rate == 0.3);
}

TEST_CASE("shipped configs load") {
  int loaded = 0;
  for (const auto& entry : std::filesystem::directory_iterator(std::string(POSCAD_SOURCE_DIR) + "/configs")) {
    if (entry.path().extension() != ".json") continue;
    CAPTURE(entry.path().string());
    CHECK_NOTHROW(load_config(entry.path().string()));
    ++loaded;
  }
  CHECK(loaded >= 7);
}
