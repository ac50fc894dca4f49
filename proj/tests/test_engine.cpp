#include <doctest.h>

#include <random>
#include <sstream>

#include "poscad/engine.hpp"
#include "poscad/errors.hpp"

using namespace poscad;

namespace {

// Two switches, one controller one hop away, P = 0.5.
World two_switch_world(int window) {
  World w;
  w.costs.num_switches = 2;
  w.costs.num_controllers = 1;
  w.costs.hop_counts = {1, 1};
  w.costs.computation = {0.5, 0.5};
  w.controller_capacity = {2};
  w.switch_capacity = {1, 1};
  w.windows = {window, window};
  w.traffic = std::make_unique<ScriptedTraffic>(std::vector<std::vector<std::size_t>>{{1, 1}, {0, 1}});
  w.policy.params = PolicyParams{1.0, 1.0, 1.0, 1.0};
  return w;
}

SimConfig small_config() {
  SimConfig c;
  c.topology.kind = TopologyKind::fat_tree;
  c.topology.k = 4;
  c.switch_capacity = 50;
  c.horizon = 2000;
  c.warmup = 200;
  return c;
}

}  // namespace

TEST_CASE("one slot of lookahead lets both switches pre-serve") {
  Simulation sim(two_switch_world(1));
  sim.preload_switch_queue(0, 1, 0);
  std::vector<SwitchDecision> chosen;
  sim.on_decision([&](std::int64_t, const Snapshot&, const Decision& d) { chosen = d.switches; });
  const SlotRecord r = sim.step();
  REQUIRE(chosen.size() == 2);
  CHECK(chosen[0] == SwitchDecision{0, 2});
  CHECK(chosen[1] == SwitchDecision{std::nullopt, 1});
  CHECK(r.completions == 4);
  CHECK(r.sum_response_slots == 0);
  CHECK(sim.controller_queue(0).backlog() == 0);
  CHECK(sim.switch_queue(0).backlog() == 0);
  CHECK(sim.switch_queue(1).backlog() == 0);
  // nothing left for the next slot
  CHECK(sim.window(0).total() == 0);
  CHECK(sim.window(1).total() == 0);
}

TEST_CASE("without lookahead the next slot's requests are still pending") {
  Simulation sim(two_switch_world(0));
  sim.preload_switch_queue(0, 1, 0);
  const SlotRecord r = sim.step();
  CHECK(r.completions == 2);
  CHECK(sim.window(0).total() == 1);
  CHECK(sim.window(1).total() == 1);
}

TEST_CASE("world dimensions are checked") {
  World w = two_switch_world(0);
  w.switch_capacity = {1};
  CHECK_THROWS_AS(Simulation(std::move(w)), ContractViolation);
  World no_traffic = two_switch_world(0);
  no_traffic.traffic.reset();
  CHECK_THROWS_AS(Simulation(std::move(no_traffic)), ContractViolation);
}

TEST_CASE("time-varying capacity is honoured") {
  World w = two_switch_world(0);
  w.traffic = std::make_unique<ScriptedTraffic>(std::vector<std::vector<std::size_t>>{{5, 5, 5, 5}, {0, 0, 0, 0}});
  w.policy.devolution = false;
  w.controller_capacity_at = [](std::int64_t t, std::size_t) -> std::size_t { return t % 2 == 0 ? 0 : 100; };
  Simulation sim(std::move(w));
  CHECK(sim.step().completions == 0);
  CHECK(sim.controller_queue(0).backlog() == 5);
  CHECK(sim.step().completions == 10);
  CHECK(sim.controller_queue(0).backlog() == 0);
}

TEST_CASE("property: queue updates match scalar recomputation") {
  std::mt19937_64 pick(5);
  for (int trial = 0; trial < 24; ++trial) {
    SimConfig c = small_config();
    c.seed = 100 + trial;
    c.policy.kind = static_cast<PolicyKind>(trial % 4);
    c.policy.params.V = std::vector<double>{0, 1, 10, 100, 1000}[pick() % 5];
    c.policy.devolution = trial % 3 != 0;
    c.prediction.mean_window = static_cast<int>(pick() % 5);
    c.prediction.error_rate = std::vector<double>{0.0, 0.1, 0.5}[pick() % 3];
    c.hotspot = trial % 2 ? std::optional<HotSpotSpec>(HotSpotSpec{1, 150}) : std::nullopt;
    if (trial % 5 == 4) {
      c.topology.kind = TopologyKind::jellyfish;
      c.topology.jellyfish = JellyfishParams{12, 5, 2, 3};
    }
    Simulation sim(make_world(c));
    const std::size_t n = sim.num_switches();
    const std::size_t m = sim.num_controllers();

    Snapshot before;
    Decision decision;
    sim.on_decision([&](std::int64_t, const Snapshot& s, const Decision& d) {
      before = s;
      decision = d;
    });
    for (int t = 0; t < 600; ++t) {
      sim.step();
      std::vector<std::size_t> to_ctrl(m, 0);
      for (std::size_t i = 0; i < n; ++i) {
        const auto& d = decision.switches[i];
        REQUIRE(d.admit >= before.q0[i]);
        REQUIRE(d.admit <= before.qp[i]);
        std::size_t local = 0;
        if (d.controller) {
          to_ctrl[*d.controller] += d.admit;
        } else {
          REQUIRE(c.policy.devolution);
          local = d.admit;
        }
        const std::size_t qs = before.qs[i] + local;
        REQUIRE(sim.switch_queue(i).backlog() == (qs > c.switch_capacity ? qs - c.switch_capacity : 0));
      }
      for (std::size_t j = 0; j < m; ++j) {
        const std::size_t qc = before.qc[j] + to_ctrl[j];
        REQUIRE(sim.controller_queue(j).backlog() ==
                (qc > c.controller_capacity ? qc - c.controller_capacity : 0));
      }
    }
  }
}

TEST_CASE("without prediction the window is just the arrived requests") {
  SimConfig c = small_config();
  c.hotspot = HotSpotSpec{0, 150};
  Simulation sim(make_world(c));
  sim.on_decision([&](std::int64_t, const Snapshot& s, const Decision&) {
    for (std::size_t i = 0; i < s.qp.size(); ++i) REQUIRE(s.qp[i] == s.q0[i]);
  });
  for (int t = 0; t < 500; ++t) sim.step();
}

TEST_CASE("perfect prediction never produces phantoms") {
  SimConfig c = small_config();
  c.prediction.mean_window = 4;
  std::ostringstream csv;
  const RunSummary s = run(c, &csv);
  CHECK(s.phantom_completions == 0);
  c.prediction.error_rate = 0.5;
  CHECK(run(c).phantom_completions > 0);
}

TEST_CASE("identical config and seed give identical slot records") {
  SimConfig c = small_config();
  c.prediction = PredictionSpec{3, 0.3};
  c.hotspot = HotSpotSpec{2, 120};
  std::ostringstream a, b, other;
  run(c, &a);
  run(c, &b);
  CHECK(a.str() == b.str());
  c.seed = 2;
  run(c, &other);
  CHECK(a.str() != other.str());
}

TEST_CASE("warmup slots are excluded from averages") {
  SimConfig c = small_config();
  const RunSummary s = run(c);
  CHECK(s.slots == static_cast<std::size_t>(c.horizon - c.warmup));
}
