#include "poscad/engine.hpp"

#include <fmt/format.h>

#include "poscad/errors.hpp"

namespace poscad {

World make_world(const SimConfig& config) {
  const Topology topo = build_topology(config.topology, config.seed);
  World world;
  world.costs = comm_costs(topo, config.computation_cost);
  world.controller_capacity.assign(topo.num_controllers(), config.controller_capacity);
  world.switch_capacity.assign(topo.num_switches, config.switch_capacity);
  world.windows = sample_windows(config.prediction, topo.num_switches, config.seed);
  world.traffic = std::make_unique<StochasticTraffic>(config.arrivals, config.hotspot, topo,
                                                      sigma_from_error_rate(config.prediction.error_rate),
                                                      config.seed);
  world.policy = config.policy;
  world.seed = config.seed;
  return world;
}

Simulation::Simulation(World world) : world_(std::move(world)) {
  const std::size_t n = world_.costs.num_switches;
  const std::size_t c = world_.costs.num_controllers;
  if (!world_.traffic) throw ContractViolation("simulation needs a traffic source");
  if (c == 0) throw ContractViolation("simulation needs at least one controller");
  if (world_.windows.empty()) world_.windows.assign(n, 0);
  if (world_.windows.size() != n || world_.switch_capacity.size() != n || world_.controller_capacity.size() != c ||
      world_.costs.computation.size() != n) {
    throw ContractViolation("world dimensions disagree with the cost matrix");
  }

  switch_queues_.resize(n);
  controller_queues_.resize(c);
  windows_.reserve(n);
  tie_rngs_.reserve(n);
  auto& traffic = *world_.traffic;
  for (std::size_t i = 0; i < n; ++i) {
    const int w = world_.windows[i];
    PredictionWindow win(static_cast<std::uint32_t>(i), w);
    for (std::int64_t d = 0; d <= w; ++d) {
      const std::size_t actual = traffic.actual(i, d);
      win.push_far(d, d == 0 ? actual : traffic.predicted(i, d), actual);
    }
    win.reconcile_current(traffic.actual(i, 0));
    windows_.push_back(std::move(win));
    tie_rngs_.push_back(make_rng(world_.seed, StreamTag::tie_break, i));
  }
}

void Simulation::preload_switch_queue(std::size_t sw, std::size_t count, std::int64_t arrival_slot) {
  switch_queues_.at(sw).enqueue(
      RequestBatch{static_cast<std::uint32_t>(sw), false, arrival_slot, arrival_slot, count});
}

Snapshot Simulation::take_snapshot() const {
  Snapshot s;
  s.qc.reserve(controller_queues_.size());
  for (const auto& q : controller_queues_) s.qc.push_back(q.backlog());
  for (std::size_t i = 0; i < windows_.size(); ++i) {
    s.qs.push_back(switch_queues_[i].backlog());
    s.qp.push_back(windows_[i].total());
    s.q0.push_back(windows_[i].current());
  }
  return s;
}

void Simulation::fail(const std::string& what, std::size_t id) const {
  std::string dump = fmt::format("invariant violated at slot {} (id {}): {}\nQc:", now_, id, what);
  for (const auto& q : controller_queues_) dump += fmt::format(" {}", q.backlog());
  dump += "\nQs:";
  for (const auto& q : switch_queues_) dump += fmt::format(" {}", q.backlog());
  dump += "\nQp:";
  for (const auto& w : windows_) dump += fmt::format(" {}", w.total());
  throw InvariantViolation(dump);
}

SlotRecord Simulation::step() {
  const std::int64_t t = now_;
  const std::size_t n = num_switches();
  const std::size_t c = num_controllers();
  const auto& costs = world_.costs;
  auto& traffic = *world_.traffic;

  // Decisions see only the slot-start snapshot.
  const Snapshot snap = take_snapshot();
  Decision decision;
  decision.switches.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    SwitchView view{snap.qp[i], snap.q0[i], snap.qs[i], costs.computation[i], {costs.row(i), c}};
    decision.switches.push_back(decide(world_.policy, view, snap.qc, tie_rngs_[i]));
    const auto& d = decision.switches[i];
    if (d.admit < snap.q0[i] || d.admit > snap.qp[i]) fail("admission outside [Q0, Qp]", i);
    if (d.controller && *d.controller >= c) fail("association to an unknown controller", i);
    if (!d.controller && !world_.policy.devolution) fail("local processing while devolution is off", i);
  }
  if (decision_hook_) decision_hook_(t, snap, decision);

  // Admission and forwarding, in switch-id order.
  const SlotCosts slot_cost = slot_costs(decision, costs);
  std::vector<std::size_t> local_in(n, 0);
  std::vector<std::size_t> controller_in(c, 0);
  double charged_f = 0.0;
  double charged_g = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& d = decision.switches[i];
    const auto batches = windows_[i].admit(d.admit, t);
    std::size_t admitted = 0;
    for (const auto& b : batches) admitted += b.count;
    if (admitted != d.admit) fail("admitted records disagree with Y", i);
    if (d.controller) {
      controller_queues_[*d.controller].enqueue(batches);
      controller_in[*d.controller] += admitted;
      charged_f += costs.hops(i, *d.controller) * static_cast<double>(admitted);
    } else {
      switch_queues_[i].enqueue(batches);
      local_in[i] += admitted;
      charged_g += costs.computation[i] * static_cast<double>(admitted);
    }
  }
  if (charged_f != slot_cost.communication || charged_g != slot_cost.computation) {
    fail("per-request charges disagree with f and g", 0);
  }

  // FIFO service.
  SlotRecord record;
  record.t = t;
  record.f = slot_cost.communication;
  record.g = slot_cost.computation;
  auto absorb = [&](const ServeResult& r) {
    record.completions += r.completions;
    record.sum_response_slots += r.sum_response_slots;
    record.phantom_completions += r.phantom_completions;
  };
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t cap = world_.switch_capacity_at ? world_.switch_capacity_at(t, i) : world_.switch_capacity[i];
    absorb(switch_queues_[i].serve(cap, t));
    const std::size_t before = snap.qs[i] + local_in[i];
    if (switch_queues_[i].backlog() != (before > cap ? before - cap : 0)) fail("switch queue update", i);
  }
  for (std::size_t j = 0; j < c; ++j) {
    const std::size_t cap =
        world_.controller_capacity_at ? world_.controller_capacity_at(t, j) : world_.controller_capacity[j];
    absorb(controller_queues_[j].serve(cap, t));
    const std::size_t before = snap.qc[j] + controller_in[j];
    if (controller_queues_[j].backlog() != (before > cap ? before - cap : 0)) fail("controller queue update", j);
  }

  // Window slide with the new far-slot predictions.
  for (std::size_t i = 0; i < n; ++i) {
    const int w = world_.windows[i];
    const std::int64_t far = t + 1 + w;
    const std::size_t far_actual = traffic.actual(i, far);
    // With no lookahead the next slot is observed, not predicted.
    const std::size_t far_predicted = w == 0 ? far_actual : traffic.predicted(i, far);
    const Reconciliation rec = windows_[i].slide(traffic.actual(i, t + 1), far, far_predicted, far_actual);

    if (rec.treated + rec.untreated != rec.actual + rec.phantoms) fail("reconciliation does not balance", i);
    const long expected = static_cast<long>(snap.qp[i]) - static_cast<long>(decision.switches[i].admit) +
                          static_cast<long>(far_predicted) + rec.correction;
    if (static_cast<long>(windows_[i].total()) != expected) fail("prediction queue update", i);
    const auto& slots = windows_[i].slots();
    for (std::size_t d = 0; d < slots.size(); ++d) {
      const std::size_t bound = d == 0 ? slots[d].actual : slots[d].predicted;
      if (slots[d].untreated > bound) fail("lookahead counter exceeds its arrivals", i);
    }
  }
  traffic.release_before(t + 1);

  record.controller_backlogs.reserve(c);
  for (const auto& q : controller_queues_) record.controller_backlogs.push_back(q.backlog());
  std::vector<std::size_t> qp;
  qp.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    record.switch_backlogs.push_back(switch_queues_[i].backlog());
    qp.push_back(windows_[i].total());
  }
  const auto& params = world_.policy.params;
  record.h = weighted_backlog(record.controller_backlogs, record.switch_backlogs, qp, params.beta1, params.beta2);

  ++now_;
  if (slot_hook_) slot_hook_(t, snap, record);
  return record;
}

RunSummary run(const SimConfig& config, std::ostream* slot_csv) {
  Simulation sim(make_world(config));
  SummaryAccumulator acc(config.policy.params.gamma, config.arrivals.slot_ms);
  if (slot_csv) write_slot_csv_header(*slot_csv);
  for (std::int64_t t = 0; t < config.horizon; ++t) {
    const SlotRecord rec = sim.step();
    if (slot_csv) write_slot_csv_row(*slot_csv, rec, config.policy.params.gamma);
    if (t >= config.warmup) acc.add(rec);
  }
  return acc.summary();
}

}  // namespace poscad
