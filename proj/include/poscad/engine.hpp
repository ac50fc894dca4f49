#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <vector>

#include "poscad/metrics.hpp"
#include "poscad/policy.hpp"
#include "poscad/state.hpp"
#include "poscad/topology.hpp"
#include "poscad/traffic.hpp"

namespace poscad {

struct SimConfig {
  TopologySpec topology;
  std::vector<double> computation_cost;  // empty: P = mean hop count
  ArrivalSpec arrivals;
  std::optional<HotSpotSpec> hotspot = HotSpotSpec{};
  PredictionSpec prediction;
  PolicyConfig policy;
  std::size_t controller_capacity = 600;
  std::size_t switch_capacity = 10;
  std::int64_t horizon = 100000;
  std::int64_t warmup = 10000;
  std::uint64_t seed = 1;
};

/// Backlogs every switch decides from, frozen at the start of a slot.
struct Snapshot {
  std::vector<std::size_t> qc;
  std::vector<std::size_t> qs;
  std::vector<std::size_t> qp;
  std::vector<std::size_t> q0;
};

/// Capacity of controller/switch `id` in slot `t`.
using CapacityFn = std::function<std::size_t(std::int64_t t, std::size_t id)>;

/// Everything a simulation runs on. Built from a SimConfig, or by hand for
/// small scripted scenarios.
struct World {
  CostMatrix costs;
  std::vector<std::size_t> controller_capacity;
  std::vector<std::size_t> switch_capacity;
  CapacityFn controller_capacity_at;  // overrides the constants when set
  CapacityFn switch_capacity_at;
  std::vector<int> windows;  // D_i
  std::unique_ptr<TrafficSource> traffic;
  PolicyConfig policy;
  std::uint64_t seed = 1;
};

World make_world(const SimConfig& config);

class Simulation {
 public:
  using DecisionHook = std::function<void(std::int64_t t, const Snapshot&, const Decision&)>;
  using SlotHook = std::function<void(std::int64_t t, const Snapshot&, const SlotRecord&)>;

  explicit Simulation(World world);

  /// Runs slot now() through all phases and advances the clock.
  SlotRecord step();

  std::int64_t now() const { return now_; }
  std::size_t num_switches() const { return world_.costs.num_switches; }
  std::size_t num_controllers() const { return world_.costs.num_controllers; }
  const CostMatrix& costs() const { return world_.costs; }
  const PolicyConfig& policy() const { return world_.policy; }

  const RequestQueue& controller_queue(std::size_t j) const { return controller_queues_[j]; }
  const RequestQueue& switch_queue(std::size_t i) const { return switch_queues_[i]; }
  const PredictionWindow& window(std::size_t i) const { return windows_[i]; }

  /// Places `count` already-arrived requests in switch `sw`'s local queue.
  void preload_switch_queue(std::size_t sw, std::size_t count, std::int64_t arrival_slot);

  /// Called after decisions are made, before any queue changes.
  void on_decision(DecisionHook hook) { decision_hook_ = std::move(hook); }
  /// Called once the slot is complete.
  void on_slot_end(SlotHook hook) { slot_hook_ = std::move(hook); }

 private:
  Snapshot take_snapshot() const;
  [[noreturn]] void fail(const std::string& what, std::size_t id) const;

  World world_;
  std::vector<PredictionWindow> windows_;
  std::vector<RequestQueue> switch_queues_;
  std::vector<RequestQueue> controller_queues_;
  std::vector<Rng> tie_rngs_;
  std::int64_t now_ = 0;
  DecisionHook decision_hook_;
  SlotHook slot_hook_;
};

/// Simulates `config.horizon` slots; averages cover slots >= warmup. Every
/// slot is written to `slot_csv` when given.
RunSummary run(const SimConfig& config, std::ostream* slot_csv = nullptr);

}  // namespace poscad
