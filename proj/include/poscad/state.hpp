#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <vector>

namespace poscad {

/// A run of identical requests: same origin, arrival slot, admission slot and
/// phantom flag. Queues hold batches rather than one record per request.
struct RequestBatch {
  std::uint32_t origin = 0;
  bool phantom = false;  // over-predicted; never actually arrives
  std::int64_t arrival_slot = 0;
  std::int64_t admission_slot = 0;
  std::size_t count = 0;

  bool same_kind(const RequestBatch& o) const {
    return origin == o.origin && phantom == o.phantom && arrival_slot == o.arrival_slot &&
           admission_slot == o.admission_slot;
  }
};

struct ServeResult {
  std::size_t served = 0;
  std::size_t completions = 0;  // non-phantom
  std::int64_t sum_response_slots = 0;
  std::size_t phantom_completions = 0;
};

/// FIFO processing queue of a switch or a controller.
class RequestQueue {
 public:
  void enqueue(const RequestBatch& batch);
  void enqueue(const std::vector<RequestBatch>& batches);

  /// Serves min(backlog, capacity) oldest requests at slot `now`. Response
  /// time of a real request is max(0, now - arrival_slot); phantoms are
  /// counted apart. Served pieces are appended to `served` when given.
  ServeResult serve(std::size_t capacity, std::int64_t now, std::vector<RequestBatch>* served = nullptr);

  std::size_t backlog() const { return backlog_; }
  bool empty() const { return backlog_ == 0; }
  const std::deque<RequestBatch>& batches() const { return batches_; }

 private:
  std::deque<RequestBatch> batches_;
  std::size_t backlog_ = 0;
};

/// Outcome of revealing the actual arrivals of the window's current slot.
struct Reconciliation {
  std::size_t predicted = 0;
  std::size_t treated = 0;
  std::size_t actual = 0;
  std::size_t untreated = 0;  // new Q^(0)
  std::size_t phantoms = 0;   // pre-admitted in excess of actual
  long correction = 0;        // untreated - (predicted - treated)
};

/// A switch's lookahead counters Q^(0..D_i): untreated requests per slot of
/// the prediction window. Slot d = 0 is the current slot.
class PredictionWindow {
 public:
  struct Slot {
    std::int64_t slot = 0;
    std::size_t predicted = 0;
    std::size_t actual = 0;  // ground truth, used only to label phantoms
    std::size_t treated = 0;
    std::size_t untreated = 0;
  };

  PredictionWindow(std::uint32_t origin, int window_size);

  /// Appends the farthest slot with `predicted` untreated requests.
  void push_far(std::int64_t slot, std::size_t predicted, std::size_t actual);

  /// Reveals the current slot's arrivals: Q^(0) = max(actual - treated, 0).
  Reconciliation reconcile_current(std::size_t actual_now);

  /// Admits `count` requests, current slot first, then later slots in
  /// deadline order. Requires Q^(0) <= count <= Q^p. Drained requests are
  /// marked treated; those beyond a slot's actual arrivals are phantoms.
  std::vector<RequestBatch> admit(std::size_t count, std::int64_t now);

  /// End-of-slot slide: drop the current slot, reconcile the next one
  /// against `actual_next`, then append the new far slot.
  Reconciliation slide(std::size_t actual_next, std::int64_t far_slot, std::size_t far_predicted,
                       std::size_t far_actual);

  std::size_t current() const { return slots_.empty() ? 0 : slots_.front().untreated; }
  std::size_t total() const { return total_; }
  std::size_t at(std::size_t d) const { return slots_.at(d).untreated; }
  int window_size() const { return window_size_; }
  const std::deque<Slot>& slots() const { return slots_; }

 private:
  std::uint32_t origin_;
  int window_size_;
  std::deque<Slot> slots_;
  std::size_t total_ = 0;
};

}  // namespace poscad
