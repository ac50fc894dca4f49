#include "poscad/state.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "poscad/errors.hpp"

namespace poscad {

void RequestQueue::enqueue(const RequestBatch& batch) {
  if (batch.count == 0) return;
  if (!batches_.empty() && batches_.back().same_kind(batch)) {
    batches_.back().count += batch.count;
  } else {
    batches_.push_back(batch);
  }
  backlog_ += batch.count;
}

void RequestQueue::enqueue(const std::vector<RequestBatch>& batches) {
  for (const auto& b : batches) enqueue(b);
}

ServeResult RequestQueue::serve(std::size_t capacity, std::int64_t now, std::vector<RequestBatch>* served) {
  ServeResult result;
  while (capacity > 0 && !batches_.empty()) {
    auto& head = batches_.front();
    const std::size_t take = std::min(capacity, head.count);
    if (head.phantom) {
      result.phantom_completions += take;
    } else {
      result.completions += take;
      result.sum_response_slots += static_cast<std::int64_t>(take) * std::max<std::int64_t>(0, now - head.arrival_slot);
    }
    if (served) {
      RequestBatch piece = head;
      piece.count = take;
      served->push_back(piece);
    }
    result.served += take;
    capacity -= take;
    backlog_ -= take;
    head.count -= take;
    if (head.count == 0) batches_.pop_front();
  }
  return result;
}

PredictionWindow::PredictionWindow(std::uint32_t origin, int window_size)
    : origin_(origin), window_size_(window_size) {
  if (window_size < 0) throw ContractViolation("prediction window size must be >= 0");
}

void PredictionWindow::push_far(std::int64_t slot, std::size_t predicted, std::size_t actual) {
  if (!slots_.empty() && slot != slots_.back().slot + 1) {
    throw ContractViolation(fmt::format("window slot {} does not follow {}", slot, slots_.back().slot));
  }
  slots_.push_back(Slot{slot, predicted, actual, 0, predicted});
  total_ += predicted;
}

Reconciliation PredictionWindow::reconcile_current(std::size_t actual_now) {
  if (slots_.empty()) throw ContractViolation("reconcile on an empty prediction window");
  auto& cur = slots_.front();
  Reconciliation rec;
  rec.predicted = cur.predicted;
  rec.treated = cur.treated;
  rec.actual = actual_now;
  rec.untreated = actual_now > cur.treated ? actual_now - cur.treated : 0;
  rec.phantoms = cur.treated > actual_now ? cur.treated - actual_now : 0;
  rec.correction = static_cast<long>(rec.untreated) - static_cast<long>(cur.untreated);
  total_ = total_ - cur.untreated + rec.untreated;
  cur.untreated = rec.untreated;
  cur.actual = actual_now;
  return rec;
}

std::vector<RequestBatch> PredictionWindow::admit(std::size_t count, std::int64_t now) {
  if (count < current() || count > total_) {
    throw ContractViolation(fmt::format("admission {} outside [Q0={}, Qp={}] for switch {}", count, current(),
                                        total_, origin_));
  }
  std::vector<RequestBatch> out;
  std::size_t remaining = count;
  for (auto& s : slots_) {
    if (remaining == 0) break;
    const std::size_t take = std::min(remaining, s.untreated);
    if (take == 0) continue;
    // Requests numbered past the slot's true arrivals are phantoms.
    const std::size_t real_left = s.actual > s.treated ? s.actual - s.treated : 0;
    const std::size_t real = std::min(take, real_left);
    if (real > 0) out.push_back(RequestBatch{origin_, false, s.slot, now, real});
    if (take > real) out.push_back(RequestBatch{origin_, true, s.slot, now, take - real});
    s.treated += take;
    s.untreated -= take;
    total_ -= take;
    remaining -= take;
  }
  return out;
}

Reconciliation PredictionWindow::slide(std::size_t actual_next, std::int64_t far_slot, std::size_t far_predicted,
                                       std::size_t far_actual) {
  if (slots_.empty()) throw ContractViolation("slide on an empty prediction window");
  if (slots_.front().untreated != 0) {
    throw ContractViolation(fmt::format("switch {} leaves {} arrived requests unadmitted in slot {}", origin_,
                                        slots_.front().untreated, slots_.front().slot));
  }
  slots_.pop_front();
  push_far(far_slot, far_predicted, far_actual);
  return reconcile_current(actual_next);
}

}  // namespace poscad
