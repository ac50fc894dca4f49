#include "poscad/metrics.hpp"

#include <fmt/ostream.h>

#include "poscad/errors.hpp"

namespace poscad {

SlotCosts slot_costs(const Decision& decision, const CostMatrix& costs) {
  if (decision.switches.size() != costs.num_switches) {
    throw ContractViolation("decision and cost matrix disagree on the switch count");
  }
  SlotCosts c;
  for (std::size_t i = 0; i < decision.switches.size(); ++i) {
    const auto& d = decision.switches[i];
    const double y = static_cast<double>(d.admit);
    if (d.controller) {
      c.communication += costs.hops(i, *d.controller) * y;
    } else {
      c.computation += costs.computation[i] * y;
    }
  }
  return c;
}

namespace {

double sum(std::span<const std::size_t> v) {
  double s = 0.0;
  for (auto x : v) s += static_cast<double>(x);
  return s;
}

double sum_squares(std::span<const std::size_t> v) {
  double s = 0.0;
  for (auto x : v) s += static_cast<double>(x) * static_cast<double>(x);
  return s;
}

}  // namespace

double weighted_backlog(std::span<const std::size_t> qc, std::span<const std::size_t> qs,
                        std::span<const std::size_t> qp, double beta1, double beta2) {
  return sum(qc) + beta1 * sum(qs) + beta2 * sum(qp);
}

double lyapunov(std::span<const std::size_t> qc, std::span<const std::size_t> qs,
                std::span<const std::size_t> qp, double beta1, double beta2) {
  return 0.5 * (sum_squares(qc) + beta1 * sum_squares(qs) + beta2 * sum_squares(qp));
}

double population_variance(std::span<const std::size_t> values) {
  if (values.size() < 2) return 0.0;
  const double n = static_cast<double>(values.size());
  const double mean = sum(values) / n;
  double acc = 0.0;
  for (auto x : values) {
    const double d = static_cast<double>(x) - mean;
    acc += d * d;
  }
  return acc / n;
}

void SummaryAccumulator::add(const SlotRecord& record) {
  ++slots_;
  sum_f_ += record.f;
  sum_g_ += record.g;
  sum_h_ += record.h;
  sum_var_ += record.controller_variance();
  completions_ += record.completions;
  phantoms_ += record.phantom_completions;
  sum_response_ += record.sum_response_slots;
}

RunSummary SummaryAccumulator::summary() const {
  RunSummary s;
  s.slots = slots_;
  s.completions = completions_;
  s.phantom_completions = phantoms_;
  if (slots_ == 0) return s;
  const double n = static_cast<double>(slots_);
  s.avg_communication_cost = sum_f_ / n;
  s.avg_computation_cost = sum_g_ / n;
  s.avg_total_cost = (sum_f_ + gamma_ * sum_g_) / n;
  s.avg_backlog = sum_h_ / n;
  s.backlog_variance = sum_var_ / n;
  if (completions_ > 0) {
    s.avg_response_slots = static_cast<double>(sum_response_) / static_cast<double>(completions_);
    s.avg_response_ms = s.avg_response_slots * slot_ms_;
  }
  return s;
}

void write_slot_csv_header(std::ostream& out) {
  out << "t,f,g,total_cost,h,qc_var,completions,avg_resp_slots,phantoms\n";
}

void write_slot_csv_row(std::ostream& out, const SlotRecord& r, double gamma) {
  const double avg_resp =
      r.completions > 0 ? static_cast<double>(r.sum_response_slots) / static_cast<double>(r.completions) : 0.0;
  fmt::print(out, "{},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{},{:.6f},{}\n", r.t, r.f, r.g, r.total_cost(gamma), r.h,
             r.controller_variance(), r.completions, avg_resp, r.phantom_completions);
}

}  // namespace poscad
