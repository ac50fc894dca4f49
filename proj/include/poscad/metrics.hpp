#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "poscad/policy.hpp"
#include "poscad/topology.hpp"

namespace poscad {

/// One slot's association and admission decisions for every switch.
struct Decision {
  std::vector<SwitchDecision> switches;

  /// X_i,j as 0/1.
  int association(std::size_t sw, std::size_t ctrl) const {
    return switches[sw].controller == ctrl ? 1 : 0;
  }
};

struct SlotCosts {
  double communication = 0.0;  // f
  double computation = 0.0;    // g
};

/// f = sum M_i,j X_i,j Y_i and g = sum P_i (1 - sum_j X_i,j) Y_i.
SlotCosts slot_costs(const Decision& decision, const CostMatrix& costs);

/// h = sum Q^c + beta1 sum Q^s + beta2 sum Q^p.
double weighted_backlog(std::span<const std::size_t> qc, std::span<const std::size_t> qs,
                        std::span<const std::size_t> qp, double beta1, double beta2);

/// L = (sum (Q^c)^2 + beta1 sum (Q^s)^2 + beta2 sum (Q^p)^2) / 2.
double lyapunov(std::span<const std::size_t> qc, std::span<const std::size_t> qs,
                std::span<const std::size_t> qp, double beta1, double beta2);

/// Population variance; 0 for fewer than two values.
double population_variance(std::span<const std::size_t> values);

struct SlotRecord {
  std::int64_t t = 0;
  double f = 0.0;
  double g = 0.0;
  double h = 0.0;
  std::vector<std::size_t> controller_backlogs;
  std::vector<std::size_t> switch_backlogs;
  std::size_t completions = 0;
  std::int64_t sum_response_slots = 0;
  std::size_t phantom_completions = 0;

  double total_cost(double gamma) const { return f + gamma * g; }
  double controller_variance() const { return population_variance(controller_backlogs); }
};

struct RunSummary {
  std::size_t slots = 0;  // averaged slots (horizon - warmup)
  double avg_total_cost = 0.0;
  double avg_communication_cost = 0.0;
  double avg_computation_cost = 0.0;
  double avg_backlog = 0.0;
  double backlog_variance = 0.0;  // mean over slots of var{Q^c_j}
  std::size_t completions = 0;
  std::size_t phantom_completions = 0;
  double avg_response_slots = 0.0;
  double avg_response_ms = 0.0;
};

/// Time averages over the slots it is fed.
class SummaryAccumulator {
 public:
  SummaryAccumulator(double gamma, double slot_ms) : gamma_(gamma), slot_ms_(slot_ms) {}

  void add(const SlotRecord& record);
  RunSummary summary() const;

 private:
  double gamma_;
  double slot_ms_;
  std::size_t slots_ = 0;
  double sum_f_ = 0.0;
  double sum_g_ = 0.0;
  double sum_h_ = 0.0;
  double sum_var_ = 0.0;
  std::size_t completions_ = 0;
  std::size_t phantoms_ = 0;
  std::int64_t sum_response_ = 0;
};

/// Per-slot CSV: t,f,g,total_cost,h,qc_var,completions,avg_resp_slots,phantoms
void write_slot_csv_header(std::ostream& out);
void write_slot_csv_row(std::ostream& out, const SlotRecord& record, double gamma);

}  // namespace poscad
