#include <doctest.h>

#include <sstream>

#include "poscad/metrics.hpp"

using namespace poscad;

namespace {

// Three switches, two controllers; only the pairs used below matter.
CostMatrix small_example() {
  CostMatrix c;
  c.num_switches = 3;
  c.num_controllers = 2;
  c.hop_counts = {1, 3,   // s1
                  1, 3,   // s2
                  4, 3};  // s3
  c.computation = {2.0, 2.0, 2.0};
  return c;
}

}  // namespace

TEST_CASE("two association choices for the same arrivals") {
  const CostMatrix c = small_example();
  // s1, s2 to c1 and s3 local
  Decision a{{{0, 3}, {0, 2}, {std::nullopt, 2}}};
  // s1 to c1, s3 to c2 and s2 local
  Decision b{{{0, 3}, {std::nullopt, 2}, {1, 2}}};
  const auto ca = slot_costs(a, c);
  const auto cb = slot_costs(b, c);
  CHECK(ca.communication == 5.0);
  CHECK(ca.computation == 4.0);
  CHECK(ca.communication + ca.computation == 9.0);
  CHECK(cb.communication + cb.computation == 13.0);
  CHECK(a.association(0, 0) == 1);
  CHECK(a.association(2, 0) == 0);
  CHECK(a.association(2, 1) == 0);
}

TEST_CASE("weighted backlog and lyapunov") {
  const std::vector<std::size_t> qc{1, 2}, qs{3}, qp{4, 5};
  CHECK(weighted_backlog(qc, qs, qp, 1.0, 1.0) == 15.0);
  CHECK(weighted_backlog(qc, qs, qp, 2.0, 3.0) == 3 + 6 + 27);
  CHECK(lyapunov(qc, qs, qp, 1.0, 1.0) == 0.5 * (1 + 4 + 9 + 16 + 25));
  CHECK(lyapunov(qc, qs, qp, 2.0, 0.5) == 0.5 * (5 + 2 * 9 + 0.5 * 41));
}

TEST_CASE("population variance") {
  CHECK(population_variance(std::vector<std::size_t>{}) == 0.0);
  CHECK(population_variance(std::vector<std::size_t>{7}) == 0.0);
  CHECK(population_variance(std::vector<std::size_t>{2, 4, 4, 4, 5, 5, 7, 9}) == 4.0);
}

TEST_CASE("summary averages") {
  SummaryAccumulator acc(2.0, 10.0);
  SlotRecord a;
  a.f = 4;
  a.g = 1;
  a.h = 10;
  a.controller_backlogs = {0, 2};
  a.completions = 3;
  a.sum_response_slots = 3;
  SlotRecord b = a;
  b.f = 2;
  b.completions = 1;
  b.sum_response_slots = 5;
  b.phantom_completions = 2;
  acc.add(a);
  acc.add(b);
  const RunSummary s = acc.summary();
  CHECK(s.slots == 2);
  CHECK(s.avg_total_cost == doctest::Approx((4 + 2 + 2 * 2) / 2.0));
  CHECK(s.avg_backlog == 10.0);
  CHECK(s.backlog_variance == 1.0);
  CHECK(s.completions == 4);
  CHECK(s.phantom_completions == 2);
  CHECK(s.avg_response_slots == 2.0);
  CHECK(s.avg_response_ms == 20.0);
}

TEST_CASE("slot csv layout") {
  std::ostringstream out;
  write_slot_csv_header(out);
  SlotRecord r;
  r.t = 3;
  r.f = 1.5;
  r.g = 2;
  r.h = 4;
  r.controller_backlogs = {1, 3};
  r.completions = 2;
  r.sum_response_slots = 1;
  r.phantom_completions = 1;
  write_slot_csv_row(out, r, 1.0);
  CHECK(out.str() ==
        "t,f,g,total_cost,h,qc_var,completions,avg_resp_slots,phantoms\n"
        "3,1.500000,2.000000,3.500000,4.000000,1.000000,2,0.500000,1\n");
}
