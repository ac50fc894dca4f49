#include <doctest.h>

#include <random>

#include "poscad/errors.hpp"
#include "poscad/policy.hpp"

using namespace poscad;

namespace {

struct Instance {
  PolicyParams params;
  std::vector<std::size_t> qc;
  std::vector<int> hops;
  SwitchView view;
};

Instance random_instance(std::mt19937_64& rng) {
  Instance in;
  const double vs[] = {0.0, 1.0, 10.0};
  in.params.V = vs[rng() % 3];
  in.params.gamma = static_cast<double>(rng() % 51);
  in.params.beta1 = static_cast<double>(1 + rng() % 50);
  in.params.beta2 = static_cast<double>(1 + rng() % 50);
  const std::size_t c = 1 + rng() % 4;
  for (std::size_t j = 0; j < c; ++j) {
    in.qc.push_back(rng() % 51);
    in.hops.push_back(static_cast<int>(rng() % 51));
  }
  in.view.qp = rng() % 21;
  in.view.q0 = in.view.qp == 0 ? 0 : rng() % (in.view.qp + 1);
  in.view.qs = rng() % 51;
  in.view.computation_cost = static_cast<double>(rng() % 51);
  in.view.hops = in.hops;
  return in;
}

double brute_force_best(const Instance& in, bool devolution) {
  double best = -1e300;
  for (std::size_t y = in.view.q0; y <= in.view.qp; ++y) {
    if (devolution) best = std::max(best, subproblem_objective(in.params, in.view, in.qc, {std::nullopt, y}, true));
    for (std::size_t j = 0; j < in.qc.size(); ++j) {
      best = std::max(best, subproblem_objective(in.params, in.view, in.qc, {j, y}, devolution));
    }
  }
  return best;
}

}  // namespace

TEST_CASE("l and u follow their definitions") {
  PolicyParams p{2.0, 1.5, 3.0, 4.0};
  CHECK(compute_l(p, 10, 2, 5) == 4.0 * 10 - 3.0 * 2 - 2.0 * 1.5 * 5);
  CHECK(compute_u(p, 2, 7, 5, 3) == (3.0 * 2 - 7) + 2.0 * (1.5 * 5 - 3));
}

TEST_CASE("all u negative means local processing") {
  PolicyParams p{1.0, 1.0, 1.0, 1.0};
  const std::vector<int> hops{5, 6};
  const std::vector<std::size_t> qc{10, 10};
  SwitchView v{8, 2, 0, 3.0, hops};
  Rng rng(1);
  const auto d = poscad_decide(p, v, qc, true, rng);
  CHECK_FALSE(d.controller.has_value());
  // l = 8 - 0 - 3 > 0
  CHECK(d.admit == 8);
}

TEST_CASE("local with l <= 0 admits only arrived requests") {
  PolicyParams p{10.0, 1.0, 1.0, 1.0};
  const std::vector<int> hops{5};
  const std::vector<std::size_t> qc{10};
  SwitchView v{8, 2, 0, 3.0, hops};
  Rng rng(1);
  const auto d = poscad_decide(p, v, qc, true, rng);
  CHECK_FALSE(d.controller.has_value());
  CHECK(d.admit == 2);
}

TEST_CASE("upload goes to the largest u") {
  PolicyParams p{1.0, 1.0, 1.0, 1.0};
  const std::vector<int> hops{1, 2, 1};
  const std::vector<std::size_t> qc{5, 0, 2};
  SwitchView v{20, 4, 0, 4.0, hops};
  Rng rng(1);
  const auto d = poscad_decide(p, v, qc, true, rng);
  REQUIRE(d.controller.has_value());
  // u = -5+3, 0+2, -2+3
  CHECK(*d.controller == 1);
  CHECK(d.admit == 20);
}

TEST_CASE("ties between controllers are broken uniformly") {
  PolicyParams p{0.0, 1.0, 1.0, 1.0};
  const std::vector<int> hops{1, 1, 1};
  const std::vector<std::size_t> qc{3, 3, 3};
  SwitchView v{10, 0, 5, 1.0, hops};
  Rng rng(5);
  std::vector<int> hits(3, 0);
  for (int i = 0; i < 30000; ++i) hits[*poscad_decide(p, v, qc, true, rng).controller]++;
  for (int h : hits) CHECK(h == doctest::Approx(10000).epsilon(0.05));
}

TEST_CASE("devolution off never processes locally") {
  PolicyParams p{1.0, 1.0, 1.0, 1.0};
  const std::vector<int> hops{50};
  const std::vector<std::size_t> qc{50};
  SwitchView v{8, 2, 0, 0.0, hops};
  Rng rng(1);
  const auto d = poscad_decide(p, v, qc, false, rng);
  REQUIRE(d.controller.has_value());
  CHECK(d.admit == 2);
  CHECK_THROWS_AS(subproblem_objective(p, v, qc, {std::nullopt, 2}, false), ContractViolation);
}

TEST_CASE("property: decision maximizes the per-switch subproblem") {
  std::mt19937_64 rng(2024);
  Rng tie(7);
  for (int i = 0; i < 20000; ++i) {
    const Instance in = random_instance(rng);
    for (bool devolution : {true, false}) {
      const SwitchDecision d = poscad_decide(in.params, in.view, in.qc, devolution, tie);
      REQUIRE(d.admit >= in.view.q0);
      REQUIRE(d.admit <= in.view.qp);
      if (!devolution) REQUIRE(d.controller.has_value());
      REQUIRE(subproblem_objective(in.params, in.view, in.qc, d, devolution) == brute_force_best(in, devolution));
    }
  }
}

TEST_CASE("static picks the nearest controller, lowest id on ties") {
  const std::vector<int> hops{3, 1, 1, 2};
  SwitchView v{9, 4, 0, 0.0, hops};
  const auto d = static_decide(v);
  CHECK(d.controller == std::optional<std::size_t>(1));
  CHECK(d.admit == 4);
}

TEST_CASE("jsq picks the shortest controller queue") {
  const std::vector<int> hops{1, 1, 1};
  const std::vector<std::size_t> qc{9, 2, 4};
  SwitchView v{9, 4, 0, 0.0, hops};
  Rng rng(1);
  const auto d = jsq_decide(v, qc, rng);
  CHECK(d.controller == std::optional<std::size_t>(1));
  CHECK(d.admit == 4);
}

TEST_CASE("random spreads uniformly and admits arrived requests") {
  const std::vector<int> hops{1, 1, 1, 1};
  SwitchView v{9, 4, 0, 0.0, hops};
  Rng rng(3);
  std::vector<int> hits(4, 0);
  for (int i = 0; i < 40000; ++i) {
    const auto d = random_decide(v, 4, rng);
    CHECK(d.admit == 4);
    hits[*d.controller]++;
  }
  for (int h : hits) CHECK(h == doctest::Approx(10000).epsilon(0.05));
}

TEST_CASE("poscad with V = 0 and no devolution is join-the-shortest-queue") {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 5000; ++i) {
    const std::size_t c = 2 + rng() % 3;
    std::vector<std::size_t> qc(c);
    std::vector<int> hops(c);
    for (std::size_t j = 0; j < c; ++j) {
      qc[j] = rng() % 100;
      hops[j] = static_cast<int>(1 + rng() % 5);
    }
    SwitchView v{10, 3, 0, 3.7, hops};
    Rng a(i), b(i);
    const auto d = poscad_decide(PolicyParams{0.0, 1.0, 1.0, 1.0}, v, qc, false, a);
    CHECK(d.controller == jsq_decide(v, qc, b).controller);
  }
}

TEST_CASE("policy names round trip") {
  for (auto k : {PolicyKind::poscad, PolicyKind::static_assoc, PolicyKind::random, PolicyKind::jsq}) {
    CHECK(parse_policy_kind(to_string(k)) == k);
  }
  CHECK_FALSE(parse_policy_kind("greedy").has_value());
}
