#include "poscad/policy.hpp"

#include <vector>

#include "poscad/errors.hpp"

namespace poscad {

std::string to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::poscad: return "poscad";
    case PolicyKind::static_assoc: return "static";
    case PolicyKind::random: return "random";
    case PolicyKind::jsq: return "jsq";
  }
  return "unknown";
}

std::optional<PolicyKind> parse_policy_kind(const std::string& name) {
  if (name == "poscad") return PolicyKind::poscad;
  if (name == "static") return PolicyKind::static_assoc;
  if (name == "random") return PolicyKind::random;
  if (name == "jsq") return PolicyKind::jsq;
  return std::nullopt;
}

double compute_l(const PolicyParams& p, double qp, double qs, double computation_cost) {
  return p.beta2 * qp - p.beta1 * qs - p.V * p.gamma * computation_cost;
}

double compute_u(const PolicyParams& p, double qs, double qc, double computation_cost, double hops) {
  return (p.beta1 * qs - qc) + p.V * (p.gamma * computation_cost - hops);
}

namespace {

// l + u_j with the P terms cancelled.
double upload_gain(const PolicyParams& p, double qp, double qc, double hops) {
  return p.beta2 * qp - qc - p.V * hops;
}

// Index of a maximum of `score`, uniform among exact ties. Draws from `rng`
// only when there is a tie.
std::size_t argmax_uniform(const std::vector<double>& score, Rng& rng) {
  std::size_t best = 0;
  std::size_t ties = 1;
  for (std::size_t j = 1; j < score.size(); ++j) {
    if (score[j] > score[best]) {
      best = j;
      ties = 1;
    } else if (score[j] == score[best]) {
      ++ties;
    }
  }
  if (ties == 1) return best;
  std::uniform_int_distribution<std::size_t> pick(0, ties - 1);
  std::size_t nth = pick(rng);
  for (std::size_t j = 0; j < score.size(); ++j) {
    if (score[j] == score[best]) {
      if (nth == 0) return j;
      --nth;
    }
  }
  return best;
}

void check_view(const SwitchView& view, std::span<const std::size_t> qc) {
  if (view.q0 > view.qp) throw ContractViolation("switch view has Q0 > Qp");
  if (view.hops.size() != qc.size()) throw ContractViolation("hop row and controller backlogs differ in size");
}

}  // namespace

double subproblem_objective(const PolicyParams& p, const SwitchView& view, std::span<const std::size_t> qc,
                            const SwitchDecision& d, bool devolution) {
  const double y = static_cast<double>(d.admit);
  const double qp = static_cast<double>(view.qp);
  const double qs = static_cast<double>(view.qs);
  if (!devolution) {
    if (!d.controller) throw ContractViolation("local processing is disabled");
    const auto j = *d.controller;
    return upload_gain(p, qp, static_cast<double>(qc[j]), view.hops[j]) * y;
  }
  double coeff = compute_l(p, qp, qs, view.computation_cost);
  if (d.controller) {
    const auto j = *d.controller;
    coeff += compute_u(p, qs, static_cast<double>(qc[j]), view.computation_cost, view.hops[j]);
  }
  return coeff * y;
}

SwitchDecision poscad_decide(const PolicyParams& p, const SwitchView& view, std::span<const std::size_t> qc,
                             bool devolution, Rng& tie_rng) {
  check_view(view, qc);
  if (qc.empty()) throw ContractViolation("no controllers to decide over");
  const double qp = static_cast<double>(view.qp);
  const double qs = static_cast<double>(view.qs);

  std::vector<double> u(qc.size());
  bool any_nonnegative = false;
  for (std::size_t j = 0; j < qc.size(); ++j) {
    u[j] = devolution ? compute_u(p, qs, static_cast<double>(qc[j]), view.computation_cost, view.hops[j])
                      : p.beta1 * qs - static_cast<double>(qc[j]) - p.V * view.hops[j];
    any_nonnegative = any_nonnegative || u[j] >= 0.0;
  }

  SwitchDecision d;
  if (devolution && !any_nonnegative) {
    const double l = compute_l(p, qp, qs, view.computation_cost);
    d.admit = l > 0.0 ? view.qp : view.q0;
    return d;
  }
  const std::size_t best = argmax_uniform(u, tie_rng);
  d.controller = best;
  const double gain = upload_gain(p, qp, static_cast<double>(qc[best]), view.hops[best]);
  d.admit = gain > 0.0 ? view.qp : view.q0;
  return d;
}

SwitchDecision static_decide(const SwitchView& view) {
  if (view.hops.empty()) throw ContractViolation("no controllers to decide over");
  std::size_t best = 0;
  for (std::size_t j = 1; j < view.hops.size(); ++j) {
    if (view.hops[j] < view.hops[best]) best = j;
  }
  return SwitchDecision{best, view.q0};
}

SwitchDecision random_decide(const SwitchView& view, std::size_t num_controllers, Rng& rng) {
  if (num_controllers == 0) throw ContractViolation("no controllers to decide over");
  std::uniform_int_distribution<std::size_t> pick(0, num_controllers - 1);
  return SwitchDecision{pick(rng), view.q0};
}

SwitchDecision jsq_decide(const SwitchView& view, std::span<const std::size_t> qc, Rng& rng) {
  if (qc.empty()) throw ContractViolation("no controllers to decide over");
  std::vector<double> score(qc.size());
  for (std::size_t j = 0; j < qc.size(); ++j) score[j] = -static_cast<double>(qc[j]);
  return SwitchDecision{argmax_uniform(score, rng), view.q0};
}

SwitchDecision decide(const PolicyConfig& config, const SwitchView& view, std::span<const std::size_t> qc, Rng& rng) {
  switch (config.kind) {
    case PolicyKind::poscad: return poscad_decide(config.params, view, qc, config.devolution, rng);
    case PolicyKind::static_assoc: return static_decide(view);
    case PolicyKind::random: return random_decide(view, qc.size(), rng);
    case PolicyKind::jsq: return jsq_decide(view, qc, rng);
  }
  throw ContractViolation("unknown policy kind");
}

}  // namespace poscad
