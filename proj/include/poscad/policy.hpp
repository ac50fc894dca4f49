#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>

#include "poscad/rng.hpp"

namespace poscad {

/// Trade-off weights of the drift-plus-penalty objective.
struct PolicyParams {
  double V = 100.0;     // cost weight against backlog
  double gamma = 1.0;   // weight of computation cost
  double beta1 = 1.0;   // switch-queue weight
  double beta2 = 1.0;   // prediction-queue weight
};

enum class PolicyKind { poscad, static_assoc, random, jsq };

std::string to_string(PolicyKind kind);
std::optional<PolicyKind> parse_policy_kind(const std::string& name);

struct PolicyConfig {
  PolicyKind kind = PolicyKind::poscad;
  PolicyParams params;
  // When false the local-processing option does not exist: every switch
  // uploads to some controller.
  bool devolution = true;
};

/// What one switch sees at the start of a slot.
struct SwitchView {
  std::size_t qp = 0;  // Q^p, all untreated requests in the window
  std::size_t q0 = 0;  // Q^(0), untreated requests that have arrived
  std::size_t qs = 0;  // local processing backlog
  double computation_cost = 0.0;  // P_i
  std::span<const int> hops;      // M_i,j for every controller
};

/// One switch's share of the slot decision: the controller it uploads to
/// (nullopt = process locally) and how many requests it admits.
struct SwitchDecision {
  std::optional<std::size_t> controller;
  std::size_t admit = 0;

  bool operator==(const SwitchDecision&) const = default;
};

/// l_i = beta2 Q^p - beta1 Q^s - V gamma P.
double compute_l(const PolicyParams& p, double qp, double qs, double computation_cost);

/// u_i,j = [beta1 Q^s - Q^c_j] + V [gamma P - M_i,j].
double compute_u(const PolicyParams& p, double qs, double qc, double computation_cost, double hops);

/// Value of the per-switch subproblem l Y + (sum_j u_j X_j) Y for `d`. With
/// devolution off the local option is excluded and l + u_j is evaluated in
/// its P-free form beta2 Q^p - Q^c_j - V M_i,j.
double subproblem_objective(const PolicyParams& p, const SwitchView& view, std::span<const std::size_t> qc,
                            const SwitchDecision& d, bool devolution = true);

/// Exact maximizer of the per-switch subproblem. If every u_j < 0 the switch
/// processes locally and admits Q^p when l > 0 (else Q^(0)); otherwise it
/// uploads to a maximizer of u_j (uniform among ties) and admits Q^p when
/// l + u_j* > 0 (else Q^(0)).
SwitchDecision poscad_decide(const PolicyParams& p, const SwitchView& view, std::span<const std::size_t> qc,
                             bool devolution, Rng& tie_rng);

/// Nearest controller by hop count, lowest id on ties; admits Q^(0).
SwitchDecision static_decide(const SwitchView& view);

/// Uniformly random controller each slot; admits Q^(0).
SwitchDecision random_decide(const SwitchView& view, std::size_t num_controllers, Rng& rng);

/// Controller with the smallest backlog, uniform among ties; admits Q^(0).
SwitchDecision jsq_decide(const SwitchView& view, std::span<const std::size_t> qc, Rng& rng);

SwitchDecision decide(const PolicyConfig& config, const SwitchView& view, std::span<const std::size_t> qc, Rng& rng);

}  // namespace poscad
