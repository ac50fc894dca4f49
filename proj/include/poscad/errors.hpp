#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace poscad {

/// Invalid construction parameters for a topology.
class TopologyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed traffic inputs (distribution files, rates, error rates).
class TrafficError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Configuration problems. Carries every offending field, not just the first.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);

  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

/// A caller broke an operation's precondition (a policy or engine bug).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A simulation-wide invariant failed; the message holds a state dump.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace poscad
