#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "poscad/engine.hpp"

namespace poscad {

enum class SweepAxis { V, D, error_rate };

std::string to_string(SweepAxis axis);

struct SweepSpec {
  SweepAxis axis = SweepAxis::V;
  std::vector<double> values;
  std::size_t replications = 1;
};

struct ExperimentConfig {
  SimConfig sim;
  std::optional<SweepSpec> sweep;
};

/// Reads and validates a JSON config. Every problem found is reported in one
/// ConfigError. Relative distribution-file paths resolve against `base_dir`.
ExperimentConfig parse_config(const nlohmann::json& doc, const std::string& base_dir = ".");
ExperimentConfig load_config(const std::string& path);

/// Canonical JSON form of a simulation config, used as the echo in summaries.
nlohmann::json to_json(const SimConfig& config);

/// Returns `base` with the swept parameter set to `value`.
SimConfig apply_axis(const SimConfig& base, SweepAxis axis, double value);

}  // namespace poscad
