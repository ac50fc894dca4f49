#pragma once

#include <cstddef>
#include <filesystem>
#include <ostream>
#include <vector>

#include <json.hpp>

#include "poscad/config.hpp"

namespace poscad {

nlohmann::json to_json(const RunSummary& summary);

/// Summary document: the averages plus the config that produced them.
nlohmann::json summary_document(const SimConfig& config, const RunSummary& summary);

/// Runs one simulation, writing slots.csv and summary.json into `out_dir`.
RunSummary run_to_directory(const SimConfig& config, const std::filesystem::path& out_dir);

struct SweepRow {
  double axis_value = 0.0;
  std::size_t replication = 0;
  RunSummary summary;
};

/// One run per (value, replication). Replication r uses
/// replication_seed(base.seed, r). Points run on up to `threads` threads;
/// rows come back ordered by value position, then replication.
std::vector<SweepRow> run_sweep(const SimConfig& base, const SweepSpec& sweep, std::size_t threads = 0);

/// axis_value,replication,avg_total_cost,avg_backlog,qc_var,avg_resp_ms
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Node list, edge list, pods, controller placement and the M matrix.
nlohmann::json topology_document(const Topology& topo, const CostMatrix& costs);
void write_cost_csv(std::ostream& out, const CostMatrix& costs);

/// Writes through a temporary file in the same directory, then renames.
void write_file_atomically(const std::filesystem::path& path, const std::string& contents);

}  // namespace poscad
