#include "poscad/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "poscad/rng.hpp"

namespace poscad {

using nlohmann::json;

json to_json(const RunSummary& s) {
  return json{{"slots", s.slots},
              {"avg_total_cost", s.avg_total_cost},
              {"avg_communication_cost", s.avg_communication_cost},
              {"avg_computation_cost", s.avg_computation_cost},
              {"avg_backlog", s.avg_backlog},
              {"qc_var", s.backlog_variance},
              {"completions", s.completions},
              {"phantom_completions", s.phantom_completions},
              {"avg_resp_slots", s.avg_response_slots},
              {"avg_resp_ms", s.avg_response_ms}};
}

json summary_document(const SimConfig& config, const RunSummary& summary) {
  return json{{"summary", to_json(summary)}, {"config", to_json(config)}};
}

void write_file_atomically(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", tmp.string()));
    out << contents;
    if (!out.flush()) throw std::runtime_error(fmt::format("write to '{}' failed", tmp.string()));
  }
  std::filesystem::rename(tmp, path);
}

RunSummary run_to_directory(const SimConfig& config, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::ostringstream csv;
  const RunSummary summary = run(config, &csv);
  write_file_atomically(out_dir / "slots.csv", csv.str());
  write_file_atomically(out_dir / "summary.json", summary_document(config, summary).dump(2) + "\n");
  return summary;
}

std::vector<SweepRow> run_sweep(const SimConfig& base, const SweepSpec& sweep, std::size_t threads) {
  std::vector<SweepRow> rows(sweep.values.size() * sweep.replications);
  if (rows.empty()) return rows;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, rows.size());

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t k = next++; k < rows.size(); k = next++) {
      const std::size_t v = k / sweep.replications;
      const std::size_t rep = k % sweep.replications;
      try {
        SimConfig c = apply_axis(base, sweep.axis, sweep.values[v]);
        c.seed = replication_seed(base.seed, rep);
        rows[k] = SweepRow{sweep.values[v], rep, run(c)};
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = rows.size();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "axis_value,replication,avg_total_cost,avg_backlog,qc_var,avg_resp_ms\n";
  for (const auto& r : rows) {
    fmt::print(out, "{},{},{:.6f},{:.6f},{:.6f},{:.6f}\n", r.axis_value, r.replication, r.summary.avg_total_cost,
               r.summary.avg_backlog, r.summary.backlog_variance, r.summary.avg_response_ms);
  }
}

json topology_document(const Topology& topo, const CostMatrix& costs) {
  json nodes = json::array();
  const auto core = topo.core_switches();
  for (std::size_t s = 0; s < topo.num_switches; ++s) {
    json n{{"id", s}, {"type", "switch"}};
    if (auto pod = topo.pod_of(s)) n["pod"] = *pod;
    nodes.push_back(n);
  }
  for (std::size_t h = 0; h < topo.num_hosts; ++h) {
    nodes.push_back(json{{"id", topo.host_node(h)}, {"type", "host"}, {"tor", topo.host_tor[h]}});
  }
  json edges = json::array();
  for (const auto& [a, b] : topo.edges) edges.push_back(json::array({a, b}));
  json controllers = json::array();
  for (std::size_t j = 0; j < topo.num_controllers(); ++j) {
    const std::size_t host = topo.controller_hosts[j];
    controllers.push_back(json{{"id", j}, {"host", topo.host_node(host)}, {"tor", topo.host_tor[host]}});
  }
  return json{{"kind", to_string(topo.kind)},
              {"num_switches", topo.num_switches},
              {"num_hosts", topo.num_hosts},
              {"nodes", nodes},
              {"edges", edges},
              {"pods", topo.pods},
              {"core_switches", core},
              {"controllers", controllers},
              {"computation_cost", costs.computation},
              {"mean_hops", costs.mean_hops()}};
}

void write_cost_csv(std::ostream& out, const CostMatrix& costs) {
  out << "switch";
  for (std::size_t j = 0; j < costs.num_controllers; ++j) out << ",c" << j;
  out << '\n';
  for (std::size_t i = 0; i < costs.num_switches; ++i) {
    out << i;
    for (std::size_t j = 0; j < costs.num_controllers; ++j) out << ',' << costs.hops(i, j);
    out << '\n';
  }
}

}  // namespace poscad
