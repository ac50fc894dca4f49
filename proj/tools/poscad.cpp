// Command-line front end: run, sweep, topo.

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "poscad/config.hpp"
#include "poscad/errors.hpp"
#include "poscad/experiment.hpp"

namespace fs = std::filesystem;
using namespace poscad;

namespace {

constexpr int kConfigError = 2;
constexpr int kInvariantError = 3;

struct Options {
  std::string config;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

ExperimentConfig load(const Options& opt) {
  ExperimentConfig cfg = load_config(opt.config);
  if (opt.seed) cfg.sim.seed = *opt.seed;
  return cfg;
}

int run_command(const Options& opt) {
  const ExperimentConfig cfg = load(opt);
  const RunSummary s = run_to_directory(cfg.sim, opt.out_dir);
  if (!opt.quiet) {
    fmt::print("{} slots averaged: cost {:.4f}, backlog {:.4f}, qc_var {:.4f}, response {:.4f} ms\n", s.slots,
               s.avg_total_cost, s.avg_backlog, s.backlog_variance, s.avg_response_ms);
    fmt::print("wrote {}/slots.csv and {}/summary.json\n", opt.out_dir, opt.out_dir);
  }
  return 0;
}

int sweep_command(const Options& opt) {
  const ExperimentConfig cfg = load(opt);
  if (!cfg.sweep) throw ConfigError({"sweep: section required for the sweep command"});
  const auto rows = run_sweep(cfg.sim, *cfg.sweep);
  fs::create_directories(opt.out_dir);
  std::ostringstream csv;
  write_sweep_csv(csv, rows);
  write_file_atomically(fs::path(opt.out_dir) / "sweep.csv", csv.str());
  if (!opt.quiet) {
    for (const auto& r : rows) {
      fmt::print("{}={} rep {}: cost {:.4f}, backlog {:.4f}, qc_var {:.4f}, response {:.4f} ms\n",
                 to_string(cfg.sweep->axis), r.axis_value, r.replication, r.summary.avg_total_cost,
                 r.summary.avg_backlog, r.summary.backlog_variance, r.summary.avg_response_ms);
    }
    fmt::print("wrote {}/sweep.csv ({} rows)\n", opt.out_dir, rows.size());
  }
  return 0;
}

int topo_command(const Options& opt, bool to_stdout) {
  const ExperimentConfig cfg = load(opt);
  const Topology topo = build_topology(cfg.sim.topology, cfg.sim.seed);
  const CostMatrix costs = comm_costs(topo, cfg.sim.computation_cost);
  const std::string doc = topology_document(topo, costs).dump(2) + "\n";
  std::ostringstream csv;
  write_cost_csv(csv, costs);
  if (to_stdout) {
    std::cout << doc;
    return 0;
  }
  fs::create_directories(opt.out_dir);
  write_file_atomically(fs::path(opt.out_dir) / "topology.json", doc);
  write_file_atomically(fs::path(opt.out_dir) / "costs.csv", csv.str());
  if (!opt.quiet) {
    fmt::print("{}: {} switches, {} hosts, {} controllers, mean M {:.4f}\n", to_string(topo.kind),
               topo.num_switches, topo.num_hosts, topo.num_controllers(), costs.mean_hops());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Predictive switch-controller association and scheduling simulator"};
  app.require_subcommand(1);
  Options opt;
  bool topo_stdout = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", opt.config, "JSON config file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out-dir", opt.out_dir, "output directory")->capture_default_str();
    cmd->add_option("--seed", opt.seed, "override run.seed");
    cmd->add_flag("--quiet", opt.quiet, "no progress output");
  };
  auto* run_cmd = app.add_subcommand("run", "simulate one configuration");
  auto* sweep_cmd = app.add_subcommand("sweep", "simulate every (value, replication) of the sweep section");
  auto* topo_cmd = app.add_subcommand("topo", "dump the topology and its M matrix");
  add_common(run_cmd);
  add_common(sweep_cmd);
  add_common(topo_cmd);
  topo_cmd->add_flag("--stdout", topo_stdout, "print the topology document instead of writing files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (*run_cmd) return run_command(opt);
    if (*sweep_cmd) return sweep_command(opt);
    return topo_command(opt, topo_stdout);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kConfigError;
  } catch (const InvariantViolation& e) {
    std::cerr << e.what() << '\n';
    return kInvariantError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
