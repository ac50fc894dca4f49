#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace poscad {

enum class TopologyKind { fat_tree, three_tier, jellyfish, f10 };

std::string to_string(TopologyKind kind);
std::optional<TopologyKind> parse_topology_kind(const std::string& name);

// Graph nodes are numbered switches first: switch s is node s, host h is
// node num_switches + h.
struct Topology {
  TopologyKind kind = TopologyKind::fat_tree;
  std::size_t num_switches = 0;
  std::size_t num_hosts = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  // Pod groups of switch ids. Core switches of the tree topologies belong
  // to no pod; see core_switches().
  std::vector<std::vector<std::size_t>> pods;
  std::vector<std::size_t> host_tor;          // host -> attached switch
  std::vector<std::size_t> controller_hosts;  // controller -> host

  std::size_t num_nodes() const { return num_switches + num_hosts; }
  std::size_t num_controllers() const { return controller_hosts.size(); }
  std::size_t host_node(std::size_t host) const { return num_switches + host; }

  std::vector<std::vector<std::size_t>> adjacency() const;
  std::vector<std::size_t> core_switches() const;
  // Pod index of a switch, nullopt for core switches.
  std::optional<std::size_t> pod_of(std::size_t sw) const;
};

Topology build_fat_tree(int k);
Topology build_f10(int k);
Topology build_three_tier(int core, int aggregation, int edge_per_aggregation, int hosts_per_edge);

struct JellyfishParams {
  int switches = 20;
  int ports = 6;
  int hosts_per_switch = 2;
  int controllers = 4;
};

Topology build_jellyfish(const JellyfishParams& params, std::uint64_t seed);

/// Everything needed to rebuild a topology.
struct TopologySpec {
  TopologyKind kind = TopologyKind::fat_tree;
  int k = 8;
  int core = 4;
  int aggregation = 8;
  int edge_per_aggregation = 9;
  int hosts_per_edge = 2;
  JellyfishParams jellyfish{80, 8, 2, 8};
};

Topology build_topology(const TopologySpec& spec, std::uint64_t seed);

bool is_connected(const Topology& topo);

/// Breadth-first hop counts from `source_node` to every node (-1 if unreachable).
std::vector<int> bfs_hops(const Topology& topo, std::size_t source_node);

/// Per-request costs. hops(i, j) is the communication cost M between switch i
/// and controller j; computation[i] is the local cost P of switch i.
struct CostMatrix {
  std::size_t num_switches = 0;
  std::size_t num_controllers = 0;
  std::vector<int> hop_counts;  // row-major, switch x controller
  std::vector<double> computation;

  int hops(std::size_t sw, std::size_t ctrl) const { return hop_counts[sw * num_controllers + ctrl]; }
  const int* row(std::size_t sw) const { return hop_counts.data() + sw * num_controllers; }
  double mean_hops() const;
};

/// M from BFS hop counts; P = mean(M) everywhere unless `computation_override`
/// is given (one value for all switches, or one per switch).
CostMatrix comm_costs(const Topology& topo, const std::vector<double>& computation_override = {});

}  // namespace poscad
