#include "poscad/topology.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <random>
#include <set>

#include <fmt/format.h>

#include "poscad/errors.hpp"
#include "poscad/rng.hpp"

namespace poscad {

std::string to_string(TopologyKind kind) {
  switch (kind) {
    case TopologyKind::fat_tree: return "fat_tree";
    case TopologyKind::three_tier: return "three_tier";
    case TopologyKind::jellyfish: return "jellyfish";
    case TopologyKind::f10: return "f10";
  }
  return "unknown";
}

std::optional<TopologyKind> parse_topology_kind(const std::string& name) {
  if (name == "fat_tree") return TopologyKind::fat_tree;
  if (name == "three_tier") return TopologyKind::three_tier;
  if (name == "jellyfish") return TopologyKind::jellyfish;
  if (name == "f10") return TopologyKind::f10;
  return std::nullopt;
}

std::vector<std::vector<std::size_t>> Topology::adjacency() const {
  std::vector<std::vector<std::size_t>> adj(num_nodes());
  for (const auto& [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  return adj;
}

std::vector<std::size_t> Topology::core_switches() const {
  std::vector<bool> in_pod(num_switches, false);
  for (const auto& pod : pods) {
    for (auto s : pod) in_pod[s] = true;
  }
  std::vector<std::size_t> core;
  for (std::size_t s = 0; s < num_switches; ++s) {
    if (!in_pod[s]) core.push_back(s);
  }
  return core;
}

std::optional<std::size_t> Topology::pod_of(std::size_t sw) const {
  for (std::size_t p = 0; p < pods.size(); ++p) {
    if (std::find(pods[p].begin(), pods[p].end(), sw) != pods[p].end()) return p;
  }
  return std::nullopt;
}

namespace {

void check_even_k(int k) {
  if (k < 2 || k % 2 != 0) {
    throw TopologyError(fmt::format("fat-tree arity must be an even integer >= 2, got {}", k));
  }
}

// Shared by fat-tree and F10; only the aggregation-core wiring differs.
Topology build_k_ary(int k, TopologyKind kind) {
  check_even_k(k);
  const std::size_t half = static_cast<std::size_t>(k) / 2;
  const std::size_t pods = static_cast<std::size_t>(k);
  const std::size_t num_core = half * half;

  Topology topo;
  topo.kind = kind;
  topo.num_switches = num_core + pods * static_cast<std::size_t>(k);
  topo.num_hosts = pods * half * half;

  auto agg_id = [&](std::size_t p, std::size_t a) { return num_core + p * k + a; };
  auto edge_id = [&](std::size_t p, std::size_t e) { return num_core + p * k + half + e; };

  for (std::size_t p = 0; p < pods; ++p) {
    // F10 alternates A pods (consecutive core groups) with B pods (strided).
    const bool strided = kind == TopologyKind::f10 && p % 2 == 1;
    for (std::size_t a = 0; a < half; ++a) {
      for (std::size_t b = 0; b < half; ++b) {
        const std::size_t core = strided ? b * half + a : a * half + b;
        topo.edges.emplace_back(core, agg_id(p, a));
      }
    }
    std::vector<std::size_t> pod;
    for (std::size_t a = 0; a < half; ++a) pod.push_back(agg_id(p, a));
    for (std::size_t e = 0; e < half; ++e) {
      pod.push_back(edge_id(p, e));
      for (std::size_t a = 0; a < half; ++a) topo.edges.emplace_back(agg_id(p, a), edge_id(p, e));
    }
    topo.pods.push_back(std::move(pod));
  }

  topo.host_tor.resize(topo.num_hosts);
  for (std::size_t p = 0; p < pods; ++p) {
    for (std::size_t e = 0; e < half; ++e) {
      for (std::size_t x = 0; x < half; ++x) {
        const std::size_t host = (p * half + e) * half + x;
        topo.host_tor[host] = edge_id(p, e);
        topo.edges.emplace_back(edge_id(p, e), topo.host_node(host));
      }
    }
    // First host under the pod's first edge switch.
    topo.controller_hosts.push_back(p * half * half);
  }
  return topo;
}

}  // namespace

Topology build_fat_tree(int k) { return build_k_ary(k, TopologyKind::fat_tree); }

Topology build_f10(int k) { return build_k_ary(k, TopologyKind::f10); }

Topology build_three_tier(int core, int aggregation, int edge_per_aggregation, int hosts_per_edge) {
  if (core < 1 || aggregation < 1 || edge_per_aggregation < 1 || hosts_per_edge < 1) {
    throw TopologyError(fmt::format("three-tier sizes must all be >= 1, got ({}, {}, {}, {})", core,
                                    aggregation, edge_per_aggregation, hosts_per_edge));
  }
  const auto nc = static_cast<std::size_t>(core);
  const auto na = static_cast<std::size_t>(aggregation);
  const auto ne = static_cast<std::size_t>(edge_per_aggregation);
  const auto nh = static_cast<std::size_t>(hosts_per_edge);

  Topology topo;
  topo.kind = TopologyKind::three_tier;
  topo.num_switches = nc + na * (1 + ne);
  topo.num_hosts = na * ne * nh;
  topo.host_tor.resize(topo.num_hosts);

  std::size_t host = 0;
  for (std::size_t a = 0; a < na; ++a) {
    const std::size_t agg = nc + a * (1 + ne);
    for (std::size_t c = 0; c < nc; ++c) topo.edges.emplace_back(c, agg);
    std::vector<std::size_t> pod{agg};
    for (std::size_t e = 0; e < ne; ++e) {
      const std::size_t edge = agg + 1 + e;
      pod.push_back(edge);
      topo.edges.emplace_back(agg, edge);
      for (std::size_t x = 0; x < nh; ++x, ++host) {
        topo.host_tor[host] = edge;
        topo.edges.emplace_back(edge, topo.host_node(host));
      }
    }
    topo.controller_hosts.push_back(a * ne * nh);
    topo.pods.push_back(std::move(pod));
  }
  return topo;
}

namespace {

using SwitchGraph = std::vector<std::set<std::size_t>>;

// Incremental random regular graph: join random non-adjacent pairs with free
// ports; when stuck with a node holding >= 2 free ports, splice it into a
// random existing link.
SwitchGraph random_regular(std::size_t n, std::size_t degree, Rng& rng) {
  SwitchGraph g(n);
  std::vector<std::size_t> free_ports(n, degree);
  for (;;) {
    std::vector<std::pair<std::size_t, std::size_t>> candidates;
    for (std::size_t u = 0; u < n; ++u) {
      if (free_ports[u] == 0) continue;
      for (std::size_t v = u + 1; v < n; ++v) {
        if (free_ports[v] > 0 && !g[u].count(v)) candidates.emplace_back(u, v);
      }
    }
    if (!candidates.empty()) {
      std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
      const auto [u, v] = candidates[pick(rng)];
      g[u].insert(v);
      g[v].insert(u);
      --free_ports[u];
      --free_ports[v];
      continue;
    }
    std::optional<std::size_t> spare;
    for (std::size_t p = 0; p < n; ++p) {
      if (free_ports[p] >= 2) {
        spare = p;
        break;
      }
    }
    if (!spare) break;
    const std::size_t p = *spare;
    std::vector<std::pair<std::size_t, std::size_t>> links;
    for (std::size_t x = 0; x < n; ++x) {
      for (auto y : g[x]) {
        if (x < y && x != p && y != p && !g[p].count(x) && !g[p].count(y)) links.emplace_back(x, y);
      }
    }
    if (links.empty()) break;
    std::uniform_int_distribution<std::size_t> pick(0, links.size() - 1);
    const auto [x, y] = links[pick(rng)];
    g[x].erase(y);
    g[y].erase(x);
    for (auto z : {x, y}) {
      g[p].insert(z);
      g[z].insert(p);
    }
    free_ports[p] -= 2;
  }
  return g;
}

bool switches_connected(const SwitchGraph& g) {
  if (g.empty()) return true;
  std::vector<bool> seen(g.size(), false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    const auto u = stack.back();
    stack.pop_back();
    for (auto v : g[u]) {
      if (!seen[v]) {
        seen[v] = true;
        ++count;
        stack.push_back(v);
      }
    }
  }
  return count == g.size();
}

constexpr int kJellyfishGraphAttempts = 100;
constexpr int kPlacementRetries = 1000;

}  // namespace

Topology build_jellyfish(const JellyfishParams& params, std::uint64_t seed) {
  const int degree = params.ports - params.hosts_per_switch;
  if (params.switches < 2 || params.hosts_per_switch < 1 || params.controllers < 1) {
    throw TopologyError("jellyfish needs >= 2 switches, >= 1 host per switch and >= 1 controller");
  }
  if (degree < 2 || degree >= params.switches) {
    throw TopologyError(fmt::format("jellyfish inter-switch degree {} not realizable on {} switches",
                                    degree, params.switches));
  }
  if ((params.switches * degree) % 2 != 0) {
    throw TopologyError(
        fmt::format("jellyfish parity: {} switches x degree {} is odd", params.switches, degree));
  }

  const auto n = static_cast<std::size_t>(params.switches);
  const auto hps = static_cast<std::size_t>(params.hosts_per_switch);
  Rng rng = make_rng(seed, StreamTag::topology);

  SwitchGraph graph;
  bool ok = false;
  for (int attempt = 0; attempt < kJellyfishGraphAttempts && !ok; ++attempt) {
    graph = random_regular(n, static_cast<std::size_t>(degree), rng);
    ok = switches_connected(graph) &&
         std::all_of(graph.begin(), graph.end(), [&](const auto& nb) { return nb.size() == static_cast<std::size_t>(degree); });
  }
  if (!ok) throw TopologyError("failed to generate a connected regular jellyfish graph");

  Topology topo;
  topo.kind = TopologyKind::jellyfish;
  topo.num_switches = n;
  topo.num_hosts = n * hps;
  for (std::size_t u = 0; u < n; ++u) {
    for (auto v : graph[u]) {
      if (u < v) topo.edges.emplace_back(u, v);
    }
  }
  topo.host_tor.resize(topo.num_hosts);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t x = 0; x < hps; ++x) {
      const std::size_t host = s * hps + x;
      topo.host_tor[host] = s;
      topo.edges.emplace_back(s, topo.host_node(host));
    }
  }

  // Pseudo-pods: contiguous switch-id blocks, one per controller. Only used
  // to designate hot spots.
  const auto nctrl = static_cast<std::size_t>(params.controllers);
  for (std::size_t p = 0; p < nctrl; ++p) {
    std::vector<std::size_t> pod;
    for (std::size_t s = p * n / nctrl; s < (p + 1) * n / nctrl; ++s) pod.push_back(s);
    if (!pod.empty()) topo.pods.push_back(std::move(pod));
  }

  std::vector<std::size_t> hosts(topo.num_hosts);
  std::iota(hosts.begin(), hosts.end(), 0);
  for (int attempt = 0; attempt < kPlacementRetries; ++attempt) {
    std::shuffle(hosts.begin(), hosts.end(), rng);
    std::vector<std::size_t> chosen;
    std::vector<std::size_t> tors;
    for (auto h : hosts) {
      const auto tor = topo.host_tor[h];
      const bool clash = std::any_of(tors.begin(), tors.end(), [&](std::size_t t) {
        return t == tor || graph[t].count(tor) > 0;
      });
      if (clash) continue;
      chosen.push_back(h);
      tors.push_back(tor);
      if (chosen.size() == nctrl) break;
    }
    if (chosen.size() == nctrl) {
      std::sort(chosen.begin(), chosen.end());
      topo.controller_hosts = std::move(chosen);
      return topo;
    }
  }
  throw TopologyError(fmt::format("cannot place {} controllers on pairwise non-adjacent ToRs",
                                  params.controllers));
}

Topology build_topology(const TopologySpec& spec, std::uint64_t seed) {
  switch (spec.kind) {
    case TopologyKind::fat_tree: return build_fat_tree(spec.k);
    case TopologyKind::f10: return build_f10(spec.k);
    case TopologyKind::three_tier:
      return build_three_tier(spec.core, spec.aggregation, spec.edge_per_aggregation, spec.hosts_per_edge);
    case TopologyKind::jellyfish: return build_jellyfish(spec.jellyfish, seed);
  }
  throw TopologyError("unknown topology kind");
}

std::vector<int> bfs_hops(const Topology& topo, std::size_t source_node) {
  const auto adj = topo.adjacency();
  std::vector<int> dist(topo.num_nodes(), -1);
  std::queue<std::size_t> frontier;
  dist[source_node] = 0;
  frontier.push(source_node);
  while (!frontier.empty()) {
    const auto u = frontier.front();
    frontier.pop();
    for (auto v : adj[u]) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        frontier.push(v);
      }
    }
  }
  return dist;
}

bool is_connected(const Topology& topo) {
  if (topo.num_nodes() == 0) return true;
  const auto dist = bfs_hops(topo, 0);
  return std::none_of(dist.begin(), dist.end(), [](int d) { return d < 0; });
}

double CostMatrix::mean_hops() const {
  if (hop_counts.empty()) return 0.0;
  const double total = std::accumulate(hop_counts.begin(), hop_counts.end(), 0.0);
  return total / static_cast<double>(hop_counts.size());
}

CostMatrix comm_costs(const Topology& topo, const std::vector<double>& computation_override) {
  CostMatrix costs;
  costs.num_switches = topo.num_switches;
  costs.num_controllers = topo.num_controllers();
  costs.hop_counts.assign(costs.num_switches * costs.num_controllers, 0);
  for (std::size_t j = 0; j < costs.num_controllers; ++j) {
    const auto dist = bfs_hops(topo, topo.host_node(topo.controller_hosts[j]));
    for (std::size_t i = 0; i < costs.num_switches; ++i) {
      if (dist[i] < 0) {
        throw TopologyError(fmt::format("switch {} cannot reach controller {}", i, j));
      }
      costs.hop_counts[i * costs.num_controllers + j] = dist[i];
    }
  }

  if (computation_override.empty()) {
    costs.computation.assign(costs.num_switches, costs.mean_hops());
  } else if (computation_override.size() == 1) {
    costs.computation.assign(costs.num_switches, computation_override.front());
  } else if (computation_override.size() == costs.num_switches) {
    costs.computation = computation_override;
  } else {
    throw TopologyError(fmt::format("computation cost override has {} entries for {} switches",
                                    computation_override.size(), costs.num_switches));
  }
  return costs;
}

}  // namespace poscad
