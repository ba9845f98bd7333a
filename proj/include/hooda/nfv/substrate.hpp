#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hooda/errors.hpp"
#include "hooda/layer.hpp"

namespace hooda::nfv {

using net::LayerRole;

// Compute is tracked in integer units and bandwidth in integer milli-units so
// commit/release sequences restore the substrate exactly.
using BwMilli = std::int64_t;

inline BwMilli to_bw_milli(double units) {
  return static_cast<BwMilli>(std::llround(units * 1000.0));
}
inline double from_bw_milli(BwMilli mu) { return static_cast<double>(mu) / 1000.0; }

struct SubstrateNode {
  int id = -1;
  LayerRole layer = LayerRole::Terminal;
  int cpu_capacity = 0;
  int cpu_used = 0;
  double energy_coeff = 1.0;  // energy units per compute unit

  int cpu_free() const { return cpu_capacity - cpu_used; }

  friend bool operator==(const SubstrateNode&, const SubstrateNode&) = default;
};

struct SubstrateLink {
  int a = -1;  // canonical endpoint order: a < b
  int b = -1;
  double latency = 0.0;
  BwMilli bw_capacity = 0;
  BwMilli bw_used = 0;

  BwMilli bw_free() const { return bw_capacity - bw_used; }

  friend bool operator==(const SubstrateLink&, const SubstrateLink&) = default;
};

enum class VnfKind : std::uint8_t {
  DataCollection = 0,
  Filtering = 1,
  Aggregation = 2,
  Analysis = 3,
  DecisionMaking = 4
};

inline const char* to_string(VnfKind k) {
  switch (k) {
    case VnfKind::DataCollection: return "data_collection";
    case VnfKind::Filtering: return "filtering";
    case VnfKind::Aggregation: return "aggregation";
    case VnfKind::Analysis: return "analysis";
    case VnfKind::DecisionMaking: return "decision_making";
  }
  return "?";
}

// Layer permission as a bitmask over LayerRole ranks.
struct LayerMask {
  std::uint8_t bits = 0;

  static LayerMask of(std::initializer_list<LayerRole> layers) {
    LayerMask m;
    for (auto l : layers) m.bits = static_cast<std::uint8_t>(m.bits | (1u << net::layer_rank(l)));
    return m;
  }
  static LayerMask all() { return {0x7}; }
  bool allows(LayerRole l) const { return (bits >> net::layer_rank(l)) & 1u; }
  bool empty() const { return bits == 0; }

  friend bool operator==(const LayerMask&, const LayerMask&) = default;
};

struct VnfSpec {
  VnfKind kind = VnfKind::DataCollection;
  int cpu_demand = 1;
  LayerMask allowed_layers = LayerMask::all();
};

inline void validate(const VnfSpec& v) {
  if (v.cpu_demand <= 0) throw ValidationError("vnf: cpu_demand must be > 0");
  if (v.allowed_layers.empty()) throw ValidationError("vnf: allowed_layers must be non-empty");
}

struct SfcRequest {
  int id = -1;
  std::vector<VnfSpec> chain;
  BwMilli bandwidth_demand = 0;  // milli-units/s
  double max_latency = 0.0;      // seconds
  int source = -1;
  int sink = -1;
  double arrival = 0.0;
  double lifetime = std::numeric_limits<double>::infinity();

  int total_cpu() const {
    int t = 0;
    for (const auto& v : chain) t += v.cpu_demand;
    return t;
  }
};

inline void validate(const SfcRequest& r) {
  if (r.chain.empty()) throw ValidationError("sfc request: chain must be non-empty");
  if (r.bandwidth_demand <= 0) throw ValidationError("sfc request: bandwidth_demand must be > 0");
  if (r.max_latency <= 0.0) throw ValidationError("sfc request: max_latency must be > 0");
  for (const auto& v : r.chain) validate(v);
}

// CET substrate graph. Links are undirected for routing; a path segment is a
// node sequence and its traffic loads every traversed link.
class Substrate {
public:
  void add_node(const SubstrateNode& n) {
    if (n.cpu_capacity < 0 || n.cpu_used < 0 || n.cpu_used > n.cpu_capacity)
      throw ValidationError("substrate node: cpu usage out of range");
    nodes_[n.id] = n;
  }

  void add_link(int a, int b, double latency, BwMilli bw_capacity) {
    if (latency < 0.0 || bw_capacity <= 0) throw ValidationError("substrate link: bad parameters");
    if (!nodes_.count(a) || !nodes_.count(b))
      throw ValidationError("substrate link: unknown endpoint");
    auto key = canonical(a, b);
    links_[key] = SubstrateLink{key.first, key.second, latency, bw_capacity, 0};
    adjacency_[a].insert(b);
    adjacency_[b].insert(a);
  }

  bool has_node(int id) const { return nodes_.count(id) > 0; }
  const SubstrateNode& node(int id) const { return nodes_.at(id); }
  SubstrateNode& node(int id) { return nodes_.at(id); }

  const SubstrateLink& link(int a, int b) const { return links_.at(canonical(a, b)); }
  SubstrateLink& link(int a, int b) { return links_.at(canonical(a, b)); }
  bool has_link(int a, int b) const { return links_.count(canonical(a, b)) > 0; }

  std::vector<int> node_ids() const {
    std::vector<int> ids;
    ids.reserve(nodes_.size());
    for (const auto& [id, n] : nodes_) ids.push_back(id);
    return ids;
  }

  const std::map<std::pair<int, int>, SubstrateLink>& links() const { return links_; }

  double max_energy_coeff() const {
    double m = 0.0;
    for (const auto& [id, n] : nodes_) m = std::max(m, n.energy_coeff);
    return m;
  }

  // Latency-shortest path between nodes (Dijkstra, lower node id wins ties).
  // Returns the node sequence including both endpoints; empty when
  // unreachable. from == to yields the single-node sequence.
  std::optional<std::vector<int>> shortest_path(int from, int to) const {
    if (!nodes_.count(from) || !nodes_.count(to)) return std::nullopt;
    if (from == to) return std::vector<int>{from};
    std::map<int, double> dist;
    std::map<int, int> prev;
    std::set<std::pair<double, int>> frontier;
    dist[from] = 0.0;
    frontier.insert({0.0, from});
    while (!frontier.empty()) {
      auto [d, u] = *frontier.begin();
      frontier.erase(frontier.begin());
      if (u == to) break;
      auto adj = adjacency_.find(u);
      if (adj == adjacency_.end()) continue;
      for (int v : adj->second) {
        const double nd = d + links_.at(canonical(u, v)).latency;
        auto it = dist.find(v);
        if (it == dist.end() || nd < it->second - 1e-15) {
          if (it != dist.end()) frontier.erase({it->second, v});
          dist[v] = nd;
          prev[v] = u;
          frontier.insert({nd, v});
        }
      }
    }
    if (!dist.count(to)) return std::nullopt;
    std::vector<int> path{to};
    for (int u = to; u != from; u = prev.at(u)) path.push_back(prev.at(u));
    std::reverse(path.begin(), path.end());
    return path;
  }

  double path_latency(const std::vector<int>& node_seq) const {
    double lat = 0.0;
    for (std::size_t i = 1; i < node_seq.size(); ++i)
      lat += links_.at(canonical(node_seq[i - 1], node_seq[i])).latency;
    return lat;
  }

  void check_consistent() const {
    for (const auto& [id, n] : nodes_) {
      if (n.cpu_used < 0 || n.cpu_used > n.cpu_capacity)
        throw PlacementError("substrate inconsistent: node " + std::to_string(id) +
                             " cpu usage out of range");
    }
    for (const auto& [key, l] : links_) {
      if (l.bw_used < 0 || l.bw_used > l.bw_capacity)
        throw PlacementError("substrate inconsistent: link bandwidth out of range");
    }
  }

  friend bool operator==(const Substrate&, const Substrate&) = default;

private:
  static std::pair<int, int> canonical(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

  std::map<int, SubstrateNode> nodes_;
  std::map<std::pair<int, int>, SubstrateLink> links_;
  std::map<int, std::set<int>> adjacency_;
};

// A committed or candidate embedding of one request: one node per chain
// position plus the routed segments source -> v1 -> ... -> vn -> sink.
struct Placement {
  int request_id = -1;
  std::vector<int> vnf_to_node;
  std::vector<std::vector<int>> segments;  // node sequences, one per hop pair
  double total_latency = 0.0;
  BwMilli allocated_bw = 0;

  // Total traversal count per link, for bandwidth accounting.
  std::map<std::pair<int, int>, int> link_traversals() const {
    std::map<std::pair<int, int>, int> t;
    for (const auto& seg : segments)
      for (std::size_t i = 1; i < seg.size(); ++i) {
        auto key = std::make_pair(std::min(seg[i - 1], seg[i]), std::max(seg[i - 1], seg[i]));
        ++t[key];
      }
    return t;
  }
};

}  // namespace hooda::nfv
