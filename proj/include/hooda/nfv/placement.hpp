#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <vector>

#include "hooda/loop.hpp"
#include "hooda/nfv/qoe.hpp"
#include "hooda/nfv/substrate.hpp"
#include "hooda/rng.hpp"

namespace hooda::nfv {

struct PlacementOptions {
  QoeWeights weights{};
  // A request commits only if the bottleneck can carry at least this fraction
  // of its bandwidth demand; allocation above the floor may still be partial
  // and shows up in the bandwidth term of the QoE.
  double min_bandwidth_fraction = 0.5;
};

namespace detail {

// Bottleneck allocation for a set of segments: min over traversed links of
// free capacity divided by traversal count, capped at the demand.
inline BwMilli bottleneck_allocation(const Substrate& s, const Placement& p, BwMilli demand) {
  BwMilli alloc = demand;
  for (const auto& [key, count] : p.link_traversals()) {
    const auto& l = s.link(key.first, key.second);
    alloc = std::min(alloc, l.bw_free() / count);
  }
  return std::max<BwMilli>(alloc, 0);
}

inline BwMilli min_required(BwMilli demand, double fraction) {
  return static_cast<BwMilli>(std::ceil(static_cast<double>(demand) * fraction));
}

// Routes every segment of a candidate assignment. Returns nullopt when some
// hop is unreachable.
inline std::optional<Placement> route_assignment(const Substrate& s, const SfcRequest& r,
                                                 std::vector<int> assignment) {
  Placement p;
  p.request_id = r.id;
  p.vnf_to_node = std::move(assignment);
  int at = r.source;
  for (std::size_t i = 0; i <= p.vnf_to_node.size(); ++i) {
    const int goal = i < p.vnf_to_node.size() ? p.vnf_to_node[i] : r.sink;
    auto seg = s.shortest_path(at, goal);
    if (!seg) return std::nullopt;
    p.total_latency += s.path_latency(*seg);
    p.segments.push_back(std::move(*seg));
    at = goal;
  }
  return p;
}

// Full feasibility of a routed candidate against the current substrate plus
// the candidate's own cpu demands.
inline bool candidate_feasible(const Substrate& s, const SfcRequest& r, const Placement& p,
                               const PlacementOptions& opt) {
  std::map<int, int> cpu;
  for (std::size_t i = 0; i < r.chain.size(); ++i) {
    const auto& node = s.node(p.vnf_to_node[i]);
    if (!r.chain[i].allowed_layers.allows(node.layer)) return false;
    cpu[p.vnf_to_node[i]] += r.chain[i].cpu_demand;
  }
  for (const auto& [id, demand] : cpu)
    if (demand > s.node(id).cpu_free()) return false;
  if (p.total_latency > r.max_latency) return false;
  return bottleneck_allocation(s, p, r.bandwidth_demand) >=
         min_required(r.bandwidth_demand, opt.min_bandwidth_fraction);
}

inline Placement finalize(const Substrate& s, const SfcRequest& r, Placement p) {
  p.allocated_bw = bottleneck_allocation(s, p, r.bandwidth_demand);
  return p;
}

}  // namespace detail

// Chain-order greedy: each position takes the feasible node maximizing the
// QoE of the placement completed so far (ties to the lowest node id). Does not
// touch substrate state; commit separately.
inline std::optional<Placement> propose_greedy(const SfcRequest& r, const Substrate& s,
                                               const PlacementOptions& opt = {}) {
  validate(r);
  s.check_consistent();
  if (!s.has_node(r.source) || !s.has_node(r.sink))
    throw PlacementError("request endpoints missing from substrate");

  std::vector<int> assignment;
  std::map<int, int> cpu_tentative;
  int at = r.source;
  double latency_so_far = 0.0;

  for (std::size_t pos = 0; pos < r.chain.size(); ++pos) {
    const VnfSpec& vnf = r.chain[pos];
    int best_node = -1;
    double best_score = -1.0;
    double best_latency = 0.0;
    for (int id : s.node_ids()) {
      const auto& node = s.node(id);
      if (!vnf.allowed_layers.allows(node.layer)) continue;
      if (node.cpu_free() - cpu_tentative[id] < vnf.cpu_demand) continue;
      auto seg = s.shortest_path(at, id);
      if (!seg) continue;
      const double lat = latency_so_far + s.path_latency(*seg);
      if (lat > r.max_latency) continue;

      // marginal QoE of the partial chain, same normalizers as the final score
      double energy = 0.0;
      for (std::size_t j = 0; j < assignment.size(); ++j)
        energy += r.chain[j].cpu_demand * s.node(assignment[j]).energy_coeff;
      energy += vnf.cpu_demand * node.energy_coeff;
      const double e_max = r.total_cpu() * s.max_energy_coeff();
      const double delay_term = 1.0 - std::min(lat / r.max_latency, 1.0);
      const double energy_term = e_max > 0.0 ? 1.0 - std::min(energy / e_max, 1.0) : 1.0;
      const double score = opt.weights.delay * delay_term + opt.weights.energy * energy_term +
                           opt.weights.bandwidth;  // bandwidth settled at the end
      if (score > best_score + 1e-15) {
        best_score = score;
        best_node = id;
        best_latency = lat;
      }
    }
    if (best_node < 0) return std::nullopt;
    assignment.push_back(best_node);
    cpu_tentative[best_node] += vnf.cpu_demand;
    at = best_node;
    latency_so_far = best_latency;
  }

  auto routed = detail::route_assignment(s, r, std::move(assignment));
  if (!routed) return std::nullopt;
  if (!detail::candidate_feasible(s, r, *routed, opt)) return std::nullopt;
  return detail::finalize(s, r, std::move(*routed));
}

// Applies a placement to the substrate: cpu on mapped nodes, allocated
// bandwidth on every traversed link.
inline void commit(Substrate& s, const SfcRequest& r, const Placement& p) {
  detail::check_placement(p, r, s);
  for (std::size_t i = 0; i < r.chain.size(); ++i) {
    auto& node = s.node(p.vnf_to_node[i]);
    if (node.cpu_free() < r.chain[i].cpu_demand)
      throw PlacementError("commit would exceed cpu capacity");
    node.cpu_used += r.chain[i].cpu_demand;
  }
  for (const auto& [key, count] : p.link_traversals()) {
    auto& l = s.link(key.first, key.second);
    if (l.bw_free() < p.allocated_bw * count)
      throw PlacementError("commit would exceed link bandwidth");
    l.bw_used += p.allocated_bw * count;
  }
}

// Exact inverse of commit.
inline void release(Substrate& s, const SfcRequest& r, const Placement& p) {
  for (std::size_t i = 0; i < r.chain.size(); ++i)
    s.node(p.vnf_to_node[i]).cpu_used -= r.chain[i].cpu_demand;
  for (const auto& [key, count] : p.link_traversals())
    s.link(key.first, key.second).bw_used -= p.allocated_bw * count;
  s.check_consistent();
}

// Greedy propose-and-commit. On infeasibility the substrate is untouched and
// failure is returned as a value.
inline std::optional<Placement> greedy_place(const SfcRequest& r, Substrate& s,
                                             const PlacementOptions& opt = {}) {
  auto p = propose_greedy(r, s, opt);
  if (p) commit(s, r, *p);
  return p;
}

// Hill-climbing refinement as depth cycles: each pass re-maps one uniformly
// chosen position to one uniformly chosen feasible alternative and keeps it
// only on strict QoE improvement. The placement is evaluated uncommitted
// against the given substrate.
inline Placement refine_placement(const Placement& start, const SfcRequest& r, const Substrate& s,
                                  int depth, std::uint64_t seed,
                                  const PlacementOptions& opt = {}) {
  if (depth < 1) throw std::invalid_argument("refine_placement: depth must be >= 1");
  Rng rng(seed);

  auto generate = [&](const Placement& incumbent) -> Placement {
    const std::size_t pos = rng.uniform_int(r.chain.size());
    std::vector<int> alternatives;
    for (int id : s.node_ids()) {
      if (id == incumbent.vnf_to_node[pos]) continue;
      if (!r.chain[pos].allowed_layers.allows(s.node(id).layer)) continue;
      std::vector<int> assignment = incumbent.vnf_to_node;
      assignment[pos] = id;
      auto routed = detail::route_assignment(s, r, std::move(assignment));
      if (!routed) continue;
      if (!detail::candidate_feasible(s, r, *routed, opt)) continue;
      alternatives.push_back(id);
    }
    if (alternatives.empty()) return incumbent;
    const int pick = alternatives[rng.uniform_int(alternatives.size())];
    std::vector<int> assignment = incumbent.vnf_to_node;
    assignment[pos] = pick;
    auto routed = detail::route_assignment(s, r, std::move(assignment));
    return detail::finalize(s, r, std::move(*routed));
  };
  auto evaluate = [&](const Placement& p) { return score_qoe(p, r, s, opt.weights).value; };

  return ooda::run_depth_cycles(start, depth, generate, evaluate);
}

}  // namespace hooda::nfv
