#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "hooda/nfv/placement.hpp"
#include "hooda/nfv/qlearn.hpp"
#include "hooda/rng.hpp"

namespace hooda::nfv {

// Tree-shaped CET substrate: one set of cloud nodes, edges under the cloud,
// terminals round-robined across edges.
struct SubstrateConfig {
  int cloud_nodes = 1;
  int edge_nodes = 3;
  int terminal_nodes = 15;
  int cloud_capacity = 100;
  int edge_capacity = 40;
  int terminal_capacity = 10;
  double cloud_energy_coeff = 1.0;
  double edge_energy_coeff = 2.0;
  double terminal_energy_coeff = 3.5;
  double terminal_edge_latency = 0.05;
  double edge_cloud_latency = 0.2;
  double terminal_edge_bandwidth = 100.0;  // units/s
  double edge_cloud_bandwidth = 500.0;
};

inline void validate(const SubstrateConfig& c) {
  if (c.cloud_nodes < 1 || c.edge_nodes < 1 || c.terminal_nodes < 1)
    throw ValidationError("substrate: node counts must be >= 1");
  if (c.cloud_capacity < 0 || c.edge_capacity < 0 || c.terminal_capacity < 0)
    throw ValidationError("substrate: capacities must be >= 0");
  if (c.terminal_edge_latency < 0 || c.edge_cloud_latency < 0)
    throw ValidationError("substrate: latencies must be >= 0");
  if (c.terminal_edge_bandwidth <= 0 || c.edge_cloud_bandwidth <= 0)
    throw ValidationError("substrate: bandwidths must be > 0");
}

// Node ids: cloud 0..C-1, edges C..C+E-1, terminals after that.
inline Substrate build_substrate(const SubstrateConfig& c) {
  validate(c);
  Substrate s;
  int id = 0;
  std::vector<int> clouds, edges;
  for (int i = 0; i < c.cloud_nodes; ++i, ++id) {
    s.add_node({id, LayerRole::Cloud, c.cloud_capacity, 0, c.cloud_energy_coeff});
    clouds.push_back(id);
  }
  for (int i = 0; i < c.edge_nodes; ++i, ++id) {
    s.add_node({id, LayerRole::Edge, c.edge_capacity, 0, c.edge_energy_coeff});
    edges.push_back(id);
    s.add_link(clouds[static_cast<std::size_t>(i % c.cloud_nodes)], id, c.edge_cloud_latency,
               to_bw_milli(c.edge_cloud_bandwidth));
  }
  for (int i = 0; i < c.terminal_nodes; ++i, ++id) {
    s.add_node({id, LayerRole::Terminal, c.terminal_capacity, 0, c.terminal_energy_coeff});
    s.add_link(edges[static_cast<std::size_t>(i % c.edge_nodes)], id, c.terminal_edge_latency,
               to_bw_milli(c.terminal_edge_bandwidth));
  }
  return s;
}

struct RequestStreamConfig {
  int n_requests = 240;
  double arrival_spacing = 1.0;  // seconds between arrivals
  int chain_min = 2;
  int chain_max = 4;
  int cpu_min = 2;
  int cpu_max = 8;
  double bandwidth_min = 2.0;
  double bandwidth_max = 10.0;
  double max_latency_min = 0.6;
  double max_latency_max = 1.6;
  double lifetime_min = 30.0;
  double lifetime_max = 90.0;
};

inline void validate(const RequestStreamConfig& c) {
  if (c.n_requests < 1) throw ValidationError("request stream: n_requests must be >= 1");
  if (c.arrival_spacing <= 0) throw ValidationError("request stream: arrival_spacing must be > 0");
  if (c.chain_min < 1 || c.chain_max < c.chain_min)
    throw ValidationError("request stream: bad chain length range");
  if (c.cpu_min < 1 || c.cpu_max < c.cpu_min)
    throw ValidationError("request stream: bad cpu demand range");
  if (c.bandwidth_min <= 0 || c.bandwidth_max < c.bandwidth_min)
    throw ValidationError("request stream: bad bandwidth range");
  if (c.max_latency_min <= 0 || c.max_latency_max < c.max_latency_min)
    throw ValidationError("request stream: bad latency range");
  if (c.lifetime_min <= 0 || c.lifetime_max < c.lifetime_min)
    throw ValidationError("request stream: bad lifetime range");
}

namespace detail {

inline VnfSpec draw_vnf(std::size_t position, std::size_t chain_len, const RequestStreamConfig& c,
                        Rng& rng) {
  VnfSpec v;
  const int cpu = c.cpu_min + static_cast<int>(rng.uniform_int(
                                  static_cast<std::uint64_t>(c.cpu_max - c.cpu_min + 1)));
  v.cpu_demand = cpu;
  if (position == 0) {
    v.kind = VnfKind::DataCollection;
    v.allowed_layers = LayerMask::of({LayerRole::Terminal, LayerRole::Edge});
  } else if (position + 1 == chain_len && chain_len >= 2) {
    v.kind = VnfKind::DecisionMaking;
    v.allowed_layers = LayerMask::of({LayerRole::Edge, LayerRole::Cloud});
  } else {
    switch (rng.uniform_int(3)) {
      case 0:
        v.kind = VnfKind::Filtering;
        v.allowed_layers = LayerMask::of({LayerRole::Terminal, LayerRole::Edge});
        break;
      case 1:
        v.kind = VnfKind::Aggregation;
        v.allowed_layers = LayerMask::of({LayerRole::Edge, LayerRole::Cloud});
        break;
      default:
        v.kind = VnfKind::Analysis;
        v.allowed_layers = LayerMask::of({LayerRole::Edge, LayerRole::Cloud});
        break;
    }
  }
  return v;
}

}  // namespace detail

// Seeded request stream over a substrate: terminal sources, cloud sinks,
// layered chains of 2..4 functions. The same seed always yields the same
// stream, which is what makes per-depth replays comparable.
inline std::vector<SfcRequest> generate_requests(const RequestStreamConfig& c, const Substrate& s,
                                                 std::uint64_t seed) {
  validate(c);
  std::vector<int> terminals, clouds;
  for (int id : s.node_ids()) {
    if (s.node(id).layer == LayerRole::Terminal) terminals.push_back(id);
    if (s.node(id).layer == LayerRole::Cloud) clouds.push_back(id);
  }
  if (terminals.empty() || clouds.empty())
    throw ValidationError("request stream: substrate needs terminal and cloud nodes");

  Rng rng(seed);
  std::vector<SfcRequest> out;
  out.reserve(static_cast<std::size_t>(c.n_requests));
  for (int i = 0; i < c.n_requests; ++i) {
    SfcRequest r;
    r.id = i;
    const std::size_t len = static_cast<std::size_t>(
        c.chain_min + static_cast<int>(rng.uniform_int(
                          static_cast<std::uint64_t>(c.chain_max - c.chain_min + 1))));
    for (std::size_t pos = 0; pos < len; ++pos)
      r.chain.push_back(detail::draw_vnf(pos, len, c, rng));
    r.bandwidth_demand = to_bw_milli(rng.uniform(c.bandwidth_min, c.bandwidth_max));
    r.max_latency = rng.uniform(c.max_latency_min, c.max_latency_max);
    r.source = terminals[rng.uniform_int(terminals.size())];
    r.sink = clouds[rng.uniform_int(clouds.size())];
    r.arrival = i * c.arrival_spacing;
    r.lifetime = rng.uniform(c.lifetime_min, c.lifetime_max);
    validate(r);
    out.push_back(std::move(r));
  }
  return out;
}

enum class NfvPolicy { Greedy, QLearn };

inline const char* to_string(NfvPolicy p) {
  return p == NfvPolicy::Greedy ? "greedy" : "qlearn";
}

struct DepthResult {
  int depth = 0;
  double mean_qoe = 0.0;
  double error_rate = 0.0;
  int n_requests = 0;
  int failures = 0;
};

struct RequestTrace {
  int depth = 0;
  int request_id = 0;
  bool success = false;
  double qoe_base = 0.0;
  double qoe_final = 0.0;
};

struct QoeExperimentResult {
  std::vector<DepthResult> per_depth;
  std::vector<RequestTrace> traces;
};

namespace detail {

// Q-agent chain walk: one action per position, feasibility by layer and
// residual cpu; routing and the final constraint check follow the same rules
// as the greedy policy.
inline std::optional<Placement> propose_qagent(const SfcRequest& r, const Substrate& s,
                                               QAgent& agent, Rng& rng,
                                               const PlacementOptions& opt, bool train) {
  std::vector<int> assignment;
  std::map<int, int> cpu_tentative;
  struct Step {
    int state;
    int action;
  };
  std::vector<Step> steps;

  for (std::size_t pos = 0; pos < r.chain.size(); ++pos) {
    const int state = agent.encode_state(s, r, static_cast<int>(pos));
    std::vector<int> feasible;
    for (int a = 0; a < agent.n_actions(); ++a) {
      const auto& node = s.node(agent.action_node(a));
      if (!r.chain[pos].allowed_layers.allows(node.layer)) continue;
      if (node.cpu_free() - cpu_tentative[node.id] < r.chain[pos].cpu_demand) continue;
      feasible.push_back(a);
    }
    const int action = agent.select_action(state, feasible, rng, train);
    if (action < 0) {
      if (train && !steps.empty())
        agent.learn(steps.back().state, steps.back().action, -1.0, state, {}, true);
      return std::nullopt;
    }
    if (train && !steps.empty())
      agent.learn(steps.back().state, steps.back().action, 0.0, state, feasible, false);
    steps.push_back({state, action});
    const int node_id = agent.action_node(action);
    assignment.push_back(node_id);
    cpu_tentative[node_id] += r.chain[pos].cpu_demand;
  }

  auto routed = route_assignment(s, r, std::move(assignment));
  std::optional<Placement> result;
  double reward = -1.0;
  if (routed && candidate_feasible(s, r, *routed, opt)) {
    result = finalize(s, r, std::move(*routed));
    reward = score_qoe(*result, r, s, opt.weights).value;
  }
  if (train && !steps.empty())
    agent.learn(steps.back().state, steps.back().action, reward, 0, {}, true);
  return result;
}

}  // namespace detail

struct QoeExperimentConfig {
  SubstrateConfig substrate{};
  RequestStreamConfig requests{};
  std::vector<int> depths{1, 2, 4, 8};
  NfvPolicy policy = NfvPolicy::Greedy;
  int n_episodes = 30;  // Q-agent training passes over the stream
  QAgentConfig qagent{};
  PlacementOptions options{};
};

// Case-study driver: replays the identical seeded request stream once per
// depth over a fresh substrate. Per request: propose a base placement, refine
// it with depth-k cycles, then commit; expired placements release as the
// stream advances. The refinement seed depends on the request, not the depth,
// so deeper runs extend the same candidate stream.
inline QoeExperimentResult run_qoe_experiment(const QoeExperimentConfig& cfg,
                                              std::uint64_t seed) {
  if (cfg.depths.empty()) throw ValidationError("qoe experiment: depths must be non-empty");
  const Substrate base = build_substrate(cfg.substrate);
  const auto requests = generate_requests(cfg.requests, base, split_seed(seed, 1));

  // Train the learning policy once; evaluation replays are then greedy.
  std::optional<QAgent> agent;
  if (cfg.policy == NfvPolicy::QLearn) {
    int max_len = 1;
    for (const auto& r : requests) max_len = std::max(max_len, static_cast<int>(r.chain.size()));
    agent.emplace(cfg.qagent, base.node_ids(), max_len);
    Rng train_rng(split_seed(seed, 2));
    for (int ep = 0; ep < cfg.n_episodes; ++ep) {
      Substrate s = base;
      std::vector<std::pair<double, std::pair<SfcRequest, Placement>>> active;
      for (const auto& r : requests) {
        std::erase_if(active, [&](const auto& entry) {
          if (entry.first <= r.arrival) {
            release(s, entry.second.first, entry.second.second);
            return true;
          }
          return false;
        });
        auto p = detail::propose_qagent(r, s, *agent, train_rng, cfg.options, true);
        if (p) {
          commit(s, r, *p);
          active.push_back({r.arrival + r.lifetime, {r, *p}});
        }
      }
      agent->end_episode();
    }
  }

  QoeExperimentResult result;
  for (int depth : cfg.depths) {
    Substrate s = base;
    std::vector<std::pair<double, std::pair<SfcRequest, Placement>>> active;
    int failures = 0;
    double qoe_sum = 0.0;
    int qoe_count = 0;
    Rng eval_rng(split_seed(seed, 3));  // same stream per depth
    for (const auto& r : requests) {
      std::erase_if(active, [&](const auto& entry) {
        if (entry.first <= r.arrival) {
          release(s, entry.second.first, entry.second.second);
          return true;
        }
        return false;
      });
      std::optional<Placement> p;
      if (cfg.policy == NfvPolicy::QLearn)
        p = detail::propose_qagent(r, s, *agent, eval_rng, cfg.options, false);
      else
        p = propose_greedy(r, s, cfg.options);

      RequestTrace trace;
      trace.depth = depth;
      trace.request_id = r.id;
      if (!p) {
        ++failures;
        result.traces.push_back(trace);
        continue;
      }
      trace.qoe_base = score_qoe(*p, r, s, cfg.options.weights).value;
      const Placement refined = refine_placement(
          *p, r, s, depth, split_seed(seed, 0x5EED0000ull + static_cast<std::uint64_t>(r.id)),
          cfg.options);
      commit(s, r, refined);
      active.push_back({r.arrival + r.lifetime, {r, refined}});
      trace.success = true;
      trace.qoe_final = score_qoe(refined, r, s, cfg.options.weights).value;
      qoe_sum += trace.qoe_final;
      ++qoe_count;
      result.traces.push_back(trace);
    }
    DepthResult dr;
    dr.depth = depth;
    dr.n_requests = static_cast<int>(requests.size());
    dr.failures = failures;
    dr.error_rate = static_cast<double>(failures) / static_cast<double>(requests.size());
    dr.mean_qoe = qoe_count > 0 ? qoe_sum / qoe_count : 0.0;
    result.per_depth.push_back(dr);
  }
  return result;
}

}  // namespace hooda::nfv
