#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "hooda/network.hpp"
#include "hooda/rng.hpp"
#include "hooda/search/policies.hpp"
#include "hooda/topology.hpp"
#include "hooda/world.hpp"

namespace hooda::bench {

// Selects the decision wiring over identical worlds.
enum class ArchitectureKind { SingleLayer, EdgeEnd, HOoda };

inline const char* to_string(ArchitectureKind a) {
  switch (a) {
    case ArchitectureKind::SingleLayer: return "single_layer";
    case ArchitectureKind::EdgeEnd: return "edge_end";
    case ArchitectureKind::HOoda: return "h_ooda";
  }
  return "?";
}

inline ArchitectureKind architecture_from_string(const std::string& s) {
  if (s == "single_layer") return ArchitectureKind::SingleLayer;
  if (s == "edge_end") return ArchitectureKind::EdgeEnd;
  if (s == "h_ooda") return ArchitectureKind::HOoda;
  throw ValidationError("unknown architecture: " + s);
}

struct TrialResult {
  bool found = false;
  std::optional<double> search_time;
  double efficiency = 0.0;  // covered fraction per second at termination
  int ticks = 0;

  friend bool operator==(const TrialResult&, const TrialResult&) = default;
};

namespace detail {

constexpr int kEdgeLoopBase = 1000;
constexpr int kCloudLoopId = 2000;

struct TrialContext {
  sim::WorldState world;
  SearchParams params;
  ArchitectureKind arch;

  TerminalSearchPolicy terminal_policy;
  EdgeSearchPolicy edge_policy;
  CloudSearchPolicy cloud_policy;

  std::vector<ooda::LoopRunner<TerminalDecision>> terminals;
  std::vector<ooda::LoopRunner<EdgeDecision>> edges;
  std::optional<ooda::LoopRunner<CloudDecision>> cloud;

  std::optional<net::Network> network;
  std::map<int, int> membership;  // terminal loop -> edge loop
  std::map<int, Vec2> waypoints;  // uav id -> commanded waypoint

  TrialContext(const sim::WorldConfig& cfg, const SearchParams& p, ArchitectureKind a,
               std::uint64_t seed)
      : world(sim::make_world(with_seed(cfg, split_seed(seed, 11)))),
        params(p),
        arch(a),
        terminal_policy(cfg, p, a != ArchitectureKind::SingleLayer),
        edge_policy(cfg, p),
        cloud_policy(cfg, p) {
    const bool coordinated = arch != ArchitectureKind::SingleLayer;
    const bool clouded = arch == ArchitectureKind::HOoda;

    std::vector<Rect> regions = edge_regions(cfg, p.n_edges);

    if (coordinated) {
      network.emplace(split_seed(seed, 12));
      for (int i = 0; i < cfg.n_uavs; ++i) network->add_node(i, net::LayerRole::Terminal);
      for (int e = 0; e < p.n_edges; ++e)
        network->add_node(kEdgeLoopBase + e, net::LayerRole::Edge);
      if (clouded) network->add_node(kCloudLoopId, net::LayerRole::Cloud);
      // complete terminal<->edge links so membership can migrate
      for (int i = 0; i < cfg.n_uavs; ++i)
        for (int e = 0; e < p.n_edges; ++e) {
          const int edge_id = kEdgeLoopBase + e;
          net::Link up{i, edge_id, p.terminal_edge_latency, p.terminal_edge_bandwidth,
                       p.loss_prob};
          net::Link down{edge_id, i, p.terminal_edge_latency, p.terminal_edge_bandwidth,
                         p.loss_prob};
          network->add_link(up);
          network->add_link(down);
        }
      if (clouded)
        for (int e = 0; e < p.n_edges; ++e) {
          const int edge_id = kEdgeLoopBase + e;
          network->add_link({edge_id, kCloudLoopId, p.edge_cloud_latency,
                             p.edge_cloud_bandwidth, p.loss_prob});
          network->add_link({kCloudLoopId, edge_id, p.edge_cloud_latency,
                             p.edge_cloud_bandwidth, p.loss_prob});
        }
    }

    // initial membership by start position
    std::map<int, std::vector<int>> rosters;
    for (int e = 0; e < p.n_edges; ++e) rosters[kEdgeLoopBase + e] = {};
    for (int i = 0; i < cfg.n_uavs; ++i) {
      const double strip_w = cfg.extent_x / p.n_edges;
      int e = std::min(p.n_edges - 1,
                       static_cast<int>(world.uavs[static_cast<std::size_t>(i)].position.x / strip_w));
      membership[i] = kEdgeLoopBase + e;
      rosters[kEdgeLoopBase + e].push_back(i);
    }

    for (int i = 0; i < cfg.n_uavs; ++i) {
      ooda::LoopState<TerminalDecision> st;
      st.config = {i, net::LayerRole::Terminal, p.terminal_tick, p.terminal_depth};
      st.belief = TerminalSearchPolicy::initial_belief(cfg, p);
      st.rng = Rng(split_seed(seed, 100 + static_cast<std::uint64_t>(i)));
      if (coordinated) st.parent = membership[i];
      terminals.emplace_back(std::move(st), &terminal_policy);
    }

    if (coordinated) {
      for (int e = 0; e < p.n_edges; ++e) {
        const int edge_id = kEdgeLoopBase + e;
        ooda::LoopState<EdgeDecision> st;
        st.config = {edge_id, net::LayerRole::Edge, p.edge_tick, p.edge_depth};
        st.belief = EdgeSearchPolicy::initial_belief(regions[static_cast<std::size_t>(e)], cfg, p);
        st.rng = Rng(split_seed(seed, 500 + static_cast<std::uint64_t>(e)));
        if (clouded) st.parent = kCloudLoopId;
        st.children = rosters[edge_id];
        st.last_decision.region = regions[static_cast<std::size_t>(e)];
        st.last_decision.lanes =
            LaneGrid(regions[static_cast<std::size_t>(e)], cfg.sensing_radius, p.lane_overlap);
        st.last_decision.members = rosters[edge_id];
        edges.emplace_back(std::move(st), &edge_policy);
      }
    }

    if (clouded) {
      ooda::LoopState<CloudDecision> st;
      st.config = {kCloudLoopId, net::LayerRole::Cloud, p.cloud_tick, p.cloud_depth};
      st.belief = CloudSearchPolicy::initial_belief(cfg, p);
      st.rng = Rng(split_seed(seed, 900));
      for (int e = 0; e < p.n_edges; ++e) {
        st.last_decision.edge_regions[kEdgeLoopBase + e] = regions[static_cast<std::size_t>(e)];
        st.last_decision.rosters[kEdgeLoopBase + e] = rosters[kEdgeLoopBase + e];
      }
      st.children = {};
      for (int e = 0; e < p.n_edges; ++e) st.children.push_back(kEdgeLoopBase + e);
      cloud.emplace(std::move(st), &cloud_policy);
    }
  }

  static sim::WorldConfig with_seed(sim::WorldConfig cfg, std::uint64_t s) {
    cfg.seed = s;
    return cfg;
  }

  static std::vector<Rect> edge_regions(const sim::WorldConfig& cfg, int n_edges) {
    std::vector<Rect> out;
    const double w = cfg.extent_x / n_edges;
    for (int e = 0; e < n_edges; ++e)
      out.push_back({{e * w, 0.0}, {(e + 1) * w, cfg.extent_y}});
    return out;
  }

  void route(ooda::StepOutput&& out) {
    for (auto& a : out.actions)
      if (a.kind == "set_waypoint") waypoints[a.actor] = a.point;
    if (!network) return;
    const double now = world.clock;
    for (auto& r : out.reports) {
      const int from = r.from_loop, to = r.to_loop;
      network->send(net::MessagePayload{std::move(r)}, from, to, now);
    }
    for (auto& d : out.directives) {
      const int from = d.from_loop, to = d.to_loop;
      network->send(net::MessagePayload{std::move(d)}, from, to, now);
    }
  }

  void deliver_network() {
    if (!network) return;
    for (auto& env : network->deliver_due(world.clock)) {
      // roster changes re-home terminal report routes
      if (const auto* dir = std::get_if<ooda::Directive>(&env.payload);
          dir != nullptr && env.from == kCloudLoopId) {
        for (int uav : dir->payload.ids) {
          membership[uav] = env.to;
          terminals[static_cast<std::size_t>(uav)].state().parent = env.to;
        }
      }
      ooda::LoopInput in;
      in.time = env.deliver_at;
      in.sender = env.from;
      if (auto* rep = std::get_if<ooda::Report>(&env.payload))
        in.body = std::move(*rep);
      else
        in.body = std::move(std::get<ooda::Directive>(env.payload));
      deliver_to_loop(env.to, std::move(in));
    }
  }

  void deliver_to_loop(int loop_id, ooda::LoopInput in) {
    if (loop_id == kCloudLoopId && cloud) {
      cloud->deliver(std::move(in));
    } else if (loop_id >= kEdgeLoopBase) {
      const std::size_t e = static_cast<std::size_t>(loop_id - kEdgeLoopBase);
      if (e < edges.size()) edges[e].deliver(std::move(in));
    } else if (loop_id >= 0 && static_cast<std::size_t>(loop_id) < terminals.size()) {
      terminals[static_cast<std::size_t>(loop_id)].deliver(std::move(in));
    }
  }

  // Sense every UAV; returns true when any target is observed. Observations
  // feed the terminal loops.
  bool sense_all() {
    bool found = false;
    for (const auto& uav : world.uavs) {
      auto res = sim::sense(uav, world);
      if (!res.targets.empty()) {
        found = true;
        for (const auto& t : res.targets) {
          auto& tgt = world.targets[static_cast<std::size_t>(t.target_id)];
          if (!tgt.detected) {
            tgt.detected = true;
            tgt.detect_time = world.clock;
          }
        }
      }
      ooda::ObservationMsg obs;
      obs.sensor_id = uav.id;
      obs.time = world.clock;
      obs.position = uav.position;
      obs.sensing_radius = world.config.sensing_radius;
      for (const auto& t : res.targets) obs.sightings.push_back({t.target_id, t.position});
      obs.swept_cells = std::move(res.covered_cells);
      deliver_to_loop(uav.id, ooda::make_input(world.clock, uav.id, std::move(obs)));
    }
    return found;
  }

  void run_due_loops() {
    const double now = world.clock;
    for (auto& t : terminals)
      if (auto out = t.run_cycle(now)) route(std::move(*out));
    for (auto& e : edges)
      if (auto out = e.run_cycle(now)) route(std::move(*out));
    if (cloud)
      if (auto out = cloud->run_cycle(now)) route(std::move(*out));
  }

  void steer() {
    for (auto& uav : world.uavs) {
      auto it = waypoints.find(uav.id);
      if (it == waypoints.end()) continue;
      const Vec2 delta = it->second - uav.position;
      if (delta.norm() > 1e-9) uav.heading = normalize_angle(std::atan2(delta.y, delta.x));
    }
  }
};

}  // namespace detail

// One seeded trial: identical worlds across architectures for a given seed,
// stepping world, network and loops until first detection or the horizon.
inline TrialResult run_trial(const sim::WorldConfig& cfg, const SearchParams& params,
                             ArchitectureKind arch, std::uint64_t seed) {
  sim::validate(cfg);
  validate(params);
  detail::TrialContext ctx(cfg, params, arch, seed);

  TrialResult result;
  double termination_time = cfg.horizon;

  if (ctx.sense_all()) {
    result.found = true;
    result.search_time = 0.0;
    termination_time = 0.0;
  } else {
    ctx.run_due_loops();
    while (ctx.world.clock + cfg.tick <= cfg.horizon + 1e-9) {
      ctx.steer();
      sim::advance_world(ctx.world);
      ++result.ticks;
      ctx.deliver_network();
      if (ctx.sense_all()) {
        result.found = true;
        result.search_time = ctx.world.clock;
        termination_time = ctx.world.clock;
        break;
      }
      ctx.run_due_loops();
    }
  }

  result.efficiency =
      ctx.world.coverage.covered_fraction() / std::max(termination_time, cfg.tick);
  return result;
}

}  // namespace hooda::bench
