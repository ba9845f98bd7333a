#pragma once

// Test-side exhaustive oracle for tiny SFC placement instances. Written
// independently of the library's placement path: Floyd-Warshall routing,
// plain-loop feasibility and scoring.

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "hooda/nfv/substrate.hpp"

namespace oracle {

using hooda::nfv::BwMilli;
using hooda::nfv::SfcRequest;
using hooda::nfv::Substrate;

struct AllPairs {
  std::vector<int> ids;
  std::map<int, int> index;
  std::vector<std::vector<double>> dist;
  std::vector<std::vector<int>> next;  // next hop on the shortest path
};

inline AllPairs floyd_warshall(const Substrate& s) {
  AllPairs ap;
  ap.ids = s.node_ids();
  const int n = static_cast<int>(ap.ids.size());
  for (int i = 0; i < n; ++i) ap.index[ap.ids[i]] = i;
  const double inf = std::numeric_limits<double>::infinity();
  ap.dist.assign(n, std::vector<double>(n, inf));
  ap.next.assign(n, std::vector<int>(n, -1));
  for (int i = 0; i < n; ++i) {
    ap.dist[i][i] = 0.0;
    ap.next[i][i] = i;
  }
  for (const auto& [key, link] : s.links()) {
    const int a = ap.index.at(key.first), b = ap.index.at(key.second);
    ap.dist[a][b] = link.latency;
    ap.dist[b][a] = link.latency;
    ap.next[a][b] = b;
    ap.next[b][a] = a;
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (ap.dist[i][k] + ap.dist[k][j] < ap.dist[i][j]) {
          ap.dist[i][j] = ap.dist[i][k] + ap.dist[k][j];
          ap.next[i][j] = ap.next[i][k];
        }
  return ap;
}

inline std::optional<std::vector<int>> reconstruct(const AllPairs& ap, int from, int to) {
  const int a = ap.index.at(from), b = ap.index.at(to);
  if (ap.next[a][b] < 0) return std::nullopt;
  std::vector<int> path{from};
  int cur = a;
  while (cur != b) {
    cur = ap.next[cur][b];
    path.push_back(ap.ids[static_cast<std::size_t>(cur)]);
  }
  return path;
}

struct Scored {
  std::vector<int> assignment;
  double qoe = -1.0;
  double latency = 0.0;
  BwMilli allocated = 0;
};

// Evaluates one assignment tuple, or nullopt when infeasible.
inline std::optional<Scored> evaluate(const Substrate& s, const SfcRequest& r, const AllPairs& ap,
                                      const std::vector<int>& assignment,
                                      double min_bw_fraction, double w_delay, double w_energy,
                                      double w_bw) {
  std::map<int, int> cpu;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    const auto& node = s.node(assignment[i]);
    if (!r.chain[i].allowed_layers.allows(node.layer)) return std::nullopt;
    cpu[assignment[i]] += r.chain[i].cpu_demand;
  }
  for (const auto& [id, d] : cpu)
    if (d > s.node(id).cpu_capacity - s.node(id).cpu_used) return std::nullopt;

  double latency = 0.0;
  std::map<std::pair<int, int>, int> traversals;
  int at = r.source;
  for (std::size_t i = 0; i <= assignment.size(); ++i) {
    const int goal = i < assignment.size() ? assignment[i] : r.sink;
    auto path = reconstruct(ap, at, goal);
    if (!path) return std::nullopt;
    for (std::size_t j = 1; j < path->size(); ++j) {
      const int a = std::min((*path)[j - 1], (*path)[j]);
      const int b = std::max((*path)[j - 1], (*path)[j]);
      latency += s.link(a, b).latency;
      ++traversals[{a, b}];
    }
    at = goal;
  }
  if (latency > r.max_latency) return std::nullopt;

  BwMilli alloc = r.bandwidth_demand;
  for (const auto& [key, count] : traversals) {
    const auto& l = s.link(key.first, key.second);
    alloc = std::min(alloc, (l.bw_capacity - l.bw_used) / count);
  }
  if (alloc < 0) alloc = 0;
  const auto need = static_cast<BwMilli>(
      std::ceil(static_cast<double>(r.bandwidth_demand) * min_bw_fraction));
  if (alloc < need) return std::nullopt;

  double energy = 0.0;
  for (std::size_t i = 0; i < assignment.size(); ++i)
    energy += r.chain[i].cpu_demand * s.node(assignment[i]).energy_coeff;
  double e_max = 0.0;
  for (int id : s.node_ids()) e_max = std::max(e_max, s.node(id).energy_coeff);
  e_max *= r.total_cpu();

  const double delay_term = 1.0 - std::min(latency / r.max_latency, 1.0);
  const double energy_term = e_max > 0.0 ? 1.0 - std::min(energy / e_max, 1.0) : 1.0;
  const double bw_term =
      std::min(static_cast<double>(alloc) / static_cast<double>(r.bandwidth_demand), 1.0);

  Scored out;
  out.assignment = assignment;
  out.latency = latency;
  out.allocated = alloc;
  out.qoe = w_delay * delay_term + w_energy * energy_term + w_bw * bw_term;
  return out;
}

// Enumerates every node tuple; returns the best feasible assignment.
inline std::optional<Scored> best_placement(const Substrate& s, const SfcRequest& r,
                                            double min_bw_fraction = 0.5,
                                            double w_delay = 1.0 / 3.0,
                                            double w_energy = 1.0 / 3.0,
                                            double w_bw = 1.0 / 3.0) {
  const auto ap = floyd_warshall(s);
  const auto ids = s.node_ids();
  const std::size_t n = ids.size(), len = r.chain.size();
  std::vector<int> assignment(len, 0);
  std::optional<Scored> best;
  std::size_t total = 1;
  for (std::size_t i = 0; i < len; ++i) total *= n;
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (std::size_t i = 0; i < len; ++i) {
      assignment[i] = ids[c % n];
      c /= n;
    }
    auto scored = evaluate(s, r, ap, assignment, min_bw_fraction, w_delay, w_energy, w_bw);
    if (scored && (!best || scored->qoe > best->qoe)) best = scored;
  }
  return best;
}

}  // namespace oracle
