#pragma once

#include <algorithm>
#include <cmath>

#include "hooda/errors.hpp"
#include "hooda/nfv/substrate.hpp"

namespace hooda::nfv {

struct QoeWeights {
  double delay = 1.0 / 3.0;
  double energy = 1.0 / 3.0;
  double bandwidth = 1.0 / 3.0;
};

inline void validate(const QoeWeights& w) {
  if (w.delay < 0.0 || w.energy < 0.0 || w.bandwidth < 0.0)
    throw ValidationError("qoe weights must be non-negative");
  if (std::abs(w.delay + w.energy + w.bandwidth - 1.0) > 1e-9)
    throw ValidationError("qoe weights must sum to 1");
}

struct QoeScore {
  double value = 0.0;
  double delay_term = 0.0;
  double energy_term = 0.0;
  double bandwidth_term = 0.0;
};

namespace detail {

inline void check_placement(const Placement& p, const SfcRequest& r, const Substrate& s) {
  if (p.vnf_to_node.size() != r.chain.size())
    throw PlacementError("placement: mapping must cover the whole chain");
  for (std::size_t i = 0; i < p.vnf_to_node.size(); ++i) {
    if (!s.has_node(p.vnf_to_node[i])) throw PlacementError("placement: unknown node");
    if (!r.chain[i].allowed_layers.allows(s.node(p.vnf_to_node[i]).layer))
      throw PlacementError("placement: vnf mapped to a disallowed layer");
  }
  // segments must connect source -> vnfs -> sink consistently
  if (p.segments.size() != r.chain.size() + 1)
    throw PlacementError("placement: segment count mismatch");
  int at = r.source;
  for (std::size_t i = 0; i < p.segments.size(); ++i) {
    const auto& seg = p.segments[i];
    if (seg.empty() || seg.front() != at)
      throw PlacementError("placement: disconnected path");
    const int goal = i < r.chain.size() ? p.vnf_to_node[i] : r.sink;
    if (seg.back() != goal) throw PlacementError("placement: disconnected path");
    for (std::size_t j = 1; j < seg.size(); ++j)
      if (!s.has_link(seg[j - 1], seg[j]))
        throw PlacementError("placement: path uses a missing link");
    at = goal;
  }
}

}  // namespace detail

// Normalized [0,1] score. delay_term = 1 - min(latency/max_latency, 1);
// energy_term = 1 - min(energy/E_max, 1) with E_max = total chain cpu times
// the largest energy coefficient in the substrate; bandwidth_term =
// min(allocated/demand, 1).
inline QoeScore score_qoe(const Placement& p, const SfcRequest& r, const Substrate& s,
                          const QoeWeights& w = {}) {
  validate(w);
  detail::check_placement(p, r, s);

  double latency = 0.0;
  for (const auto& seg : p.segments) latency += s.path_latency(seg);

  double energy = 0.0;
  for (std::size_t i = 0; i < r.chain.size(); ++i)
    energy += r.chain[i].cpu_demand * s.node(p.vnf_to_node[i]).energy_coeff;
  const double e_max = r.total_cpu() * s.max_energy_coeff();

  QoeScore q;
  q.delay_term = 1.0 - std::min(latency / r.max_latency, 1.0);
  q.energy_term = e_max > 0.0 ? 1.0 - std::min(energy / e_max, 1.0) : 1.0;
  q.bandwidth_term =
      std::min(static_cast<double>(p.allocated_bw) / static_cast<double>(r.bandwidth_demand), 1.0);
  q.value = w.delay * q.delay_term + w.energy * q.energy_term + w.bandwidth * q.bandwidth_term;
  return q;
}

}  // namespace hooda::nfv
