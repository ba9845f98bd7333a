#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "hooda/errors.hpp"
#include "hooda/loop.hpp"

namespace hooda::ooda {

// Parent/child wiring of loops across adjacent layers. Reports route child ->
// parent, directives parent -> child. A full tree has one cloud root; partial
// forests (e.g. edge-rooted trees without a cloud) are valid for the
// two-level architectures.
class LoopTopology {
public:
  LoopTopology& nest(const LoopConfig& parent, std::span<const LoopConfig> children) {
    register_loop(parent);
    for (const auto& child : children) {
      register_loop(child);
      if (!net::is_parent_layer(parent.layer, child.layer))
        throw TopologyError("loop " + std::to_string(parent.loop_id) + " (" +
                            net::to_string(parent.layer) + ") cannot parent loop " +
                            std::to_string(child.loop_id) + " (" + net::to_string(child.layer) +
                            "): layers must be adjacent");
      if (child.tick_period > parent.tick_period + 1e-12)
        throw TopologyError("child loop " + std::to_string(child.loop_id) +
                            " must tick at least as fast as its parent");
      if (parent_.count(child.loop_id))
        throw TopologyError("loop " + std::to_string(child.loop_id) + " already has a parent");
      if (is_ancestor(child.loop_id, parent.loop_id))
        throw TopologyError("nesting loop " + std::to_string(child.loop_id) + " under " +
                            std::to_string(parent.loop_id) + " would create a cycle");
      parent_[child.loop_id] = parent.loop_id;
      children_[parent.loop_id].push_back(child.loop_id);
    }
    return *this;
  }

  bool contains(int loop_id) const { return loops_.count(loop_id) > 0; }
  const LoopConfig& config(int loop_id) const { return loops_.at(loop_id); }

  std::optional<int> parent_of(int loop_id) const {
    auto it = parent_.find(loop_id);
    if (it == parent_.end()) return std::nullopt;
    return it->second;
  }

  std::vector<int> children_of(int loop_id) const {
    auto it = children_.find(loop_id);
    if (it == children_.end()) return {};
    return it->second;
  }

  std::vector<int> roots() const {
    std::vector<int> r;
    for (const auto& [id, cfg] : loops_)
      if (!parent_.count(id)) r.push_back(id);
    return r;
  }

  // One upward route per non-root loop; downward mirrors it.
  std::size_t upward_route_count() const { return parent_.size(); }
  std::size_t downward_route_count() const { return parent_.size(); }
  std::size_t loop_count() const { return loops_.size(); }

  // Full-tree check: a single cloud root over everything.
  void validate_tree() const {
    auto r = roots();
    if (r.size() != 1)
      throw TopologyError("topology must have exactly one root, found " +
                          std::to_string(r.size()));
    if (loops_.at(r.front()).layer != net::LayerRole::Cloud)
      throw TopologyError("topology root must be a cloud loop");
  }

private:
  void register_loop(const LoopConfig& cfg) {
    validate(cfg);
    auto [it, inserted] = loops_.emplace(cfg.loop_id, cfg);
    if (!inserted && (it->second.layer != cfg.layer))
      throw TopologyError("loop " + std::to_string(cfg.loop_id) +
                          " registered twice with different layers");
  }

  bool is_ancestor(int maybe_ancestor, int node) const {
    while (true) {
      if (node == maybe_ancestor) return true;
      auto it = parent_.find(node);
      if (it == parent_.end()) return false;
      node = it->second;
    }
  }

  std::map<int, LoopConfig> loops_;
  std::map<int, int> parent_;
  std::map<int, std::vector<int>> children_;
};

inline LoopTopology nest(const LoopConfig& parent, std::span<const LoopConfig> children) {
  LoopTopology t;
  t.nest(parent, children);
  return t;
}

}  // namespace hooda::ooda
