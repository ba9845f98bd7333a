#pragma once

#include <cstdint>
#include <string>

#include "hooda/errors.hpp"

namespace hooda::net {

// The three tiers of the cloud-edge-terminal hierarchy, ordered bottom-up.
enum class LayerRole : std::uint8_t { Terminal = 0, Edge = 1, Cloud = 2 };

constexpr int layer_rank(LayerRole r) { return static_cast<int>(r); }

// True when `parent` sits exactly one level above `child`.
constexpr bool is_parent_layer(LayerRole parent, LayerRole child) {
  return layer_rank(parent) == layer_rank(child) + 1;
}

inline const char* to_string(LayerRole r) {
  switch (r) {
    case LayerRole::Terminal: return "terminal";
    case LayerRole::Edge: return "edge";
    case LayerRole::Cloud: return "cloud";
  }
  return "?";
}

inline LayerRole layer_from_string(const std::string& s) {
  if (s == "terminal") return LayerRole::Terminal;
  if (s == "edge") return LayerRole::Edge;
  if (s == "cloud") return LayerRole::Cloud;
  throw ValidationError("unknown layer role: " + s);
}

}  // namespace hooda::net
