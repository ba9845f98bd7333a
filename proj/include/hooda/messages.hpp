#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hooda/geometry.hpp"
#include "hooda/situation_map.hpp"

namespace hooda::ooda {

// Decision parameters carried by a downward directive. `region` assigns an
// area of responsibility; `params` carries named scalars (lane ranges,
// transmission/placement parameters); `ids` carries an id list whose meaning
// depends on the channel (member roster for edges, lane list for terminals).
struct DirectivePayload {
  std::optional<Rect> region;
  std::map<std::string, double> params;
  std::vector<int> ids;

  friend bool operator==(const DirectivePayload&, const DirectivePayload&) = default;
};

// Downward message: parent loop -> child loop. `version` is stamped by the
// sending engine and increases strictly per (from, to) channel.
struct Directive {
  int from_loop = -1;
  int to_loop = -1;
  std::uint64_t epoch_issued = 0;
  std::uint64_t version = 0;
  DirectivePayload payload;
};

// Upward message: child loop -> parent loop.
struct Report {
  int from_loop = -1;
  int to_loop = -1;
  std::uint64_t epoch_issued = 0;
  net::SituationMap map_fragment;
  std::vector<double> metrics;
};

struct TargetSighting {
  int target_id = -1;
  Vec2 position{};
};

// Raw sensor input delivered to a terminal loop.
struct ObservationMsg {
  int sensor_id = -1;
  double time = 0.0;
  Vec2 position{};  // sensor position at observation time
  double sensing_radius = 0.0;
  std::vector<TargetSighting> sightings;
  std::vector<std::int32_t> swept_cells;  // world-grid indices inside the footprint
};

// Command emitted by an Act stage, applied by the surrounding driver.
struct Action {
  int actor = -1;
  std::string kind;
  Vec2 point{};
  std::map<std::string, double> params;
};

// Anything a loop can receive in one tick. `time` and `sender` define the
// deterministic merge order.
struct LoopInput {
  double time = 0.0;
  int sender = -1;
  std::variant<ObservationMsg, Report, Directive> body;
};

inline LoopInput make_input(double time, int sender, ObservationMsg obs) {
  return LoopInput{time, sender, std::move(obs)};
}
inline LoopInput make_input(double time, int sender, Report rep) {
  return LoopInput{time, sender, std::move(rep)};
}
inline LoopInput make_input(double time, int sender, Directive dir) {
  return LoopInput{time, sender, std::move(dir)};
}

}  // namespace hooda::ooda
