#pragma once

#include <cstdint>

namespace hooda::ooda {

// The four decision stages. The engine only ever advances through the cycle
// Observe -> Orient -> Decide -> Act -> Observe.
enum class Stage : std::uint8_t { Observe = 0, Orient = 1, Decide = 2, Act = 3 };

constexpr Stage next_stage(Stage s) {
  return static_cast<Stage>((static_cast<std::uint8_t>(s) + 1) % 4);
}

inline const char* to_string(Stage s) {
  switch (s) {
    case Stage::Observe: return "observe";
    case Stage::Orient: return "orient";
    case Stage::Decide: return "decide";
    case Stage::Act: return "act";
  }
  return "?";
}

}  // namespace hooda::ooda
