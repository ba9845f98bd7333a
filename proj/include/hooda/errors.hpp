#pragma once

#include <stdexcept>
#include <string>

namespace hooda {

// Scenario/config contract violation: bad field value, unknown key, broken invariant.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed loop tree: layer-skipping link, duplicate parent, cycle.
class TopologyError : public std::runtime_error {
public:
  explicit TopologyError(const std::string& msg) : std::runtime_error(msg) {}
};

// No link between endpoints, or endpoints not registered.
class RoutingError : public std::runtime_error {
public:
  explicit RoutingError(const std::string& msg) : std::runtime_error(msg) {}
};

// Simulation clock moved backwards.
class ClockError : public std::runtime_error {
public:
  explicit ClockError(const std::string& msg) : std::runtime_error(msg) {}
};

// Loop input carries a timestamp from the future.
class RejectedInputError : public std::runtime_error {
public:
  explicit RejectedInputError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed placement or inconsistent substrate state.
class PlacementError : public std::runtime_error {
public:
  explicit PlacementError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace hooda
