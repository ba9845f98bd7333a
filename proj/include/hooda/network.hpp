#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "hooda/errors.hpp"
#include "hooda/layer.hpp"
#include "hooda/messages.hpp"
#include "hooda/rng.hpp"

namespace hooda::net {

struct Link {
  int from = -1;
  int to = -1;
  double latency = 0.0;    // seconds, >= 0
  double bandwidth = 1.0;  // units/second, > 0
  double loss_prob = 0.0;  // in [0, 1]
};

inline void validate(const Link& l) {
  if (l.latency < 0.0) throw ValidationError("link latency must be >= 0");
  if (l.bandwidth <= 0.0) throw ValidationError("link bandwidth must be > 0");
  if (l.loss_prob < 0.0 || l.loss_prob > 1.0)
    throw ValidationError("link loss_prob must be in [0, 1]");
}

using MessagePayload = std::variant<ooda::Report, ooda::Directive>;

struct MessageEnvelope {
  int from = -1;
  int to = -1;
  double sent_at = 0.0;
  double deliver_at = 0.0;
  double size = 0.0;
  std::uint64_t seq = 0;
  MessagePayload payload;
};

// Abstract message sizes in bandwidth units. Reports grow with the number of
// occupied map cells; directives are small and fixed.
struct MessageSizing {
  double directive_size = 1.0;
  double report_base = 1.0;
  double report_per_cell = 0.05;

  double size_of(const MessagePayload& p) const {
    if (const auto* rep = std::get_if<ooda::Report>(&p))
      return report_base + report_per_cell * rep->map_fragment.occupied_cells();
    return directive_size;
  }
};

// In-flight message store for one trial. Links connect adjacent layers only;
// delivery time follows deliver_at = sent_at + latency + size / bandwidth, and
// lossy links drop from a seeded stream.
class Network {
public:
  explicit Network(std::uint64_t seed = 0, MessageSizing sizing = {})
      : sizing_(sizing), rng_(seed) {}

  void add_node(int id, LayerRole layer) { nodes_[id] = layer; }

  void add_link(const Link& l) {
    validate(l);
    auto f = nodes_.find(l.from), t = nodes_.find(l.to);
    if (f == nodes_.end() || t == nodes_.end())
      throw RoutingError("link endpoints must be registered nodes");
    const int dr = layer_rank(f->second) - layer_rank(t->second);
    if (dr != 1 && dr != -1)
      throw RoutingError("links must connect adjacent layers (" +
                         std::string(to_string(f->second)) + " <-> " + to_string(t->second) + ")");
    links_[{l.from, l.to}] = l;
  }

  bool has_link(int from, int to) const { return links_.count({from, to}) > 0; }

  // Queues a message; returns false when the loss stream dropped it.
  bool send(MessagePayload payload, int from, int to, double sent_at) {
    auto it = links_.find({from, to});
    if (it == links_.end())
      throw RoutingError("no link from node " + std::to_string(from) + " to node " +
                         std::to_string(to));
    const Link& link = it->second;
    ++sent_count_;
    if (link.loss_prob > 0.0 && rng_.bernoulli(link.loss_prob)) {
      ++drop_count_;
      return false;
    }
    MessageEnvelope env;
    env.from = from;
    env.to = to;
    env.sent_at = sent_at;
    env.size = sizing_.size_of(payload);
    env.deliver_at = sent_at + link.latency + env.size / link.bandwidth;
    env.seq = next_seq_++;
    env.payload = std::move(payload);
    queue_.emplace(Key{env.deliver_at, env.from, env.seq}, std::move(env));
    return true;
  }

  // Removes and returns every message due by `clock`, ordered by
  // (deliver_at, sender id, sequence number). Clock must not regress.
  std::vector<MessageEnvelope> deliver_due(double clock) {
    if (clock < last_clock_) throw ClockError("deliver_due: clock regression");
    last_clock_ = clock;
    std::vector<MessageEnvelope> out;
    auto it = queue_.begin();
    while (it != queue_.end() && it->first.deliver_at <= clock) {
      out.push_back(std::move(it->second));
      it = queue_.erase(it);
    }
    return out;
  }

  std::uint64_t drop_count() const { return drop_count_; }
  std::uint64_t sent_count() const { return sent_count_; }
  std::size_t queue_size() const { return queue_.size(); }
  const MessageSizing& sizing() const { return sizing_; }

private:
  struct Key {
    double deliver_at;
    int from;
    std::uint64_t seq;
    friend bool operator<(const Key& a, const Key& b) {
      if (a.deliver_at != b.deliver_at) return a.deliver_at < b.deliver_at;
      if (a.from != b.from) return a.from < b.from;
      return a.seq < b.seq;
    }
  };

  MessageSizing sizing_;
  std::map<int, LayerRole> nodes_;
  std::map<std::pair<int, int>, Link> links_;
  std::map<Key, MessageEnvelope> queue_;
  std::uint64_t next_seq_ = 0;
  std::uint64_t sent_count_ = 0;
  std::uint64_t drop_count_ = 0;
  Rng rng_;
  double last_clock_ = -std::numeric_limits<double>::infinity();
};

}  // namespace hooda::net
