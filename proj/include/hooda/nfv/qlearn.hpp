#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "hooda/nfv/substrate.hpp"
#include "hooda/rng.hpp"

namespace hooda::nfv {

// Dueling aggregation: Q(s,a) = V(s) + A(s,a) - mean(A). The mean-centering
// keeps argmax Q = argmax A.
inline std::vector<double> dueling_q(double value, std::span<const double> advantages) {
  if (advantages.empty()) throw std::invalid_argument("dueling_q: empty action set");
  double mean = 0.0;
  for (double a : advantages) mean += a;
  mean /= static_cast<double>(advantages.size());
  std::vector<double> q(advantages.size());
  for (std::size_t i = 0; i < advantages.size(); ++i) q[i] = value + advantages[i] - mean;
  return q;
}

// Double-Q target: the online row selects the action, the target row evaluates
// it. Terminal transitions bootstrap nothing.
inline double double_q_target(double reward, double gamma, bool terminal,
                              std::span<const double> q_online_next,
                              std::span<const double> q_target_next) {
  if (gamma < 0.0 || gamma >= 1.0)
    throw std::invalid_argument("double_q_target: gamma must be in [0, 1)");
  if (terminal) return reward;
  if (q_online_next.empty() || q_online_next.size() != q_target_next.size())
    throw std::invalid_argument("double_q_target: online/target rows must match and be non-empty");
  std::size_t best = 0;
  for (std::size_t i = 1; i < q_online_next.size(); ++i)
    if (q_online_next[i] > q_online_next[best]) best = i;
  return reward + gamma * q_target_next[best];
}

// Tabular value/advantage decomposition: V per state, A per (state, action).
struct DuelingTable {
  int n_states = 0;
  int n_actions = 0;
  std::vector<double> v;
  std::vector<double> a;

  DuelingTable() = default;
  DuelingTable(int states, int actions)
      : n_states(states),
        n_actions(actions),
        v(static_cast<std::size_t>(states), 0.0),
        a(static_cast<std::size_t>(states) * actions, 0.0) {}

  std::span<const double> advantages(int s) const {
    return {a.data() + static_cast<std::size_t>(s) * n_actions,
            static_cast<std::size_t>(n_actions)};
  }

  std::vector<double> q_row(int s) const { return dueling_q(v[static_cast<std::size_t>(s)], advantages(s)); }
};

struct QAgentConfig {
  double alpha = 0.1;        // learning rate
  double gamma = 0.95;       // discount
  double epsilon0 = 1.0;     // initial exploration
  double epsilon_min = 0.05;
  double epsilon_decay = 0.99;  // per episode
  int target_sync_every = 100;  // updates between target syncs
  int capacity_buckets = 4;     // residual-capacity discretization per layer
};

// Dueling double Q-learner over a discretized substrate state. The state packs
// per-layer residual-capacity buckets with the chain length and position;
// actions index substrate nodes.
class QAgent {
public:
  QAgent(const QAgentConfig& cfg, std::vector<int> action_nodes, int max_chain_len)
      : cfg_(cfg),
        action_nodes_(std::move(action_nodes)),
        max_chain_len_(max_chain_len),
        epsilon_(cfg.epsilon0) {
    const int b = cfg_.capacity_buckets;
    n_states_ = b * b * b * max_chain_len_ * max_chain_len_;
    online_ = DuelingTable(n_states_, static_cast<int>(action_nodes_.size()));
    target_ = online_;
  }

  int encode_state(const Substrate& s, const SfcRequest& r, int position) const {
    const int b = cfg_.capacity_buckets;
    int packed = 0;
    for (int layer = 0; layer < 3; ++layer) {
      double cap = 0.0, used = 0.0;
      for (int id : s.node_ids()) {
        const auto& n = s.node(id);
        if (net::layer_rank(n.layer) != layer) continue;
        cap += n.cpu_capacity;
        used += n.cpu_used;
      }
      const double frac = cap > 0.0 ? 1.0 - used / cap : 0.0;
      int bucket = std::min(b - 1, static_cast<int>(frac * b));
      packed = packed * b + bucket;
    }
    const int len_idx = std::min(max_chain_len_, static_cast<int>(r.chain.size())) - 1;
    const int pos_idx = std::min(position, max_chain_len_ - 1);
    packed = packed * max_chain_len_ + len_idx;
    packed = packed * max_chain_len_ + pos_idx;
    return packed;
  }

  int n_actions() const { return static_cast<int>(action_nodes_.size()); }
  int action_node(int a) const { return action_nodes_[static_cast<std::size_t>(a)]; }
  const DuelingTable& online() const { return online_; }
  double epsilon() const { return epsilon_; }

  // Epsilon-greedy over the feasible subset. Returns -1 when nothing is
  // feasible. Greedy ties resolve to the lowest action index.
  int select_action(int state, std::span<const int> feasible, Rng& rng, bool explore) {
    if (feasible.empty()) return -1;
    if (explore && rng.bernoulli(epsilon_))
      return feasible[rng.uniform_int(feasible.size())];
    auto q = online_.q_row(state);
    int best = feasible[0];
    for (int a : feasible)
      if (q[static_cast<std::size_t>(a)] > q[static_cast<std::size_t>(best)]) best = a;
    return best;
  }

  // One dueling double-Q update. `next_feasible` masks the bootstrap argmax;
  // an empty mask is treated as terminal.
  void learn(int state, int action, double reward, int next_state,
             std::span<const int> next_feasible, bool terminal) {
    double y;
    if (terminal || next_feasible.empty()) {
      y = double_q_target(reward, cfg_.gamma, true, {}, {});
    } else {
      std::vector<double> qo, qt;
      auto full_o = online_.q_row(next_state);
      auto full_t = target_.q_row(next_state);
      for (int a : next_feasible) {
        qo.push_back(full_o[static_cast<std::size_t>(a)]);
        qt.push_back(full_t[static_cast<std::size_t>(a)]);
      }
      y = double_q_target(reward, cfg_.gamma, false, qo, qt);
    }
    auto q = online_.q_row(state);
    const double delta = y - q[static_cast<std::size_t>(action)];
    const int n = online_.n_actions;
    // gradient of Q = V + A(a) - mean(A) w.r.t. V and each A
    online_.v[static_cast<std::size_t>(state)] += cfg_.alpha * delta;
    for (int a = 0; a < n; ++a) {
      const double g = (a == action ? 1.0 : 0.0) - 1.0 / n;
      online_.a[static_cast<std::size_t>(state) * n + a] += cfg_.alpha * delta * g;
    }
    if (++updates_ % cfg_.target_sync_every == 0) target_ = online_;
  }

  void end_episode() { epsilon_ = std::max(cfg_.epsilon_min, epsilon_ * cfg_.epsilon_decay); }

private:
  QAgentConfig cfg_;
  std::vector<int> action_nodes_;
  int max_chain_len_;
  int n_states_ = 0;
  DuelingTable online_;
  DuelingTable target_;
  std::uint64_t updates_ = 0;
  double epsilon_;
};

}  // namespace hooda::nfv
