#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hooda/errors.hpp"
#include "hooda/layer.hpp"
#include "hooda/messages.hpp"
#include "hooda/rng.hpp"
#include "hooda/stage.hpp"

namespace hooda::ooda {

struct LoopConfig {
  int loop_id = -1;
  net::LayerRole layer = net::LayerRole::Terminal;
  double tick_period = 1.0;  // seconds between cycle starts
  int depth = 1;             // refinement passes per Decide stage
};

inline void validate(const LoopConfig& c) {
  if (c.tick_period <= 0.0) throw ValidationError("loop config: tick_period must be > 0");
  if (c.depth < 1) throw ValidationError("loop config: depth must be >= 1");
}

// Everything a loop instance owns. All mutable per-loop state lives here
// (including the rng and the task state inside the decision payload), so a
// step is a pure function of the state value and its inputs.
template <typename Decision>
struct LoopState {
  LoopConfig config;
  Stage stage = Stage::Observe;
  std::uint64_t epoch = 0;  // completed Act count
  net::SituationMap belief;
  std::vector<Directive> pending_directives;
  Decision last_decision{};
  double clock = 0.0;
  Rng rng;

  std::optional<int> parent;  // routing targets, set by the driver from the topology
  std::vector<int> children;

  std::map<int, std::uint64_t> last_applied_version;  // per sender channel
  std::map<int, std::uint64_t> next_version_out;      // per receiver channel
  std::uint64_t stale_drop_count = 0;

  std::vector<LoopInput> inbox;  // inputs buffered until the next Observe
};

struct StepOutput {
  std::vector<Action> actions;
  std::vector<Report> reports;
  std::vector<Directive> directives;

  void append(StepOutput&& o) {
    std::move(o.actions.begin(), o.actions.end(), std::back_inserter(actions));
    std::move(o.reports.begin(), o.reports.end(), std::back_inserter(reports));
    std::move(o.directives.begin(), o.directives.end(), std::back_inserter(directives));
  }
};

// Stage behaviour supplied by the embedding context. Policies must be
// stateless across calls: anything that persists belongs in LoopState.
template <typename Decision>
class LoopPolicy {
public:
  virtual ~LoopPolicy() = default;

  // Merge sorted inputs (observations, report fragments) into the belief.
  // Directives have already been version-checked into pending_directives.
  virtual void observe(LoopState<Decision>& state, std::span<const LoopInput> inputs) = 0;

  // Recompute derived estimates; apply pending directives. The engine clears
  // pending_directives afterwards.
  virtual void orient(LoopState<Decision>& state) = 0;

  // One candidate revision of the incumbent decision.
  virtual Decision propose(const LoopState<Decision>& state, const Decision& incumbent,
                           Rng& rng) = 0;

  // Pure score of a candidate given the current belief; higher is better.
  virtual double evaluate(const LoopState<Decision>& state, const Decision& candidate) = 0;

  // Turn the incumbent decision into actions and outbound messages. The engine
  // stamps from_loop, epoch_issued and directive versions.
  virtual StepOutput act(LoopState<Decision>& state) = 0;
};

// k accept-if-strictly-improving refinement passes over the incumbent.
// With a deterministic generator the candidate sequence for k passes is a
// prefix of the sequence for k+1, so the final score is non-decreasing in k.
template <typename Decision, typename Generator, typename Evaluator>
Decision run_depth_cycles(Decision incumbent, int k, Generator&& generate, Evaluator&& evaluate) {
  if (k < 1) throw std::invalid_argument("run_depth_cycles: depth must be >= 1");
  double best = evaluate(incumbent);
  for (int pass = 0; pass < k; ++pass) {
    Decision candidate = generate(incumbent);
    const double score = evaluate(candidate);
    if (score > best) {
      incumbent = std::move(candidate);
      best = score;
    }
  }
  return incumbent;
}

// Advances the loop by exactly one stage. Inputs may arrive at any stage; they
// are buffered and merged at the next Observe, sorted by (timestamp, sender).
template <typename Decision>
StepOutput step_stage(LoopState<Decision>& st, std::span<const LoopInput> inputs,
                      LoopPolicy<Decision>& policy) {
  for (const auto& in : inputs) {
    if (in.time > st.clock)
      throw RejectedInputError("loop " + std::to_string(st.config.loop_id) +
                               ": input timestamped in the future");
    st.inbox.push_back(in);
  }

  StepOutput out;
  switch (st.stage) {
    case Stage::Observe: {
      std::stable_sort(st.inbox.begin(), st.inbox.end(), [](const LoopInput& a, const LoopInput& b) {
        if (a.time != b.time) return a.time < b.time;
        return a.sender < b.sender;
      });
      std::vector<LoopInput> batch;
      batch.swap(st.inbox);
      for (const auto& in : batch) {
        if (const auto* dir = std::get_if<Directive>(&in.body)) {
          auto& last = st.last_applied_version[dir->from_loop];
          if (dir->version <= last) {
            ++st.stale_drop_count;
          } else {
            last = dir->version;
            st.pending_directives.push_back(*dir);
          }
        }
      }
      policy.observe(st, batch);
      break;
    }
    case Stage::Orient: {
      policy.orient(st);
      st.pending_directives.clear();
      break;
    }
    case Stage::Decide: {
      auto gen = [&](const Decision& inc) { return policy.propose(st, inc, st.rng); };
      auto eval = [&](const Decision& d) { return policy.evaluate(st, d); };
      st.last_decision = run_depth_cycles(st.last_decision, st.config.depth, gen, eval);
      break;
    }
    case Stage::Act: {
      out = policy.act(st);
      for (auto& r : out.reports) {
        r.from_loop = st.config.loop_id;
        r.epoch_issued = st.epoch;
      }
      for (auto& d : out.directives) {
        d.from_loop = st.config.loop_id;
        d.epoch_issued = st.epoch;
        d.version = ++st.next_version_out[d.to_loop];
      }
      ++st.epoch;
      break;
    }
  }
  st.stage = next_stage(st.stage);
  return out;
}

// Drives a loop at its cadence: one full atomic Observe..Act cycle every
// tick_period. Messages delivered between cycles queue until the next fire.
template <typename Decision>
class LoopRunner {
public:
  LoopRunner() = default;
  LoopRunner(LoopState<Decision> initial, LoopPolicy<Decision>* policy)
      : state_(std::move(initial)), policy_(policy), next_fire_(0.0) {
    validate(state_.config);
  }

  LoopState<Decision>& state() { return state_; }
  const LoopState<Decision>& state() const { return state_; }

  void deliver(LoopInput in) { pending_.push_back(std::move(in)); }

  bool due(double now) const { return now + 1e-9 >= next_fire_; }

  // Runs one full cycle if due. Returns outputs of the Act stage.
  std::optional<StepOutput> run_cycle(double now) {
    if (!due(now)) return std::nullopt;
    if (now < state_.clock) throw ClockError("loop cycle clock regression");
    state_.clock = now;
    StepOutput all;
    std::vector<LoopInput> batch;
    batch.swap(pending_);
    all.append(step_stage(state_, batch, *policy_));
    for (int i = 0; i < 3; ++i) all.append(step_stage(state_, {}, *policy_));
    next_fire_ += state_.config.tick_period;
    if (next_fire_ <= now) next_fire_ = now + state_.config.tick_period;
    return all;
  }

private:
  LoopState<Decision> state_{};
  LoopPolicy<Decision>* policy_ = nullptr;
  std::vector<LoopInput> pending_;
  double next_fire_ = 0.0;
};

}  // namespace hooda::ooda
