#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <vector>

#include "hooda/loop.hpp"
#include "hooda/topology.hpp"

using namespace hooda;
using namespace hooda::ooda;

namespace {

// Decision = scalar pick from a fixed candidate pool; score peaks at target.
struct PickDecision {
  double value = 0.0;
};

class PickPolicy : public LoopPolicy<PickDecision> {
public:
  explicit PickPolicy(std::vector<double> pool, double target = 7.0)
      : pool_(std::move(pool)), target_(target) {}

  void observe(LoopState<PickDecision>& st, std::span<const LoopInput> inputs) override {
    for (const auto& in : inputs) {
      if (const auto* rep = std::get_if<Report>(&in.body))
        st.belief.ingest(rep->map_fragment);
    }
  }

  void orient(LoopState<PickDecision>&) override {}

  PickDecision propose(const LoopState<PickDecision>&, const PickDecision&, Rng& rng) override {
    return {pool_[rng.uniform_int(pool_.size())]};
  }

  double evaluate(const LoopState<PickDecision>&, const PickDecision& d) override {
    return -(d.value - target_) * (d.value - target_);
  }

  StepOutput act(LoopState<PickDecision>& st) override {
    StepOutput out;
    Action a;
    a.actor = st.config.loop_id;
    a.kind = "pick";
    a.params["value"] = st.last_decision.value;
    out.actions.push_back(a);
    for (int child : st.children) {
      Directive d;
      d.to_loop = child;
      d.payload.params["value"] = st.last_decision.value;
      out.directives.push_back(d);
    }
    if (st.parent) {
      Report r;
      r.to_loop = *st.parent;
      r.metrics = {st.last_decision.value};
      out.reports.push_back(r);
    }
    return out;
  }

private:
  std::vector<double> pool_;
  double target_;
};

LoopState<PickDecision> make_state(int id, net::LayerRole layer, int depth = 1) {
  LoopState<PickDecision> st;
  st.config = {id, layer, 1.0, depth};
  st.rng = Rng(split_seed(77, static_cast<std::uint64_t>(id)));
  return st;
}

LoopConfig cfg(int id, net::LayerRole layer, double tick = 1.0) { return {id, layer, tick, 1}; }

}  // namespace

TEST_CASE("stage successor order is cyclic") {
  REQUIRE(next_stage(Stage::Observe) == Stage::Orient);
  REQUIRE(next_stage(Stage::Orient) == Stage::Decide);
  REQUIRE(next_stage(Stage::Decide) == Stage::Act);
  REQUIRE(next_stage(Stage::Act) == Stage::Observe);
}

TEST_CASE("observe with empty inputs leaves belief unchanged") {
  PickPolicy policy({1.0});
  auto st = make_state(0, net::LayerRole::Terminal);
  st.belief = net::SituationMap(net::Granularity::Local, {{0, 0}, {4, 4}}, 1.0, 0.25, 0.5, 0.0);
  const auto before = st.belief;
  auto out = step_stage(st, {}, policy);
  REQUIRE(st.stage == Stage::Orient);
  REQUIRE(st.belief == before);
  REQUIRE(out.actions.empty());
}

TEST_CASE("act increments epoch and wraps to observe") {
  PickPolicy policy({1.0});
  auto st = make_state(0, net::LayerRole::Terminal);
  st.stage = Stage::Act;
  const auto epoch_before = st.epoch;
  auto out = step_stage(st, {}, policy);
  REQUIRE(st.epoch == epoch_before + 1);
  REQUIRE(st.stage == Stage::Observe);
  REQUIRE(out.actions.size() == 1);
}

TEST_CASE("emitted messages carry the pre-increment epoch") {
  PickPolicy policy({1.0});
  auto st = make_state(3, net::LayerRole::Edge);
  st.children = {10, 11};
  st.parent = 0;
  st.stage = Stage::Act;
  st.epoch = 4;
  auto out = step_stage(st, {}, policy);
  REQUIRE(out.directives.size() == 2);
  for (const auto& d : out.directives) {
    REQUIRE(d.epoch_issued == 4);
    REQUIRE(d.from_loop == 3);
    REQUIRE(d.version == 1);
  }
  REQUIRE(out.reports.size() == 1);
  REQUIRE(out.reports[0].epoch_issued == 4);
}

TEST_CASE("future-timestamped input is rejected") {
  PickPolicy policy({1.0});
  auto st = make_state(0, net::LayerRole::Terminal);
  st.clock = 5.0;
  ObservationMsg obs;
  obs.time = 6.0;
  std::vector<LoopInput> in{make_input(6.0, 1, obs)};
  REQUIRE_THROWS_AS(step_stage(st, in, policy), RejectedInputError);
}

TEST_CASE("stale directives are dropped and counted, not errors") {
  PickPolicy policy({1.0});
  auto st = make_state(5, net::LayerRole::Terminal);
  st.clock = 10.0;
  Directive fresh;
  fresh.from_loop = 2;
  fresh.to_loop = 5;
  fresh.version = 3;
  Directive stale = fresh;
  stale.version = 3;  // same version as last applied -> stale
  std::vector<LoopInput> first{make_input(1.0, 2, fresh)};
  step_stage(st, first, policy);
  REQUIRE(st.pending_directives.size() == 1);
  REQUIRE(st.stale_drop_count == 0);
  // complete the cycle so the loop is back at Observe
  for (int i = 0; i < 3; ++i) step_stage(st, {}, policy);
  std::vector<LoopInput> second{make_input(2.0, 2, stale)};
  step_stage(st, second, policy);
  REQUIRE(st.pending_directives.empty());
  REQUIRE(st.stale_drop_count == 1);
}

TEST_CASE("two consecutive cycles with fixed inputs produce identical actions") {
  PickPolicy policy({2.0, 4.0, 6.0});
  auto st = make_state(0, net::LayerRole::Terminal);
  st.rng = Rng(0);
  auto run_cycle = [&](LoopState<PickDecision>& s) {
    std::vector<Action> acts;
    for (int i = 0; i < 4; ++i) {
      auto out = step_stage(s, {}, policy);
      for (auto& a : out.actions) acts.push_back(a);
    }
    return acts;
  };
  auto s1 = st;
  auto first = run_cycle(s1);
  auto s2 = st;
  auto second = run_cycle(s2);
  REQUIRE(first.size() == second.size());
  for (std::size_t i = 0; i < first.size(); ++i)
    REQUIRE(first[i].params.at("value") == second[i].params.at("value"));
}

TEST_CASE("step_stage is a pure function of state and inputs") {
  PickPolicy policy({1.0, 3.0, 5.0, 7.0, 9.0});
  auto base = make_state(1, net::LayerRole::Terminal, 3);
  base.clock = 2.0;
  ObservationMsg obs;
  obs.time = 1.5;
  std::vector<LoopInput> in{make_input(1.5, 4, obs)};
  auto a = base;
  auto b = base;
  for (int i = 0; i < 8; ++i) {
    auto oa = step_stage(a, i == 0 ? std::span<const LoopInput>(in) : std::span<const LoopInput>{}, policy);
    auto ob = step_stage(b, i == 0 ? std::span<const LoopInput>(in) : std::span<const LoopInput>{}, policy);
    REQUIRE(oa.actions.size() == ob.actions.size());
  }
  REQUIRE(a.last_decision.value == b.last_decision.value);
  REQUIRE(a.epoch == b.epoch);
  REQUIRE(a.rng == b.rng);
}

TEST_CASE("stage trace is a prefix of the repeating cycle (property)") {
  PickPolicy policy({1.0});
  Rng meta(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    auto st = make_state(0, net::LayerRole::Terminal);
    st.clock = 100.0;
    const int steps = 1 + static_cast<int>(meta.uniform_int(12));
    const Stage expected[4] = {Stage::Observe, Stage::Orient, Stage::Decide, Stage::Act};
    for (int i = 0; i < steps; ++i) {
      REQUIRE(st.stage == expected[i % 4]);
      std::vector<LoopInput> in;
      if (meta.bernoulli(0.5)) {
        ObservationMsg obs;
        obs.time = meta.uniform(0.0, 100.0);
        in.push_back(make_input(obs.time, static_cast<int>(meta.uniform_int(5)), obs));
      }
      step_stage(st, in, policy);
    }
  }
}

TEST_CASE("applied directive versions are strictly increasing (property)") {
  PickPolicy policy({1.0});
  Rng meta(555);
  for (int trial = 0; trial < 1000; ++trial) {
    auto st = make_state(9, net::LayerRole::Terminal);
    st.clock = 1e9;
    std::vector<std::uint64_t> applied;
    for (int round = 0; round < 12; ++round) {
      Directive d;
      d.from_loop = 4;
      d.to_loop = 9;
      d.version = 1 + meta.uniform_int(6);
      std::vector<LoopInput> in{make_input(static_cast<double>(round), 4, d)};
      step_stage(st, in, policy);
      if (!st.pending_directives.empty())
        applied.push_back(st.pending_directives.back().version);
      for (int i = 0; i < 3; ++i) step_stage(st, {}, policy);
    }
    for (std::size_t i = 1; i < applied.size(); ++i) REQUIRE(applied[i] > applied[i - 1]);
  }
}

TEST_CASE("depth 1 with self-candidate keeps the incumbent") {
  PickDecision inc{7.0};
  auto result = run_depth_cycles(
      inc, 1, [](const PickDecision& d) { return d; },
      [](const PickDecision& d) { return -(d.value - 7.0) * (d.value - 7.0); });
  REQUIRE(result.value == 7.0);
}

TEST_CASE("depth zero is an invalid-depth error") {
  PickDecision inc{0.0};
  REQUIRE_THROWS_AS(run_depth_cycles(
                        inc, 0, [](const PickDecision& d) { return d; },
                        [](const PickDecision&) { return 0.0; }),
                    std::invalid_argument);
}

TEST_CASE("deeper runs with a shared candidate stream never score worse") {
  const std::vector<double> pool{0.5, 2.0, 3.5, 6.0, 6.5, 7.5, 8.0, 9.5};
  auto eval = [](const PickDecision& d) { return -(d.value - 7.0) * (d.value - 7.0); };
  Rng meta(31337);
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint64_t seed = meta.next_u64();
    double prev = -1e300;
    for (int k : {1, 2, 4, 8}) {
      Rng rng(seed);
      auto gen = [&](const PickDecision&) -> PickDecision {
        return {pool[rng.uniform_int(pool.size())]};
      };
      auto res = run_depth_cycles(PickDecision{0.0}, k, gen, eval);
      const double score = eval(res);
      REQUIRE(score >= prev);
      prev = score;
    }
  }
}

TEST_CASE("saturating depth reaches the brute-force optimum on a toy pool") {
  // 3-candidate toy instance; enumerating every candidate is the oracle.
  const std::vector<double> pool{3.0, 5.5, 9.0};
  auto eval = [](const PickDecision& d) { return -(d.value - 7.0) * (d.value - 7.0); };
  double best_score = -1e300;
  double best_value = 0.0;
  for (double v : pool) {
    const double s = eval(PickDecision{v});
    if (s > best_score) {
      best_score = s;
      best_value = v;
    }
  }
  std::size_t cursor = 0;
  auto gen = [&](const PickDecision&) -> PickDecision { return {pool[cursor++ % pool.size()]}; };
  auto res = run_depth_cycles(PickDecision{3.0}, static_cast<int>(pool.size()), gen, eval);
  REQUIRE(res.value == best_value);
}

TEST_CASE("nest builds a three-level tree") {
  LoopTopology t;
  t.nest(cfg(0, net::LayerRole::Cloud, 4.0),
         std::vector<LoopConfig>{cfg(1, net::LayerRole::Edge, 2.0), cfg(2, net::LayerRole::Edge, 2.0)});
  std::vector<LoopConfig> terms;
  for (int i = 0; i < 5; ++i) terms.push_back(cfg(10 + i, net::LayerRole::Terminal));
  t.nest(t.config(1), terms);
  REQUIRE_NOTHROW(t.validate_tree());
  REQUIRE(t.parent_of(10) == 1);
  REQUIRE(t.parent_of(1) == 0);
  REQUIRE_FALSE(t.parent_of(0).has_value());
  REQUIRE(t.children_of(1).size() == 5);
}

TEST_CASE("terminal cannot parent an edge") {
  LoopTopology t;
  REQUIRE_THROWS_AS(t.nest(cfg(0, net::LayerRole::Terminal),
                           std::vector<LoopConfig>{cfg(1, net::LayerRole::Edge)}),
                    TopologyError);
}

TEST_CASE("layer-skipping nesting is rejected") {
  LoopTopology t;
  REQUIRE_THROWS_AS(t.nest(cfg(0, net::LayerRole::Cloud),
                           std::vector<LoopConfig>{cfg(1, net::LayerRole::Terminal)}),
                    TopologyError);
}

TEST_CASE("duplicate parenting is rejected") {
  LoopTopology t;
  t.nest(cfg(0, net::LayerRole::Edge), std::vector<LoopConfig>{cfg(5, net::LayerRole::Terminal)});
  REQUIRE_THROWS_AS(t.nest(cfg(1, net::LayerRole::Edge),
                           std::vector<LoopConfig>{cfg(5, net::LayerRole::Terminal)}),
                    TopologyError);
}

TEST_CASE("routing table counts match the tree edge count") {
  LoopTopology t;
  std::vector<LoopConfig> edges{cfg(1, net::LayerRole::Edge, 2.0), cfg(2, net::LayerRole::Edge, 2.0),
                                cfg(3, net::LayerRole::Edge, 2.0)};
  t.nest(cfg(0, net::LayerRole::Cloud, 4.0), edges);
  int next_id = 10;
  for (const auto& e : edges) {
    std::vector<LoopConfig> terms;
    for (int i = 0; i < 5; ++i) terms.push_back(cfg(next_id++, net::LayerRole::Terminal));
    t.nest(e, terms);
  }
  REQUIRE(t.loop_count() == 19);
  REQUIRE(t.upward_route_count() == 18);
  REQUIRE(t.downward_route_count() == 18);
}
