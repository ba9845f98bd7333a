#include <catch2/catch_amalgamated.hpp>

#include "hooda/network.hpp"

using namespace hooda;
using namespace hooda::net;

namespace {

Network make_net(double latency = 0.0, double bandwidth = 100.0, double loss = 0.0,
                 std::uint64_t seed = 1) {
  Network n(seed);
  n.add_node(1, LayerRole::Terminal);
  n.add_node(2, LayerRole::Terminal);
  n.add_node(10, LayerRole::Edge);
  n.add_node(20, LayerRole::Cloud);
  n.add_link({1, 10, latency, bandwidth, loss});
  n.add_link({2, 10, latency, bandwidth, loss});
  n.add_link({10, 20, latency, bandwidth, loss});
  return n;
}

ooda::Directive directive(int from, int to) {
  ooda::Directive d;
  d.from_loop = from;
  d.to_loop = to;
  return d;
}

}  // namespace

TEST_CASE("zero latency and zero size deliver instantly") {
  Network n(0, MessageSizing{0.0, 0.0, 0.0});
  n.add_node(1, LayerRole::Terminal);
  n.add_node(10, LayerRole::Edge);
  n.add_link({1, 10, 0.0, 100.0, 0.0});
  REQUIRE(n.send(directive(10, 1), 1, 10, 4.0));
  auto due = n.deliver_due(4.0);
  REQUIRE(due.size() == 1);
  REQUIRE(due[0].deliver_at == 4.0);
}

TEST_CASE("deliver_at follows latency plus transmission time") {
  // latency 0.2 s, size 10, bandwidth 100/s -> deliver_at = sent_at + 0.3
  Network n(0, MessageSizing{10.0, 10.0, 0.0});
  n.add_node(1, LayerRole::Terminal);
  n.add_node(10, LayerRole::Edge);
  n.add_link({1, 10, 0.2, 100.0, 0.0});
  n.send(directive(10, 1), 1, 10, 1.0);
  REQUIRE(n.deliver_due(1.29).empty());
  auto due = n.deliver_due(1.31);
  REQUIRE(due.size() == 1);
  REQUIRE_THAT(due[0].deliver_at, Catch::Matchers::WithinAbs(1.3, 1e-12));
}

TEST_CASE("report size grows with occupied cells") {
  MessageSizing sizing{1.0, 1.0, 0.5};
  ooda::Report rep;
  rep.map_fragment = SituationMap(Granularity::Local, {{0, 0}, {4, 1}}, 1.0, 0.2, 1.0, 0.0);
  REQUIRE(sizing.size_of(MessagePayload{rep}) == 1.0 + 0.5 * 4);
  REQUIRE(sizing.size_of(MessagePayload{directive(0, 1)}) == 1.0);
}

TEST_CASE("loss probability one always drops and counts") {
  auto n = make_net(0.0, 100.0, 1.0);
  for (int i = 0; i < 10; ++i) REQUIRE_FALSE(n.send(directive(10, 1), 1, 10, 0.0));
  REQUIRE(n.drop_count() == 10);
  REQUIRE(n.deliver_due(100.0).empty());
}

TEST_CASE("missing link raises a routing error") {
  auto n = make_net();
  REQUIRE_THROWS_AS(n.send(directive(1, 2), 10, 1, 0.0), RoutingError);  // no edge->terminal link
  REQUIRE_THROWS_AS(n.send(directive(20, 1), 1, 20, 0.0), RoutingError);  // layer skip, no link
}

TEST_CASE("layer-skipping links cannot be added") {
  Network n;
  n.add_node(1, LayerRole::Terminal);
  n.add_node(20, LayerRole::Cloud);
  n.add_node(2, LayerRole::Terminal);
  REQUIRE_THROWS_AS(n.add_link({1, 20, 0.0, 1.0, 0.0}), RoutingError);
  REQUIRE_THROWS_AS(n.add_link({1, 2, 0.0, 1.0, 0.0}), RoutingError);
}

TEST_CASE("link parameter ranges are validated") {
  Network n;
  n.add_node(1, LayerRole::Terminal);
  n.add_node(10, LayerRole::Edge);
  REQUIRE_THROWS_AS(n.add_link({1, 10, -0.1, 1.0, 0.0}), ValidationError);
  REQUIRE_THROWS_AS(n.add_link({1, 10, 0.0, 0.0, 0.0}), ValidationError);
  REQUIRE_THROWS_AS(n.add_link({1, 10, 0.0, 1.0, 1.5}), ValidationError);
}

TEST_CASE("same deliver_at orders by sender id then sequence") {
  auto n = make_net(0.5, 1e9);
  n.send(directive(10, 2), 2, 10, 0.0);
  n.send(directive(10, 1), 1, 10, 0.0);
  auto due = n.deliver_due(1.0);
  REQUIRE(due.size() == 2);
  REQUIRE(due[0].from == 1);
  REQUIRE(due[1].from == 2);
}

TEST_CASE("only messages due by the clock are delivered") {
  Network n;
  n.add_node(1, LayerRole::Terminal);
  n.add_node(10, LayerRole::Edge);
  n.add_link({1, 10, 0.1, 1e9, 0.0});
  Network n2;  // second link set with a different latency
  n.add_node(2, LayerRole::Terminal);
  n.add_link({2, 10, 0.5, 1e9, 0.0});
  n.send(directive(10, 1), 1, 10, 0.0);
  n.send(directive(10, 2), 2, 10, 0.0);
  auto due = n.deliver_due(0.3);
  REQUIRE(due.size() == 1);
  REQUIRE(due[0].from == 1);
  due = n.deliver_due(0.6);
  REQUIRE(due.size() == 1);
  REQUIRE(due[0].from == 2);
}

TEST_CASE("clock regression raises an error") {
  auto n = make_net();
  n.deliver_due(5.0);
  REQUIRE_THROWS_AS(n.deliver_due(4.0), ClockError);
}

TEST_CASE("empty queue delivers nothing") {
  auto n = make_net();
  REQUIRE(n.deliver_due(10.0).empty());
}

TEST_CASE("delivery order is deterministic for a given queue (property)") {
  Rng meta(90210);
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint64_t seed = meta.next_u64();
    auto run = [&]() {
      auto n = make_net(0.0, 50.0, 0.0, seed);
      Rng r(seed);
      std::vector<std::pair<double, int>> sends;
      for (int i = 0; i < 20; ++i)
        sends.push_back({r.uniform(0.0, 2.0), r.bernoulli(0.5) ? 1 : 2});
      std::sort(sends.begin(), sends.end(),
                [](auto& a, auto& b) { return a.first < b.first; });
      for (auto& [t, from] : sends) n.send(directive(10, from), from, 10, t);
      std::vector<std::uint64_t> seqs;
      for (auto& env : n.deliver_due(100.0)) seqs.push_back(env.seq);
      return seqs;
    };
    REQUIRE(run() == run());
  }
}
