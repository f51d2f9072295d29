// Copyright 2026 the wedgechain authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#include <doctest.h>

#include "wedge/scenario.hpp"
#include "wedge/simnet.hpp"

using namespace wedge;

namespace {

// trivial node that only records deliveries
struct Sink : INode {
    NodeId me;
    std::vector<std::pair<double, NodeId>> got;
    explicit Sink(NodeId id) : me(id) {}
    NodeId id() const override { return me; }
    Actions on_message(NodeId src, const WireMessage&, double now) override {
        got.emplace_back(now, src);
        return {};
    }
    Actions on_timer(uint32_t, double) override { return {}; }
};

LatencyConfig two_sites(NodeId a, NodeId b, const std::string& site_a, const std::string& site_b,
                        double rtt) {
    LatencyConfig lat;
    lat.rtt_ms[site_a][site_b] = rtt;
    lat.rtt_ms[site_a][site_a] = 0;
    lat.rtt_ms[site_b][site_b] = 0;
    lat.placement[a] = site_a;
    lat.placement[b] = site_b;
    return lat;
}

}  // namespace

TEST_CASE("delivery delays: co-sited floor, half-RTT one way") {
    NodeId a{NodeKind::Client, 0}, b{NodeKind::Edge, 0};

    SUBCASE("co-sited: 1 ms processing floor") {
        Sink sa(a), sb(b);
        SimNet net(two_sites(a, b, "C", "C", 0), 1);
        net.add_node(&sa);
        net.add_node(&sb);
        net.send(a, b, ReadRequest{0}, 0);
        net.run(1000);
        REQUIRE(sb.got.size() == 1);
        CHECK(sb.got[0].first == 1.0);
    }
    SUBCASE("C to V: 61 ms RTT means 30.5 one way") {
        Sink sa(a), sb(b);
        SimNet net(two_sites(a, b, "C", "V", 61), 1);
        net.add_node(&sa);
        net.add_node(&sb);
        net.send(a, b, ReadRequest{0}, 0);
        net.run(1000);
        CHECK(sb.got[0].first == 30.5);
    }
    SUBCASE("C to M: 238 ms RTT means 119 one way") {
        Sink sa(a), sb(b);
        SimNet net(two_sites(a, b, "C", "M", 238), 1);
        net.add_node(&sa);
        net.add_node(&sb);
        net.send(a, b, ReadRequest{0}, 2);
        net.run(1000);
        CHECK(sb.got[0].first == 121.0);
    }
}

TEST_CASE("causality and FIFO per ordered pair at zero jitter") {
    NodeId a{NodeKind::Client, 0}, b{NodeKind::Edge, 0};
    Sink sa(a), sb(b);
    SimNet net(two_sites(a, b, "C", "V", 61), 1);
    net.add_node(&sa);
    net.add_node(&sb);
    for (uint64_t i = 0; i < 20; i++) net.send(a, b, ReadRequest{i}, double(i) * 0.1);
    net.run(1000);
    REQUIRE(sb.got.size() == 20);
    for (size_t i = 1; i < sb.got.size(); i++) CHECK(sb.got[i - 1].first <= sb.got[i].first);
}

TEST_CASE("an empty event queue returns immediately") {
    NodeId a{NodeKind::Client, 0};
    Sink sa(a);
    SimNet net(two_sites(a, a, "C", "C", 0), 1);
    net.add_node(&sa);
    RunStats stats = net.run(1000);
    CHECK(stats.end_time == 0);
    CHECK_FALSE(stats.truncated);
    CHECK(stats.delivered == 0);
}

TEST_CASE("single add hand-traced: phase1 at 2 ms, phase2 at 63 ms") {
    // client and edge co-sited at C (1 ms floor per hop), cloud at V
    // (61 ms RTT). Expected schedule for one add with batch_size 1:
    //   t=0    client issues the add
    //   t=1    edge receives, seals, replies + certifies
    //   t=2    client receives the response        -> phase1
    //   t=31.5 cloud receives the certify
    //   t=62   edge receives the proof, forwards
    //   t=63   client receives the proof           -> phase2
    ScenarioConfig cfg;
    cfg.seed = 7;
    cfg.clients = 1;
    cfg.ops_per_client = 1;
    cfg.op_interval_ms = 0.25;  // exact binary fraction: timestamps stay exact
    cfg.batch_size = 1;
    cfg.client_site = "C";
    cfg.edge_site = "C";
    cfg.cloud_site = "V";
    cfg.index_enabled = false;
    cfg.limit_ms = 10000;
    Metrics m = run_scenario(cfg);
    REQUIRE(m.ops.size() == 1);
    CHECK(m.ops[0].status == OpStatus::Phase2);
    double issued = m.ops[0].issued_at;
    CHECK(m.ops[0].phase1_at == issued + 2.0);
    CHECK(m.ops[0].phase2_at == issued + 63.0);
    CHECK_FALSE(m.truncated);
}

TEST_CASE("same seed, same trace; different seed may differ") {
    ScenarioConfig cfg;
    cfg.seed = 11;
    cfg.clients = 2;
    cfg.ops_per_client = 30;
    cfg.op_interval_ms = 0.5;
    cfg.batch_size = 5;
    cfg.read_ratio = 0.2;
    cfg.gossip_interval_ms = 20;
    cfg.limit_ms = 60000;
    Metrics a = run_scenario(cfg);
    Metrics b = run_scenario(cfg);
    CHECK(csv_ops(a) == csv_ops(b));
    CHECK(csv_messages(a) == csv_messages(b));
    CHECK(csv_timeline(a) == csv_timeline(b));
    REQUIRE(!a.messages.empty());
}

TEST_CASE("jitter stays seeded and deterministic") {
    ScenarioConfig cfg;
    cfg.seed = 13;
    cfg.clients = 1;
    cfg.ops_per_client = 20;
    cfg.op_interval_ms = 1;
    cfg.batch_size = 4;
    cfg.jitter_pct = 20;
    cfg.limit_ms = 60000;
    Metrics a = run_scenario(cfg);
    Metrics b = run_scenario(cfg);
    CHECK(csv_messages(a) == csv_messages(b));
}

TEST_CASE("message loss is survivable for the harness (robustness only)") {
    ScenarioConfig cfg;
    cfg.seed = 17;
    cfg.clients = 1;
    cfg.ops_per_client = 10;
    cfg.op_interval_ms = 1;
    cfg.batch_size = 2;
    cfg.drop_pct = 30;
    cfg.dispute_timeout_ms = 0;  // timeouts off; drops would otherwise trigger them
    cfg.limit_ms = 2000;
    Metrics m = run_scenario(cfg);  // must not crash or hang
    CHECK(m.end_time <= 2000);
}

TEST_CASE("limit exceeded flags a truncated run") {
    ScenarioConfig cfg;
    cfg.seed = 19;
    cfg.clients = 1;
    cfg.ops_per_client = 100;
    cfg.op_interval_ms = 10;
    cfg.batch_size = 1000;  // never seals: ops stay pending
    cfg.limit_ms = 50;
    Metrics m = run_scenario(cfg);
    CHECK(m.truncated);
}
