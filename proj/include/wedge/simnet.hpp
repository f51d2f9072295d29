// Copyright 2026 the wedgechain authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <functional>
#include <map>
#include <queue>
#include <string>

#include "wedge/wire.hpp"

namespace wedge {

// Deterministic discrete-event network. One logical event loop drives every
// node; a given (config, seed) pair always produces the same trace.

// Platform-stable RNG (splitmix64). std:: engines would do, but their
// distributions are not pinned across standard libraries; this is.
class Rng {
  public:
    explicit Rng(uint64_t seed) : state_(seed * 0x9E3779B97F4A7C15ULL + 1) {}
    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    uint64_t below(uint64_t n) { return n == 0 ? 0 : next_u64() % n; }
    // uniform in [0, 1)
    double unit() { return double(next_u64() >> 11) * 0x1.0p-53; }
    double range(double lo, double hi) { return lo + (hi - lo) * unit(); }

  private:
    uint64_t state_;
};

struct Outbound {
    NodeId dst;
    WireMessage msg;
};

struct TimerReq {
    uint32_t kind = 0;
    double at = 0;
};

struct Actions {
    std::vector<Outbound> out;
    std::vector<TimerReq> timers;
    void send(NodeId dst, WireMessage msg) { out.push_back({dst, std::move(msg)}); }
    void timer(uint32_t kind, double at) { timers.push_back({kind, at}); }
};

// Node transitions are pure with respect to the loop: (state, input, now) ->
// (state', outputs). They must never block or consult wall time.
class INode {
  public:
    virtual ~INode() = default;
    virtual NodeId id() const = 0;
    virtual Actions on_message(NodeId src, const WireMessage& msg, double now) = 0;
    virtual Actions on_timer(uint32_t kind, double now) = 0;
    // True when the node holds no pending obligations; the loop stops once
    // every node is idle and only housekeeping timers remain.
    virtual bool idle() const { return true; }
    // Serialized service time this node spends on a message (queueing model).
    virtual double service_ms(const WireMessage& msg) const {
        (void)msg;
        return 0;
    }
};

struct TraceRow {
    double t = 0;
    NodeId src, dst;
    const char* kind = "";
    uint32_t size = 0;
};

struct LatencyConfig {
    // symmetric RTTs between named sites; one-way delay = rtt/2 (+ jitter)
    std::map<std::string, std::map<std::string, double>> rtt_ms;
    std::map<NodeId, std::string> placement;
    double jitter_pct = 0;
    double floor_ms = 1.0;  // minimum per-hop delay; co-sited hops are not free
    double drop_pct = 0;    // robustness testing only

    double rtt(NodeId a, NodeId b) const;
};

struct RunStats {
    double end_time = 0;
    bool truncated = false;
    uint64_t delivered = 0;
    uint64_t dropped = 0;
};

class SimNet {
  public:
    SimNet(LatencyConfig latency, uint64_t seed, bool record_trace = true)
        : latency_(std::move(latency)), rng_(seed ^ 0xD1B54A32D192ED03ULL), record_trace_(record_trace) {}

    void add_node(INode* node) { nodes_[node->id()] = node; }
    void register_periodic(NodeId node, uint32_t kind, double interval, double first_at);
    void schedule_timer(NodeId node, uint32_t kind, double at);
    void send(NodeId src, NodeId dst, WireMessage msg, double now);

    RunStats run(double limit_ms);

    const std::vector<TraceRow>& trace() const { return trace_; }
    double now() const { return now_; }
    uint64_t pending_work() const { return pending_work_; }

  private:
    struct Event {
        double at = 0;
        uint64_t seq = 0;  // insertion order breaks ties
        bool is_timer = false;
        bool periodic = false;
        bool ready = false;    // service time already accounted
        bool counted = true;   // false for housekeeping traffic (gossip)
        NodeId src, dst;
        uint32_t timer_kind = 0;
        WireMessage msg;
    };
    struct Later {
        bool operator()(const Event& a, const Event& b) const {
            return a.at != b.at ? a.at > b.at : a.seq > b.seq;
        }
    };
    struct Periodic {
        NodeId node;
        uint32_t kind;
        double interval;
    };

    void apply(const Actions& actions, NodeId origin);
    bool all_idle() const;

    LatencyConfig latency_;
    Rng rng_;
    bool record_trace_;
    std::map<NodeId, INode*> nodes_;
    std::priority_queue<Event, std::vector<Event>, Later> queue_;
    std::vector<Periodic> periodics_;
    std::map<NodeId, double> busy_until_;
    std::vector<TraceRow> trace_;
    uint64_t seq_ = 0;
    uint64_t drops_ = 0;
    uint64_t pending_work_ = 0;  // message events + one-shot timers in queue
    double now_ = 0;
};

}  // namespace wedge
