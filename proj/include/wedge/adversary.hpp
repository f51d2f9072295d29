// Copyright 2026 the wedgechain authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <deque>

#include "wedge/edge.hpp"

namespace wedge {

// Byzantine edge behaviors, realized as interceptors over an honest edge's
// outbound messages. The honest state machine stays the single source of
// truth; a fault only rewrites what leaves the node (re-signing with the
// real edge key - the threat model is a lying edge, not a stolen key).
struct FaultSpec {
    enum class Behavior : uint8_t {
        None = 0,
        Equivocate = 1,     // different block contents for the same bid to two clients
        DropEntry = 2,      // the promised entry is excluded from the certified block
        WrongDigest = 3,    // certify a digest that does not match the block
        OmitBlock = 4,      // deny reads of a filled log position
        StaleSnapshot = 5,  // serve gets from an old state
    };
    Behavior behavior = Behavior::None;
    uint64_t bid = 0;        // Equivocate / WrongDigest / OmitBlock target
    NodeId victim;           // Equivocate: who receives the doctored copy; DropEntry: whose entry
    uint64_t drop_seq = 0;   // DropEntry
    double age_ms = 0;       // StaleSnapshot
    double after_ms = 0;     // activation: not before this time
    uint64_t after_msgs = 0; // activation: not before this many inbound messages
};

class FaultyEdge : public INode {
  public:
    FaultyEdge(NodeId me, KeyPair keys, NodeId cloud, const KeyDirectory* dir, EdgeConfig cfg,
               Metrics* metrics, FaultSpec fault)
        : inner_(me, keys, cloud, dir, cfg, metrics), keys_(std::move(keys)), fault_(fault) {}

    NodeId id() const override { return inner_.id(); }
    Actions on_message(NodeId src, const WireMessage& msg, double now) override;
    Actions on_timer(uint32_t kind, double now) override;
    bool idle() const override { return inner_.idle(); }
    double service_ms(const WireMessage& msg) const override { return inner_.service_ms(msg); }

    EdgeNode& inner() { return inner_; }
    const EdgeNode& inner() const { return inner_; }

    // age of the snapshot actually served per get, for the bounded-harm check
    const std::vector<double>& served_snapshot_ages() const { return served_ages_; }

  private:
    bool active(double now) const {
        return now >= fault_.after_ms && seen_msgs_ >= fault_.after_msgs;
    }
    void intercept(Actions& actions, double now);
    Block doctored(const Block& b) const;
    void maybe_snapshot(double now);

    struct Snapshot {
        double t = 0;
        LsmState lsm;
    };

    EdgeNode inner_;
    KeyPair keys_;
    FaultSpec fault_;
    uint64_t seen_msgs_ = 0;
    std::map<uint64_t, Block> replacement_;  // DropEntry: bid -> the block actually certified
    std::deque<Snapshot> history_;           // StaleSnapshot
    uint64_t snapshot_version_ = UINT64_MAX;
    std::vector<double> served_ages_;
};

}  // namespace wedge
