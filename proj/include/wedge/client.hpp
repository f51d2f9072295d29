// Copyright 2026 the wedgechain authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <deque>
#include <memory>
#include <set>

#include "wedge/directory.hpp"
#include "wedge/lsm.hpp"
#include "wedge/metrics.hpp"
#include "wedge/simnet.hpp"

namespace wedge {

constexpr uint32_t kClientTick = 3;      // periodic: dispute timeout scan
constexpr uint32_t kClientWorkload = 4;  // one-shot: next planned operation
constexpr uint32_t kClientRetry = 5;     // one-shot: stale get retry

enum class Wiring : uint8_t { Wedgechain = 0, CloudOnly = 1, EdgeBaseline = 2 };

struct PlannedOp {
    double at = 0;
    OpKindTag kind = OpKindTag::Add;
    std::shared_ptr<const Entry> entry;  // pre-signed, for writes
    uint64_t bid = 0;                    // reads: exact target, or sampled when ~0
    bool bid_exact = false;
    uint64_t key = 0;  // gets
};

struct ClientConfig {
    double window_ms = 5000;           // freshness window X
    double dispute_timeout_ms = 1000;  // default: 10x the edge-cloud RTT (set by scenario)
    int max_get_retries = 3;
    double retry_delay_ms = 100;
    double tick_interval_ms = 250;
    uint32_t lsm_levels = 4;
    Wiring wiring = Wiring::Wedgechain;
};

class ClientNode : public INode {
  public:
    ClientNode(NodeId me, KeyPair keys, NodeId target, NodeId cloud, const KeyDirectory* dir,
               ClientConfig cfg, std::vector<PlannedOp> plan, Metrics* metrics);

    NodeId id() const override { return me_; }
    Actions on_message(NodeId src, const WireMessage& msg, double now) override;
    Actions on_timer(uint32_t kind, double now) override;
    bool idle() const override;

    double first_op_at() const { return plan_.empty() ? -1 : plan_.front().at; }

    // Direct-call variants used by unit tests (the sim path goes through
    // on_message). They mutate state exactly like message delivery does.
    void on_add_response(const AddResponse& msg, double now, Actions& actions);
    void on_block_proof(const BlockProofMsg& msg, double now, Actions& actions);
    void verify_read(const ReadResponse& msg, double now, Actions& actions);
    void on_gossip(const GossipMsg& msg, double now, Actions& actions);
    void verify_get(const GetResponse& msg, double now, Actions& actions);
    std::vector<DisputeMsg> check_timeouts(double now);

    uint64_t next_seq() const { return next_seq_; }
    size_t pending_writes() const { return writes_.size(); }

  private:
    enum class Phase : uint8_t { Sent, Phase1, Phase2, Disputed };

    struct PendingWrite {
        std::shared_ptr<const Entry> entry;
        Phase phase = Phase::Sent;
        uint64_t bid = 0;
        bool has_bid = false;
        double phase1_at = -1;
        std::shared_ptr<const AddResponse> evidence;
        Digest evidence_digest;  // block digest of the evidence, cached
        size_t row = 0;
    };

    struct PendingRead {
        uint64_t bid = 0;
        Phase phase = Phase::Sent;
        bool answered = false;
        double phase1_at = -1;
        std::shared_ptr<const ReadResponse> evidence;
        Digest evidence_digest;
        size_t row = 0;
    };

    struct PendingGet {
        uint64_t key = 0;
        int retries = 0;
        bool done = false;
        bool disputed = false;
        double phase1_at = -1;
        std::map<uint64_t, Digest> awaiting;  // pending L0 blocks backing the result
        std::shared_ptr<const GetResponse> evidence;
        size_t row = 0;
    };

    void issue_next(Actions& actions, double now);
    void dispute_write(PendingWrite& w, uint64_t seq, Actions& actions, double now);
    void dispute_read(PendingRead& r, Actions& actions, double now);
    void dispute_get(PendingGet& g, Actions& actions, double now);
    DisputeMsg make_dispute(DisputeKind kind, Bytes evidence) const;
    // earliest gossip timestamp whose log size covers bid, if any
    std::optional<double> first_covering_gossip(uint64_t bid) const;

    NodeId me_;
    KeyPair keys_;
    NodeId target_;  // the edge (or the cloud under cloud_only wiring)
    NodeId cloud_;
    const KeyDirectory* dir_;
    ClientConfig cfg_;
    Metrics* metrics_;

    std::vector<PlannedOp> plan_;
    size_t plan_pos_ = 0;
    uint64_t next_seq_ = 0;
    Rng rng_;

    std::map<uint64_t, PendingWrite> writes_;             // seq -> op
    std::map<uint64_t, std::vector<uint64_t>> by_bid_;    // bid -> seqs awaiting proof
    std::vector<PendingRead> reads_;
    std::vector<PendingGet> gets_;
    std::map<uint64_t, BlockProof> proof_cache_;
    std::map<uint64_t, ReadResponse> unavailable_;  // signed denials, potential omission evidence
    std::set<uint64_t> omission_disputed_;
    std::vector<std::pair<double, uint64_t>> gossip_milestones_;  // (timestamp, log_size), growing
    std::deque<std::pair<double, size_t>> retry_queue_;           // (due, get index)
    uint64_t max_bid_seen_ = 0;
    bool any_bid_seen_ = false;
};

}  // namespace wedge
