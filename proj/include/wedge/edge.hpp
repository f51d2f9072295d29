// Copyright 2026 the wedgechain authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <set>

#include "wedge/directory.hpp"
#include "wedge/lsm.hpp"
#include "wedge/metrics.hpp"
#include "wedge/simnet.hpp"

namespace wedge {

// Edge timer kinds (see scenario wiring).
constexpr uint32_t kEdgeTick = 1;

struct EdgeConfig {
    uint32_t batch_size = 100;
    double flush_interval_ms = 0;  // 0: size-triggered sealing only
    double noop_interval_ms = 0;   // 0: no idle heartbeat blocks
    uint32_t lsm_levels = 4;
    std::vector<uint32_t> lsm_thresholds{10, 10, 100, 1000};
    bool index_enabled = true;
    bool certify_via_upload = false;  // edge_baseline: ship the whole block
};

// The (possibly byzantine) edge state machine. All transitions are pure with
// respect to the event loop; faults wrap this class from the outside.
class EdgeNode : public INode {
  public:
    EdgeNode(NodeId me, KeyPair keys, NodeId cloud, const KeyDirectory* dir, EdgeConfig cfg,
             Metrics* metrics);

    NodeId id() const override { return me_; }
    Actions on_message(NodeId src, const WireMessage& msg, double now) override;
    Actions on_timer(uint32_t kind, double now) override;
    bool idle() const override;

    // Bootstrap state installed by the scenario before the run starts.
    void install_global_root(const GlobalRoot& g) { lsm_.global = g; }

    // Read-only accessors for tests and post-run inspection.
    const std::map<uint64_t, Block>& log() const { return log_; }
    const std::map<uint64_t, BlockProof>& proofs() const { return proofs_; }
    const LsmState& lsm() const { return lsm_; }
    uint64_t next_bid() const { return next_bid_; }
    size_t buffer_size() const { return buffer_.size(); }
    GetResponse answer_get(uint64_t key, double now) const;

    // Bumped on every state change; fault interceptors snapshot on change.
    uint64_t state_version() const { return state_version_; }

  private:
    Actions handle_add(const AddRequest& req, double now);
    Actions handle_read(NodeId src, const ReadRequest& req, double now);
    Actions handle_block_proof(const BlockProofMsg& msg, double now);
    Actions handle_get(NodeId src, const GetRequest& req, double now);
    Actions handle_merge_response(const MergeResponse& msg, double now);
    void seal_block(Actions& actions, double now);
    void maybe_start_merge(Actions& actions, double now);
    Signature sign_payload(const Bytes& payload) const { return sign(keys_.secret_key, as_span(payload)); }

    struct SeqTracker {
        uint64_t contiguous = 0;        // all seqs below this were seen
        std::set<uint64_t> sparse;      // out-of-order arrivals above the watermark
        bool seen(uint64_t seq) const { return seq < contiguous || sparse.contains(seq); }
        void add(uint64_t seq) {
            if (seen(seq)) return;
            sparse.insert(seq);
            while (sparse.contains(contiguous)) {
                sparse.erase(contiguous);
                contiguous++;
            }
        }
    };

    NodeId me_;
    KeyPair keys_;
    NodeId cloud_;
    const KeyDirectory* dir_;
    EdgeConfig cfg_;
    Metrics* metrics_;

    std::vector<Entry> buffer_;
    uint64_t next_bid_ = 0;
    std::map<uint64_t, Block> log_;
    std::map<uint64_t, BlockProof> proofs_;
    std::set<uint64_t> pending_certify_;
    std::map<uint64_t, std::set<NodeId>> subscribers_;  // phase1 readers awaiting the proof
    LsmState lsm_;
    std::map<NodeId, SeqTracker> seen_;
    // edge_baseline: responses held back until the cloud certifies the block
    std::map<uint64_t, AddResponse> deferred_responses_;
    uint64_t next_merge_id_ = 0;
    bool merges_disabled_ = false;  // set when the cloud rejects a merge (flagged edge)
    uint64_t noop_seq_ = 0;
    double last_seal_at_ = 0;
    uint64_t state_version_ = 0;
};

}  // namespace wedge
