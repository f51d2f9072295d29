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

constexpr uint32_t kCloudGossip = 2;

struct CloudConfig {
    uint32_t page_size = 64;
    uint32_t lsm_levels = 4;
    uint32_t l0_threshold = 10;        // for the merge_overdue metric only
    double certify_per_op_ms = 0;      // serialized processing cost per batched op
    uint32_t batch_size_hint = 100;    // certify messages are data-free; cost comes from config
};

// The trusted certifier: first-writer-wins digest registry, merge service,
// gossip emitter, dispute judge.
class CloudNode : public INode {
  public:
    CloudNode(NodeId me, KeyPair keys, const KeyDirectory* dir, CloudConfig cfg, Metrics* metrics);

    NodeId id() const override { return me_; }
    Actions on_message(NodeId src, const WireMessage& msg, double now) override;
    Actions on_timer(uint32_t kind, double now) override;
    double service_ms(const WireMessage& msg) const override;

    // Which clients receive each edge's gossip (set up by the scenario).
    void set_gossip_targets(std::map<NodeId, std::vector<NodeId>> targets) {
        gossip_targets_ = std::move(targets);
    }

    // Signed global root over all-empty levels; edges bootstrap with it.
    GlobalRoot initial_global_root(NodeId edge) const;

    struct EdgeRec {
        struct Certified {
            Digest digest;
            double at = 0;
        };
        std::map<uint64_t, Certified> registry;  // append-only: a bid is never re-bound
        uint64_t log_size = 0;                   // contiguous certified prefix
        std::map<uint32_t, Digest> roots;        // current non-empty level roots
        uint64_t watermark = 0;                  // first L0 bid not consumed by a merge
        uint64_t last_merge_id = UINT64_MAX;
        std::optional<MergeResponse> last_merge_response;
    };
    const EdgeRec* edge_rec(NodeId edge) const {
        auto it = edges_.find(edge);
        return it == edges_.end() ? nullptr : &it->second;
    }
    const std::vector<VerdictRow>& verdicts() const { return verdicts_; }

  private:
    Actions handle_block_certify(NodeId src, const BlockCertify& msg, double now);
    Actions handle_block_upload(NodeId src, const BlockUpload& msg, double now);
    Actions handle_merge_request(NodeId src, const MergeRequest& msg, double now);
    Actions handle_dispute(NodeId src, const DisputeMsg& msg, double now);

    Verdict make_verdict(NodeId edge, VerdictReason reason, NodeId accuser, double now);
    BlockProofMsg certify(NodeId edge, uint64_t bid, const Digest& digest, double now);
    Digest global_hash(const EdgeRec& rec) const;
    GlobalRoot sign_global(NodeId edge, const EdgeRec& rec, double now) const;

    NodeId me_;
    KeyPair keys_;
    const KeyDirectory* dir_;
    CloudConfig cfg_;
    Metrics* metrics_;
    std::map<NodeId, EdgeRec> edges_;
    std::vector<VerdictRow> verdicts_;
    std::map<NodeId, std::vector<NodeId>> gossip_targets_;
};

// cloud_only baseline: every request is served by the trusted cloud itself.
class CloudOnlyNode : public INode {
  public:
    CloudOnlyNode(NodeId me, KeyPair keys, const KeyDirectory* dir, uint32_t batch_size,
                  double certify_per_op_ms, Metrics* metrics);

    NodeId id() const override { return me_; }
    Actions on_message(NodeId src, const WireMessage& msg, double now) override;
    Actions on_timer(uint32_t, double) override { return {}; }
    bool idle() const override { return buffer_.empty(); }
    double service_ms(const WireMessage& msg) const override;

  private:
    NodeId me_;
    KeyPair keys_;
    const KeyDirectory* dir_;
    uint32_t batch_size_;
    double certify_per_op_ms_;
    Metrics* metrics_;
    std::vector<Entry> buffer_;
    uint64_t next_bid_ = 0;
    std::map<uint64_t, Block> log_;
    std::map<uint64_t, Bytes> store_;  // key-value view of applied puts
};

}  // namespace wedge
