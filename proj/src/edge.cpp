// Copyright 2026 the wedgechain authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#include "wedge/edge.hpp"

#include <algorithm>

namespace wedge {

EdgeNode::EdgeNode(NodeId me, KeyPair keys, NodeId cloud, const KeyDirectory* dir, EdgeConfig cfg,
                   Metrics* metrics)
    : me_(me), keys_(std::move(keys)), cloud_(cloud), dir_(dir), cfg_(cfg), metrics_(metrics) {
    lsm_ = make_lsm(cfg_.lsm_levels, cfg_.lsm_thresholds);
}

Actions EdgeNode::on_message(NodeId src, const WireMessage& msg, double now) {
    if (const auto* m = std::get_if<AddRequest>(&msg)) return handle_add(*m, now);
    if (const auto* m = std::get_if<ReadRequest>(&msg)) return handle_read(src, *m, now);
    if (const auto* m = std::get_if<BlockProofMsg>(&msg)) return handle_block_proof(*m, now);
    if (const auto* m = std::get_if<GetRequest>(&msg)) return handle_get(src, *m, now);
    if (const auto* m = std::get_if<MergeResponse>(&msg)) return handle_merge_response(*m, now);
    if (const auto* m = std::get_if<Verdict>(&msg)) {
        // a rejected merge never gets a response; stop asking so the run
        // can wind down (the edge is flagged either way)
        if (m->reason == VerdictReason::BadMerge && lsm_.merge_in_flight) {
            lsm_.merge_in_flight.reset();
            merges_disabled_ = true;
        }
        return {};
    }
    return {};
}

Actions EdgeNode::on_timer(uint32_t kind, double now) {
    Actions actions;
    if (kind != kEdgeTick) return actions;
    if (cfg_.flush_interval_ms > 0 && !buffer_.empty() &&
        now - last_seal_at_ >= cfg_.flush_interval_ms) {
        seal_block(actions, now);
    }
    if (cfg_.noop_interval_ms > 0 && buffer_.empty() && now - last_seal_at_ >= cfg_.noop_interval_ms) {
        Entry noop;
        noop.client = me_;  // heartbeat entries are authored by the edge itself
        noop.seq = noop_seq_++;
        noop.op = NoOp{};
        noop.client_sig = sign_payload(entry_sign_payload(noop));
        buffer_.push_back(std::move(noop));
        seal_block(actions, now);
    }
    maybe_start_merge(actions, now);
    return actions;
}

bool EdgeNode::idle() const {
    return buffer_.empty() && pending_certify_.empty() && !lsm_.merge_in_flight;
}

Actions EdgeNode::handle_add(const AddRequest& req, double now) {
    Actions actions;
    const Entry& e = req.entry;
    const PublicKey* pk = dir_->find(e.client);
    if (!pk || e.client.kind != NodeKind::Client ||
        !verify(*pk, as_span(entry_sign_payload(e)), e.client_sig)) {
        metrics_->dropped_entries++;  // dropped silently, never NACKed
        return actions;
    }
    auto& tracker = seen_[e.client];
    if (tracker.seen(e.seq)) {
        metrics_->duplicate_entries++;
        return actions;
    }
    tracker.add(e.seq);
    buffer_.push_back(e);
    state_version_++;
    if (buffer_.size() >= cfg_.batch_size) {
        seal_block(actions, now);
        maybe_start_merge(actions, now);
    }
    return actions;
}

void EdgeNode::seal_block(Actions& actions, double now) {
    if (buffer_.empty()) return;
    Block block;
    block.edge = me_;
    block.bid = next_bid_++;
    block.entries = std::move(buffer_);
    buffer_.clear();
    last_seal_at_ = now;

    Digest digest = block_digest(block);

    // one aggregated response per contributing client, in first-touch order
    std::vector<NodeId> contributors;
    for (const auto& e : block.entries) {
        if (e.client == me_) continue;  // edge-authored noops have no waiting client
        if (std::find(contributors.begin(), contributors.end(), e.client) == contributors.end())
            contributors.push_back(e.client);
    }
    AddResponse resp;
    resp.block = block;
    resp.bid = block.bid;
    resp.edge_sig = sign_payload(add_response_sign_payload(resp));

    if (cfg_.certify_via_upload) {
        // acknowledge only after the cloud has certified (edge_baseline)
        if (!contributors.empty()) deferred_responses_.emplace(block.bid, std::move(resp));
        BlockUpload up;
        up.block = block;
        up.edge_sig = sign_payload(block_upload_sign_payload(up));
        actions.send(cloud_, std::move(up));
    } else {
        for (NodeId c : contributors) actions.send(c, resp);
        // data-free: the cloud sees (edge, bid, digest), never entry payloads
        BlockCertify cert;
        cert.edge = me_;
        cert.bid = block.bid;
        cert.digest = digest;
        cert.edge_sig = sign_payload(block_certify_sign_payload(cert));
        actions.send(cloud_, cert);
    }
    pending_certify_.insert(block.bid);

    if (cfg_.index_enabled) insert_l0(lsm_, block, now);
    log_.emplace(block.bid, std::move(block));
    state_version_++;
}

Actions EdgeNode::handle_read(NodeId src, const ReadRequest& req, double now) {
    Actions actions;
    ReadResponse resp;
    resp.edge = me_;
    resp.bid = req.bid;
    resp.at_ms = now;
    auto it = log_.find(req.bid);
    if (it == log_.end()) {
        resp.status = ReadStatus::Unavailable;
    } else if (auto pit = proofs_.find(req.bid); pit != proofs_.end()) {
        resp.status = ReadStatus::Phase2;
        resp.block = it->second;
        resp.proof = pit->second;
    } else {
        resp.status = ReadStatus::Phase1;
        resp.block = it->second;
        subscribers_[req.bid].insert(src);  // forward the proof once it lands
        state_version_++;
    }
    resp.edge_sig = sign_payload(read_response_sign_payload(resp));
    actions.send(src, std::move(resp));
    return actions;
}

Actions EdgeNode::handle_block_proof(const BlockProofMsg& msg, double now) {
    Actions actions;
    const BlockProof& proof = msg.proof;
    if (proof.edge != me_) return actions;
    if (!dir_->check(cloud_, as_span(block_proof_sign_payload(proof)), proof.cloud_sig))
        return actions;
    if (proofs_.contains(proof.bid)) return actions;  // duplicate delivery: no second fan-out

    proofs_[proof.bid] = proof;
    pending_certify_.erase(proof.bid);
    state_version_++;

    if (auto dit = deferred_responses_.find(proof.bid); dit != deferred_responses_.end()) {
        std::vector<NodeId> contributors;
        for (const auto& e : dit->second.block.entries) {
            if (std::find(contributors.begin(), contributors.end(), e.client) == contributors.end())
                contributors.push_back(e.client);
        }
        for (NodeId c : contributors) actions.send(c, dit->second);
        deferred_responses_.erase(dit);
    }

    std::vector<NodeId> targets;
    if (auto it = log_.find(proof.bid); it != log_.end()) {
        for (const auto& e : it->second.entries) {
            if (e.client == me_) continue;
            if (std::find(targets.begin(), targets.end(), e.client) == targets.end())
                targets.push_back(e.client);
        }
    }
    if (auto it = subscribers_.find(proof.bid); it != subscribers_.end()) {
        for (NodeId s : it->second) {
            if (std::find(targets.begin(), targets.end(), s) == targets.end())
                targets.push_back(s);
        }
        subscribers_.erase(it);
    }
    for (NodeId t : targets) actions.send(t, BlockProofMsg{proof});

    maybe_start_merge(actions, now);
    return actions;
}

GetResponse EdgeNode::answer_get(uint64_t key, double now) const {
    (void)now;
    GetResponse resp;
    resp.edge = me_;
    resp.key = key;
    resp.bundle = lookup(lsm_, key, proofs_);
    resp.edge_sig = sign_payload(get_response_sign_payload(resp));
    return resp;
}

Actions EdgeNode::handle_get(NodeId src, const GetRequest& req, double now) {
    Actions actions;
    GetResponse resp = answer_get(req.key, now);
    // getters lean on uncertified L0 pages exactly like phase1 readers:
    // remember them so the proofs get forwarded when they land
    for (const auto& item : resp.bundle.l0) {
        if (!item.proof) subscribers_[item.block.bid].insert(src);
    }
    actions.send(src, std::move(resp));
    return actions;
}

void EdgeNode::maybe_start_merge(Actions& actions, double now) {
    (void)now;
    if (!cfg_.index_enabled || merges_disabled_) return;
    auto req = build_merge_request(lsm_, me_, next_merge_id_, proofs_);
    if (!req) return;
    next_merge_id_++;
    req->edge_sig = sign_payload(merge_request_sign_payload(*req));
    actions.send(cloud_, std::move(*req));
    state_version_++;
}

Actions EdgeNode::handle_merge_response(const MergeResponse& msg, double now) {
    Actions actions;
    if (msg.edge != me_) return actions;
    if (!dir_->check(cloud_, as_span(merge_response_sign_payload(msg)), msg.cloud_sig))
        return actions;
    if (!apply_merge_response(lsm_, msg)) return actions;  // stale or unmatched
    metrics_->merges_completed++;
    state_version_++;
    maybe_start_merge(actions, now);  // cascade into the next level if it overflowed
    return actions;
}

}  // namespace wedge
