// Copyright 2026 the wedgechain authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#include "wedge/cloud.hpp"

#include <algorithm>

namespace wedge {

CloudNode::CloudNode(NodeId me, KeyPair keys, const KeyDirectory* dir, CloudConfig cfg,
                     Metrics* metrics)
    : me_(me), keys_(std::move(keys)), dir_(dir), cfg_(cfg), metrics_(metrics) {}

double CloudNode::service_ms(const WireMessage& msg) const {
    if (std::holds_alternative<BlockCertify>(msg))
        return cfg_.certify_per_op_ms * cfg_.batch_size_hint;
    if (const auto* up = std::get_if<BlockUpload>(&msg))
        return cfg_.certify_per_op_ms * double(up->block.entries.size());
    return 0;
}

Actions CloudNode::on_message(NodeId src, const WireMessage& msg, double now) {
    if (const auto* m = std::get_if<BlockCertify>(&msg)) return handle_block_certify(src, *m, now);
    if (const auto* m = std::get_if<BlockUpload>(&msg)) return handle_block_upload(src, *m, now);
    if (const auto* m = std::get_if<MergeRequest>(&msg)) return handle_merge_request(src, *m, now);
    if (const auto* m = std::get_if<DisputeMsg>(&msg)) return handle_dispute(src, *m, now);
    return {};
}

Actions CloudNode::on_timer(uint32_t kind, double now) {
    Actions actions;
    if (kind != kCloudGossip) return actions;
    for (const auto& [edge, clients] : gossip_targets_) {
        const EdgeRec& rec = edges_[edge];
        GossipMsg g;
        g.edge = edge;
        g.log_size = rec.log_size;
        g.timestamp = now;
        g.cloud_sig = sign(keys_.secret_key, as_span(gossip_sign_payload(g)));
        for (NodeId c : clients) actions.send(c, g);
        metrics_->gossip_sent += clients.size();
        if (rec.log_size - rec.watermark > cfg_.l0_threshold + 1) metrics_->merge_overdue++;
    }
    return actions;
}

Verdict CloudNode::make_verdict(NodeId edge, VerdictReason reason, NodeId accuser, double now) {
    Verdict v;
    v.edge = edge;
    v.reason = reason;
    v.cloud_sig = sign(keys_.secret_key, as_span(verdict_sign_payload(v)));
    bool guilty = reason == VerdictReason::Equivocation || reason == VerdictReason::Lied ||
                  reason == VerdictReason::Omission || reason == VerdictReason::BadMerge;
    if (guilty) {
        verdicts_.push_back({now, edge, reason, accuser});
        metrics_->verdicts.push_back({now, edge, reason, accuser});
    }
    return v;
}

BlockProofMsg CloudNode::certify(NodeId edge, uint64_t bid, const Digest& digest, double) {
    BlockProof proof;
    proof.edge = edge;
    proof.bid = bid;
    proof.digest = digest;
    proof.cloud_sig = sign(keys_.secret_key, as_span(block_proof_sign_payload(proof)));
    return BlockProofMsg{proof};
}

Actions CloudNode::handle_block_certify(NodeId src, const BlockCertify& msg, double now) {
    Actions actions;
    if (msg.edge.kind != NodeKind::Edge) return actions;
    if (!dir_->check(msg.edge, as_span(block_certify_sign_payload(msg)), msg.edge_sig))
        return actions;  // bad edge signature: dropped

    EdgeRec& rec = edges_[msg.edge];
    auto it = rec.registry.find(msg.bid);
    if (it == rec.registry.end()) {
        rec.registry.emplace(msg.bid, EdgeRec::Certified{msg.digest, now});
        while (rec.registry.contains(rec.log_size)) rec.log_size++;
        actions.send(src, certify(msg.edge, msg.bid, msg.digest, now));
    } else if (it->second.digest == msg.digest) {
        // idempotent retry: same digest gets the original proof back
        actions.send(src, certify(msg.edge, msg.bid, msg.digest, now));
    } else {
        actions.send(src, make_verdict(msg.edge, VerdictReason::Equivocation, src, now));
    }
    return actions;
}

Actions CloudNode::handle_block_upload(NodeId src, const BlockUpload& msg, double now) {
    Actions actions;
    const Block& b = msg.block;
    if (b.edge.kind != NodeKind::Edge) return actions;
    if (!dir_->check(b.edge, as_span(block_upload_sign_payload(msg)), msg.edge_sig)) return actions;
    for (const auto& e : b.entries) {
        const PublicKey* pk = dir_->find(e.client);
        if (!pk || !verify(*pk, as_span(entry_sign_payload(e)), e.client_sig)) return actions;
    }
    Digest d = block_digest(b);
    EdgeRec& rec = edges_[b.edge];
    auto it = rec.registry.find(b.bid);
    if (it == rec.registry.end()) {
        rec.registry.emplace(b.bid, EdgeRec::Certified{d, now});
        while (rec.registry.contains(rec.log_size)) rec.log_size++;
        actions.send(src, certify(b.edge, b.bid, d, now));
    } else if (it->second.digest == d) {
        actions.send(src, certify(b.edge, b.bid, d, now));
    } else {
        actions.send(src, make_verdict(b.edge, VerdictReason::Equivocation, src, now));
    }
    return actions;
}

Digest CloudNode::global_hash(const EdgeRec& rec) const {
    Bytes concat;
    concat.reserve(32 * (cfg_.lsm_levels - 1));
    Digest empty_root = empty_merkle_root();
    for (uint32_t level = 1; level < cfg_.lsm_levels; level++) {
        auto it = rec.roots.find(level);
        const Digest& d = it != rec.roots.end() ? it->second : empty_root;
        concat.insert(concat.end(), d.bytes.begin(), d.bytes.end());
    }
    return hash(concat);
}

GlobalRoot CloudNode::sign_global(NodeId edge, const EdgeRec& rec, double now) const {
    GlobalRoot g;
    g.hash = global_hash(rec);
    g.timestamp = now;
    g.watermark = rec.watermark;
    g.cloud_sig = sign(keys_.secret_key, as_span(global_root_sign_payload(edge, g)));
    return g;
}

GlobalRoot CloudNode::initial_global_root(NodeId edge) const {
    EdgeRec empty;
    return sign_global(edge, empty, 0);
}

Actions CloudNode::handle_merge_request(NodeId src, const MergeRequest& msg, double now) {
    Actions actions;
    if (msg.edge.kind != NodeKind::Edge) return actions;
    if (!dir_->check(msg.edge, as_span(merge_request_sign_payload(msg)), msg.edge_sig))
        return actions;
    EdgeRec& rec = edges_[msg.edge];
    if (msg.merge_id == rec.last_merge_id && rec.last_merge_response) {
        actions.send(src, *rec.last_merge_response);  // duplicate request: replay the answer
        return actions;
    }

    auto reject = [&]() {
        actions.send(src, make_verdict(msg.edge, VerdictReason::BadMerge, src, now));
        return actions;
    };

    if (msg.level + 1 >= cfg_.lsm_levels) return reject();

    std::vector<PageEntry> input;
    if (msg.level == 0) {
        if (msg.l0.empty() || !msg.lower_pages.empty() || msg.lower_root) return reject();
        for (size_t i = 0; i < msg.l0.size(); i++) {
            const L0Item& item = msg.l0[i];
            if (item.block.edge != msg.edge) return reject();
            if (item.block.bid != rec.watermark + i) return reject();  // non-contiguous bids
            auto reg = rec.registry.find(item.block.bid);
            if (reg == rec.registry.end()) return reject();            // unverifiable page
            if (reg->second.digest != block_digest(item.block)) return reject();
            if (!item.proof || item.proof->edge != msg.edge || item.proof->bid != item.block.bid ||
                item.proof->digest != reg->second.digest ||
                !verify(keys_.public_key, as_span(block_proof_sign_payload(*item.proof)),
                        item.proof->cloud_sig))
                return reject();
            Page page = derive_l0_page(item.block, now);
            input.insert(input.end(), page.entries.begin(), page.entries.end());
        }
    } else {
        if (!msg.l0.empty() || msg.lower_pages.empty() || !msg.lower_root) return reject();
        auto cached = rec.roots.find(msg.level);
        if (cached == rec.roots.end()) return reject();
        for (const auto& p : msg.lower_pages) {
            if (p.level != msg.level) return reject();
        }
        Digest computed = merkle_root_of_pages(msg.lower_pages);
        if (computed != cached->second || msg.lower_root->root != computed) return reject();
        for (const auto& p : msg.lower_pages)
            input.insert(input.end(), p.entries.begin(), p.entries.end());
    }

    auto upper_cached = rec.roots.find(msg.level + 1);
    if (upper_cached != rec.roots.end()) {
        if (msg.upper_pages.empty() || !msg.upper_root) return reject();
        for (const auto& p : msg.upper_pages) {
            if (p.level != msg.level + 1) return reject();
        }
        Digest computed = merkle_root_of_pages(msg.upper_pages);
        if (computed != upper_cached->second || msg.upper_root->root != computed) return reject();
    } else if (!msg.upper_pages.empty()) {
        return reject();
    }
    for (const auto& p : msg.upper_pages)
        input.insert(input.end(), p.entries.begin(), p.entries.end());

    if (metrics_->audit_merges) {
        MergeAudit audit;
        audit.level = msg.level;
        audit.input = input;
        metrics_->merge_audits.push_back(std::move(audit));
    }

    std::vector<Page> pages = merge_pages(std::move(input), msg.level + 1, cfg_.page_size, now);
    if (metrics_->audit_merges) metrics_->merge_audits.back().output = pages;

    if (msg.level == 0) {
        rec.watermark += msg.l0.size();
    } else {
        rec.roots.erase(msg.level);
    }
    Digest new_root_digest = merkle_root_of_pages(pages);
    if (pages.empty()) {
        rec.roots.erase(msg.level + 1);
    } else {
        rec.roots[msg.level + 1] = new_root_digest;
    }

    MergeResponse resp;
    resp.edge = msg.edge;
    resp.merge_id = msg.merge_id;
    resp.level = msg.level;
    resp.pages = std::move(pages);
    resp.new_root.level = msg.level + 1;
    resp.new_root.root = new_root_digest;
    resp.new_root.cloud_sig = sign(
        keys_.secret_key, as_span(level_root_sign_payload(msg.edge, msg.level + 1, new_root_digest)));
    resp.global = sign_global(msg.edge, rec, now);
    resp.cloud_sig = sign(keys_.secret_key, as_span(merge_response_sign_payload(resp)));
    rec.last_merge_id = msg.merge_id;
    rec.last_merge_response = resp;
    actions.send(src, std::move(resp));
    return actions;
}

Actions CloudNode::handle_dispute(NodeId src, const DisputeMsg& msg, double now) {
    Actions actions;
    auto invalid = [&]() {
        // the disputant is noted, not punished
        actions.send(src, make_verdict(msg.accuser, VerdictReason::InvalidEvidence, src, now));
        return actions;
    };
    if (!dir_->check(msg.accuser, as_span(dispute_sign_payload(msg)), msg.accuser_sig))
        return invalid();

    try {
        switch (msg.kind) {
            case DisputeKind::AddPromise: {
                AddPromiseEvidence ev = decode_add_promise_evidence(as_span(msg.evidence));
                NodeId edge = ev.response.block.edge;
                if (!dir_->check(edge, as_span(add_response_sign_payload(ev.response)),
                                 ev.response.edge_sig))
                    return invalid();
                const Entry* promised = nullptr;
                for (const auto& e : ev.response.block.entries) {
                    if (e.client == ev.client && e.seq == ev.seq) promised = &e;
                }
                if (!promised) return invalid();  // the response never promised this entry
                EdgeRec& rec = edges_[edge];
                auto reg = rec.registry.find(ev.response.bid);
                if (reg == rec.registry.end()) {
                    actions.send(src, make_verdict(edge, VerdictReason::None, src, now));
                    return actions;
                }
                if (reg->second.digest != block_digest(ev.response.block)) {
                    actions.send(src, make_verdict(edge, VerdictReason::Lied, src, now));
                    return actions;
                }
                if (ev.actual && block_digest(*ev.actual) == reg->second.digest) {
                    bool present = false;
                    for (const auto& e : ev.actual->entries) {
                        if (e.client == ev.client && e.seq == ev.seq) present = true;
                    }
                    if (!present) {
                        actions.send(src, make_verdict(edge, VerdictReason::Lied, src, now));
                        return actions;
                    }
                }
                actions.send(src, make_verdict(edge, VerdictReason::None, src, now));
                return actions;
            }
            case DisputeKind::ReadContent: {
                ReadResponse ev = decode_read_response(as_span(msg.evidence));
                if (!dir_->check(ev.edge, as_span(read_response_sign_payload(ev)), ev.edge_sig))
                    return invalid();
                if (ev.status == ReadStatus::Unavailable || !ev.block) return invalid();
                EdgeRec& rec = edges_[ev.edge];
                auto reg = rec.registry.find(ev.bid);
                VerdictReason r = VerdictReason::None;
                if (reg != rec.registry.end() && reg->second.digest != block_digest(*ev.block))
                    r = VerdictReason::Lied;
                actions.send(src, make_verdict(ev.edge, r, src, now));
                return actions;
            }
            case DisputeKind::Omission: {
                ReadResponse ev = decode_read_response(as_span(msg.evidence));
                if (!dir_->check(ev.edge, as_span(read_response_sign_payload(ev)), ev.edge_sig))
                    return invalid();
                if (ev.status != ReadStatus::Unavailable) return invalid();
                EdgeRec& rec = edges_[ev.edge];
                auto reg = rec.registry.find(ev.bid);
                // Provably filled at the time the edge denied it: the denial
                // postdates our own certification of that bid.
                VerdictReason r = VerdictReason::None;
                if (reg != rec.registry.end() && reg->second.at <= ev.at_ms)
                    r = VerdictReason::Omission;
                actions.send(src, make_verdict(ev.edge, r, src, now));
                return actions;
            }
            case DisputeKind::BadBundle: {
                GetResponse ev = decode_get_response(as_span(msg.evidence));
                if (!dir_->check(ev.edge, as_span(get_response_sign_payload(ev)), ev.edge_sig))
                    return invalid();
                VerifiedGet vg = verify_get_proof(ev.bundle, ev.key, keys_.public_key, ev.edge,
                                                  cfg_.lsm_levels);
                VerdictReason r =
                    vg.status == GetStatus::Invalid ? VerdictReason::Lied : VerdictReason::None;
                actions.send(src, make_verdict(ev.edge, r, src, now));
                return actions;
            }
        }
    } catch (const WireError&) {
        return invalid();
    }
    return invalid();
}

// ---- cloud_only baseline ----

CloudOnlyNode::CloudOnlyNode(NodeId me, KeyPair keys, const KeyDirectory* dir, uint32_t batch_size,
                             double certify_per_op_ms, Metrics* metrics)
    : me_(me),
      keys_(std::move(keys)),
      dir_(dir),
      batch_size_(batch_size),
      certify_per_op_ms_(certify_per_op_ms),
      metrics_(metrics) {}

double CloudOnlyNode::service_ms(const WireMessage& msg) const {
    // block commit cost is paid once per sealed batch, modeled per op
    if (std::holds_alternative<AddRequest>(msg)) return certify_per_op_ms_;
    return 0;
}

Actions CloudOnlyNode::on_message(NodeId src, const WireMessage& msg, double now) {
    Actions actions;
    if (const auto* m = std::get_if<AddRequest>(&msg)) {
        const Entry& e = m->entry;
        const PublicKey* pk = dir_->find(e.client);
        if (!pk || !verify(*pk, as_span(entry_sign_payload(e)), e.client_sig)) {
            metrics_->dropped_entries++;
            return actions;
        }
        buffer_.push_back(e);
        if (buffer_.size() >= batch_size_) {
            Block block;
            block.edge = me_;  // the cloud plays the committer role here
            block.bid = next_bid_++;
            block.entries = std::move(buffer_);
            buffer_.clear();
            for (const auto& be : block.entries) {
                if (const auto* put = std::get_if<Put>(&be.op)) store_[put->key] = put->value;
            }
            std::vector<NodeId> contributors;
            for (const auto& be : block.entries) {
                if (std::find(contributors.begin(), contributors.end(), be.client) ==
                    contributors.end())
                    contributors.push_back(be.client);
            }
            AddResponse resp;
            resp.block = block;
            resp.bid = block.bid;
            resp.edge_sig = sign(keys_.secret_key, as_span(add_response_sign_payload(resp)));
            for (NodeId c : contributors) actions.send(c, resp);
            log_.emplace(block.bid, std::move(block));
        }
        return actions;
    }
    if (const auto* m = std::get_if<ReadRequest>(&msg)) {
        ReadResponse resp;
        resp.edge = me_;
        resp.bid = m->bid;
        resp.at_ms = now;
        auto it = log_.find(m->bid);
        if (it == log_.end()) {
            resp.status = ReadStatus::Unavailable;
        } else {
            resp.status = ReadStatus::Phase2;  // trusted answer; no proof needed
            resp.block = it->second;
        }
        resp.edge_sig = sign(keys_.secret_key, as_span(read_response_sign_payload(resp)));
        actions.send(src, std::move(resp));
        return actions;
    }
    if (const auto* m = std::get_if<GetRequest>(&msg)) {
        ValueResponse resp;
        resp.key = m->key;
        auto it = store_.find(m->key);
        resp.found = it != store_.end();
        if (resp.found) resp.value = it->second;
        resp.cloud_sig = sign(keys_.secret_key, as_span(value_response_sign_payload(resp)));
        actions.send(src, std::move(resp));
        return actions;
    }
    return actions;
}

}  // namespace wedge
