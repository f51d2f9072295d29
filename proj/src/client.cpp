// Copyright 2026 the wedgechain authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#include "wedge/client.hpp"

#include <algorithm>

namespace wedge {

ClientNode::ClientNode(NodeId me, KeyPair keys, NodeId target, NodeId cloud,
                       const KeyDirectory* dir, ClientConfig cfg, std::vector<PlannedOp> plan,
                       Metrics* metrics)
    : me_(me),
      keys_(std::move(keys)),
      target_(target),
      cloud_(cloud),
      dir_(dir),
      cfg_(cfg),
      metrics_(metrics),
      plan_(std::move(plan)),
      rng_(uint64_t(me.id) * 0x9E3779B97F4A7C15ULL + 17) {}

bool ClientNode::idle() const {
    if (plan_pos_ < plan_.size()) return false;
    if (!retry_queue_.empty()) return false;
    if (!unavailable_.empty()) return false;
    for (const auto& [seq, w] : writes_) {
        if (w.phase != Phase::Phase2 && w.phase != Phase::Disputed) return false;
    }
    for (const auto& r : reads_) {
        if (!r.answered) return false;
        if (r.phase == Phase::Phase1) return false;
    }
    for (const auto& g : gets_) {
        if (!g.done && !g.disputed) return false;
        if (g.done && !g.awaiting.empty() && !g.disputed) return false;
    }
    return true;
}

Actions ClientNode::on_message(NodeId src, const WireMessage& msg, double now) {
    (void)src;
    Actions actions;
    if (const auto* m = std::get_if<AddResponse>(&msg)) on_add_response(*m, now, actions);
    else if (const auto* m = std::get_if<BlockProofMsg>(&msg)) on_block_proof(*m, now, actions);
    else if (const auto* m = std::get_if<ReadResponse>(&msg)) verify_read(*m, now, actions);
    else if (const auto* m = std::get_if<GossipMsg>(&msg)) on_gossip(*m, now, actions);
    else if (const auto* m = std::get_if<GetResponse>(&msg)) verify_get(*m, now, actions);
    else if (const auto* m = std::get_if<ValueResponse>(&msg)) {
        // trusted cloud answer (cloud_only wiring)
        if (dir_->check(cloud_, as_span(value_response_sign_payload(*m)), m->cloud_sig)) {
            for (auto& g : gets_) {
                if (!g.done && g.key == m->key) {
                    g.done = true;
                    auto& row = metrics_->ops[g.row];
                    row.status = m->found ? OpStatus::Found : OpStatus::Absent;
                    row.phase1_at = row.phase2_at = now;
                    break;
                }
            }
        }
    }
    // Verdict messages are terminal records; the metrics already hold them.
    return actions;
}

Actions ClientNode::on_timer(uint32_t kind, double now) {
    Actions actions;
    if (kind == kClientWorkload) {
        issue_next(actions, now);
    } else if (kind == kClientTick) {
        for (auto& d : check_timeouts(now)) actions.send(cloud_, std::move(d));
    } else if (kind == kClientRetry) {
        while (!retry_queue_.empty() && retry_queue_.front().first <= now) {
            size_t gi = retry_queue_.front().second;
            retry_queue_.pop_front();
            if (gi < gets_.size() && !gets_[gi].done && !gets_[gi].disputed) {
                actions.send(target_, GetRequest{gets_[gi].key});
            }
        }
    }
    return actions;
}

void ClientNode::issue_next(Actions& actions, double now) {
    if (plan_pos_ >= plan_.size()) return;
    const PlannedOp& op = plan_[plan_pos_++];
    switch (op.kind) {
        case OpKindTag::Add:
        case OpKindTag::Put: {
            OpRow row;
            row.client = me_;
            row.seq = op.entry->seq;
            row.kind = op.kind;
            row.issued_at = now;
            metrics_->ops.push_back(row);
            PendingWrite w;
            w.entry = op.entry;
            w.row = metrics_->ops.size() - 1;
            writes_.emplace(op.entry->seq, std::move(w));
            next_seq_ = std::max(next_seq_, op.entry->seq + 1);
            actions.send(target_, AddRequest{*op.entry});
            break;
        }
        case OpKindTag::Read: {
            uint64_t bid = op.bid;
            if (!op.bid_exact) bid = any_bid_seen_ ? rng_.below(max_bid_seen_ + 1) : 0;
            OpRow row;
            row.client = me_;
            row.seq = reads_.size();
            row.kind = OpKindTag::Read;
            row.bid = bid;
            row.has_bid = true;
            row.issued_at = now;
            metrics_->ops.push_back(row);
            PendingRead r;
            r.bid = bid;
            r.row = metrics_->ops.size() - 1;
            reads_.push_back(std::move(r));
            actions.send(target_, ReadRequest{bid});
            break;
        }
        case OpKindTag::Get: {
            OpRow row;
            row.client = me_;
            row.seq = gets_.size();
            row.kind = OpKindTag::Get;
            row.issued_at = now;
            metrics_->ops.push_back(row);
            PendingGet g;
            g.key = op.key;
            g.row = metrics_->ops.size() - 1;
            gets_.push_back(std::move(g));
            actions.send(target_, GetRequest{op.key});
            break;
        }
    }
    if (plan_pos_ < plan_.size()) actions.timer(kClientWorkload, plan_[plan_pos_].at);
}

DisputeMsg ClientNode::make_dispute(DisputeKind kind, Bytes evidence) const {
    DisputeMsg d;
    d.accuser = me_;
    d.kind = kind;
    d.evidence = std::move(evidence);
    d.accuser_sig = sign(keys_.secret_key, as_span(dispute_sign_payload(d)));
    return d;
}

void ClientNode::dispute_write(PendingWrite& w, uint64_t seq, Actions& actions, double now) {
    w.phase = Phase::Disputed;
    metrics_->ops[w.row].status = OpStatus::Disputed;
    AddPromiseEvidence ev;
    ev.response = *w.evidence;
    ev.client = me_;
    ev.seq = seq;
    actions.send(cloud_, make_dispute(DisputeKind::AddPromise, encode_add_promise_evidence(ev)));
    metrics_->disputes_sent++;
    (void)now;
}

void ClientNode::dispute_read(PendingRead& r, Actions& actions, double now) {
    r.phase = Phase::Disputed;
    metrics_->ops[r.row].status = OpStatus::Disputed;
    actions.send(cloud_, make_dispute(DisputeKind::ReadContent, encode_read_response(*r.evidence)));
    metrics_->disputes_sent++;
    (void)now;
}

void ClientNode::dispute_get(PendingGet& g, Actions& actions, double now) {
    g.disputed = true;
    metrics_->ops[g.row].status = OpStatus::Invalid;
    actions.send(cloud_, make_dispute(DisputeKind::BadBundle, encode_get_response(*g.evidence)));
    metrics_->disputes_sent++;
    (void)now;
}

void ClientNode::on_add_response(const AddResponse& msg, double now, Actions& actions) {
    NodeId signer = cfg_.wiring == Wiring::CloudOnly ? cloud_ : target_;
    if (msg.block.edge != signer) return;
    if (!dir_->check(signer, as_span(add_response_sign_payload(msg)), msg.edge_sig)) return;

    Digest d = block_digest(msg.block);
    auto shared = std::make_shared<const AddResponse>(msg);
    any_bid_seen_ = true;
    max_bid_seen_ = std::max(max_bid_seen_, msg.bid);

    for (const auto& e : msg.block.entries) {
        if (e.client != me_) continue;
        auto it = writes_.find(e.seq);
        if (it == writes_.end()) continue;
        PendingWrite& w = it->second;
        if (w.phase != Phase::Sent) continue;  // duplicate response: idempotent
        if (!(e == *w.entry)) continue;        // not my entry verbatim; keep waiting
        w.phase = Phase::Phase1;
        w.bid = msg.bid;
        w.has_bid = true;
        w.phase1_at = now;
        w.evidence = shared;
        w.evidence_digest = d;
        by_bid_[msg.bid].push_back(e.seq);
        auto& row = metrics_->ops[w.row];
        row.bid = msg.bid;
        row.has_bid = true;
        row.phase1_at = now;
        row.status = OpStatus::Phase1;
        if (cfg_.wiring == Wiring::CloudOnly) {
            // the trusted cloud committed it; there is no second phase
            w.phase = Phase::Phase2;
            row.phase2_at = now;
            row.status = OpStatus::Phase2;
        }
    }

    if (cfg_.wiring != Wiring::CloudOnly) {
        if (auto it = proof_cache_.find(msg.bid); it != proof_cache_.end()) {
            on_block_proof(BlockProofMsg{it->second}, now, actions);
        }
    }
}

void ClientNode::on_block_proof(const BlockProofMsg& msg, double now, Actions& actions) {
    const BlockProof& proof = msg.proof;
    if (!dir_->check(cloud_, as_span(block_proof_sign_payload(proof)), proof.cloud_sig)) return;
    proof_cache_[proof.bid] = proof;  // cached even with no pending op; future reads self-upgrade

    if (auto it = by_bid_.find(proof.bid); it != by_bid_.end()) {
        bool all_settled = true;
        for (uint64_t seq : it->second) {
            auto wit = writes_.find(seq);
            if (wit == writes_.end()) continue;
            PendingWrite& w = wit->second;
            if (w.phase != Phase::Phase1) continue;
            if (proof.digest == w.evidence_digest) {
                w.phase = Phase::Phase2;
                auto& row = metrics_->ops[w.row];
                row.phase2_at = now;
                row.status = OpStatus::Phase2;
                writes_.erase(wit);  // settled; the metrics row keeps the record
            } else {
                dispute_write(w, seq, actions, now);
                all_settled = false;
            }
        }
        if (all_settled) by_bid_.erase(it);
    }
    for (auto& r : reads_) {
        if (r.phase != Phase::Phase1 || r.bid != proof.bid) continue;
        if (proof.digest == r.evidence_digest) {
            r.phase = Phase::Phase2;
            auto& row = metrics_->ops[r.row];
            row.phase2_at = now;
            row.status = OpStatus::Phase2;
        } else {
            dispute_read(r, actions, now);
        }
    }
    for (auto& g : gets_) {
        if (g.disputed || g.awaiting.empty()) continue;
        auto ait = g.awaiting.find(proof.bid);
        if (ait == g.awaiting.end()) continue;
        if (proof.digest == ait->second) {
            g.awaiting.erase(ait);
            if (g.awaiting.empty() && g.done) {
                metrics_->ops[g.row].phase2_at = now;
            }
        } else {
            dispute_get(g, actions, now);  // served an L0 block that certified differently
        }
    }
}

void ClientNode::verify_read(const ReadResponse& msg, double now, Actions& actions) {
    NodeId signer = cfg_.wiring == Wiring::CloudOnly ? cloud_ : target_;
    if (msg.edge != signer) return;
    if (!dir_->check(signer, as_span(read_response_sign_payload(msg)), msg.edge_sig)) return;

    PendingRead* pending = nullptr;
    for (auto& r : reads_) {
        if (!r.answered && r.bid == msg.bid) {
            pending = &r;
            break;
        }
    }

    switch (msg.status) {
        case ReadStatus::Unavailable: {
            if (pending) {
                pending->answered = true;
                metrics_->ops[pending->row].status = OpStatus::Unavailable;
            }
            unavailable_.insert_or_assign(msg.bid, msg);
            // already provable? (a gossip covering this bid predates the denial)
            if (auto ts = first_covering_gossip(msg.bid);
                ts && msg.at_ms >= *ts && !omission_disputed_.contains(msg.bid)) {
                omission_disputed_.insert(msg.bid);
                unavailable_.erase(msg.bid);
                actions.send(cloud_,
                             make_dispute(DisputeKind::Omission, encode_read_response(msg)));
                metrics_->disputes_sent++;
            }
            return;
        }
        case ReadStatus::Phase2: {
            if (!pending) return;
            pending->answered = true;
            bool ok = msg.block.has_value();
            Digest d;
            if (ok) d = block_digest(*msg.block);
            if (cfg_.wiring != Wiring::CloudOnly) {
                ok = ok && msg.proof.has_value() && msg.proof->bid == msg.bid &&
                     msg.proof->digest == d &&
                     dir_->check(cloud_, as_span(block_proof_sign_payload(*msg.proof)),
                                 msg.proof->cloud_sig);
            }
            auto& row = metrics_->ops[pending->row];
            if (ok) {
                unavailable_.erase(msg.bid);
                pending->phase = Phase::Phase2;
                pending->phase1_at = now;
                row.phase1_at = row.phase2_at = now;
                row.status = OpStatus::Phase2;
                any_bid_seen_ = true;
                max_bid_seen_ = std::max(max_bid_seen_, msg.bid);
            } else {
                // rejected: signature/digest gate failed; dispute with the response
                pending->evidence = std::make_shared<const ReadResponse>(msg);
                pending->evidence_digest = d;
                dispute_read(*pending, actions, now);
            }
            return;
        }
        case ReadStatus::Phase1: {
            if (!pending || !msg.block) return;
            pending->answered = true;
            pending->phase = Phase::Phase1;
            pending->phase1_at = now;
            pending->evidence = std::make_shared<const ReadResponse>(msg);
            pending->evidence_digest = block_digest(*msg.block);
            unavailable_.erase(msg.bid);
            auto& row = metrics_->ops[pending->row];
            row.phase1_at = now;
            row.status = OpStatus::Phase1;
            any_bid_seen_ = true;
            max_bid_seen_ = std::max(max_bid_seen_, msg.bid);
            if (auto it = proof_cache_.find(msg.bid); it != proof_cache_.end()) {
                on_block_proof(BlockProofMsg{it->second}, now, actions);
            }
            return;
        }
    }
}

std::optional<double> ClientNode::first_covering_gossip(uint64_t bid) const {
    for (const auto& [ts, log_size] : gossip_milestones_) {
        if (log_size > bid) return ts;
    }
    return std::nullopt;
}

void ClientNode::on_gossip(const GossipMsg& msg, double now, Actions& actions) {
    if (msg.edge != target_) return;
    if (!dir_->check(cloud_, as_span(gossip_sign_payload(msg)), msg.cloud_sig)) return;
    if (gossip_milestones_.empty() || msg.log_size > gossip_milestones_.back().second) {
        gossip_milestones_.emplace_back(msg.timestamp, msg.log_size);
    }
    (void)now;
    std::vector<uint64_t> resolved;
    for (const auto& [bid, resp] : unavailable_) {
        if (bid >= msg.log_size || omission_disputed_.contains(bid)) continue;
        if (auto ts = first_covering_gossip(bid); ts && resp.at_ms >= *ts) {
            // the log provably held this bid before the edge denied it
            omission_disputed_.insert(bid);
            resolved.push_back(bid);
            actions.send(cloud_, make_dispute(DisputeKind::Omission, encode_read_response(resp)));
            metrics_->disputes_sent++;
        } else {
            // not provable yet: ask again; a liar will deny after this gossip
            actions.send(target_, ReadRequest{bid});
        }
    }
    for (uint64_t bid : resolved) unavailable_.erase(bid);
}

std::vector<DisputeMsg> ClientNode::check_timeouts(double now) {
    std::vector<DisputeMsg> out;
    if (cfg_.dispute_timeout_ms <= 0) return out;
    for (auto& [seq, w] : writes_) {
        if (w.phase == Phase::Phase1 && now - w.phase1_at > cfg_.dispute_timeout_ms) {
            w.phase = Phase::Disputed;
            metrics_->ops[w.row].status = OpStatus::Disputed;
            AddPromiseEvidence ev;
            ev.response = *w.evidence;
            ev.client = me_;
            ev.seq = seq;
            out.push_back(make_dispute(DisputeKind::AddPromise, encode_add_promise_evidence(ev)));
            metrics_->disputes_sent++;
        }
    }
    for (auto& r : reads_) {
        if (r.phase == Phase::Phase1 && now - r.phase1_at > cfg_.dispute_timeout_ms) {
            r.phase = Phase::Disputed;
            metrics_->ops[r.row].status = OpStatus::Disputed;
            out.push_back(
                make_dispute(DisputeKind::ReadContent, encode_read_response(*r.evidence)));
            metrics_->disputes_sent++;
        }
    }
    for (auto& g : gets_) {
        if (g.done && !g.disputed && !g.awaiting.empty() && g.phase1_at >= 0 &&
            now - g.phase1_at > cfg_.dispute_timeout_ms) {
            g.disputed = true;
            metrics_->ops[g.row].status = OpStatus::Invalid;
            out.push_back(make_dispute(DisputeKind::BadBundle, encode_get_response(*g.evidence)));
            metrics_->disputes_sent++;
        }
    }
    return out;
}

void ClientNode::verify_get(const GetResponse& msg, double now, Actions& actions) {
    if (msg.edge != target_) return;
    if (!dir_->check(target_, as_span(get_response_sign_payload(msg)), msg.edge_sig)) return;

    // one response answers every op waiting on this key
    std::vector<size_t> matching;
    for (size_t i = 0; i < gets_.size(); i++) {
        if (!gets_[i].done && !gets_[i].disputed && gets_[i].key == msg.key) matching.push_back(i);
    }
    if (matching.empty()) return;

    const PublicKey* cloud_pk = dir_->find(cloud_);
    VerifiedGet vg = verify_get_proof(msg.bundle, msg.key, *cloud_pk, target_, cfg_.lsm_levels);
    bool stale = msg.bundle.global.timestamp < now - cfg_.window_ms;

    for (size_t idx : matching) {
        PendingGet& pending = gets_[idx];
        auto& row = metrics_->ops[pending.row];

        if (vg.status == GetStatus::Invalid) {
            pending.evidence = std::make_shared<const GetResponse>(msg);
            dispute_get(pending, actions, now);
            continue;
        }
        if (stale) {
            // consistent but stale; retry a bounded number of times
            if (pending.retries < cfg_.max_get_retries) {
                pending.retries++;
                retry_queue_.emplace_back(now + cfg_.retry_delay_ms, idx);
                actions.timer(kClientRetry, now + cfg_.retry_delay_ms);
            } else {
                pending.done = true;
                row.status = OpStatus::Stale;
            }
            continue;
        }

        pending.done = true;
        pending.phase1_at = now;
        row.phase1_at = now;
        row.status = vg.status == GetStatus::Found ? OpStatus::Found : OpStatus::Absent;
        if (vg.pending.empty()) {
            row.phase2_at = now;
            continue;
        }
        pending.evidence = std::make_shared<const GetResponse>(msg);
        bool disputed = false;
        for (auto& [bid, digest] : vg.pending) {
            if (auto it = proof_cache_.find(bid); it != proof_cache_.end()) {
                if (it->second.digest == digest) continue;
                dispute_get(pending, actions, now);
                disputed = true;
                break;
            }
            pending.awaiting.emplace(bid, digest);
        }
        if (!disputed && pending.awaiting.empty()) row.phase2_at = now;
    }
}

}  // namespace wedge
