// Copyright 2026 the wedgechain authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#include "wedge/adversary.hpp"

#include <algorithm>

namespace wedge {

Actions FaultyEdge::on_message(NodeId src, const WireMessage& msg, double now) {
    seen_msgs_++;
    Actions actions = inner_.on_message(src, msg, now);
    maybe_snapshot(now);
    if (active(now)) intercept(actions, now);
    return actions;
}

Actions FaultyEdge::on_timer(uint32_t kind, double now) {
    Actions actions = inner_.on_timer(kind, now);
    maybe_snapshot(now);
    if (active(now)) intercept(actions, now);
    return actions;
}

void FaultyEdge::maybe_snapshot(double now) {
    if (fault_.behavior != FaultSpec::Behavior::StaleSnapshot) return;
    if (inner_.state_version() == snapshot_version_) return;
    snapshot_version_ = inner_.state_version();
    history_.push_back({now, inner_.lsm()});
    // keep one snapshot at or before (now - age) plus everything newer
    while (history_.size() >= 2 && history_[1].t <= now - fault_.age_ms) history_.pop_front();
}

Block FaultyEdge::doctored(const Block& b) const {
    Block d = b;
    if (d.entries.size() >= 2) {
        std::reverse(d.entries.begin(), d.entries.end());
    } else if (!d.entries.empty()) {
        d.entries.push_back(d.entries.front());
    }
    return d;
}

void FaultyEdge::intercept(Actions& actions, double now) {
    using B = FaultSpec::Behavior;
    switch (fault_.behavior) {
        case B::None:
            return;

        case B::Equivocate: {
            for (auto& ob : actions.out) {
                if (ob.dst != fault_.victim) continue;
                if (auto* ar = std::get_if<AddResponse>(&ob.msg); ar && ar->bid == fault_.bid) {
                    ar->block = doctored(ar->block);
                    ar->edge_sig = sign(keys_.secret_key, as_span(add_response_sign_payload(*ar)));
                } else if (auto* rr = std::get_if<ReadResponse>(&ob.msg);
                           rr && rr->bid == fault_.bid && rr->block) {
                    rr->block = doctored(*rr->block);
                    rr->edge_sig = sign(keys_.secret_key, as_span(read_response_sign_payload(*rr)));
                }
            }
            return;
        }

        case B::DropEntry: {
            // First sight of the victim's block: build the entry-less variant
            // that the rest of the world will see.
            for (auto& ob : actions.out) {
                const auto* ar = std::get_if<AddResponse>(&ob.msg);
                if (!ar || replacement_.contains(ar->bid)) continue;
                bool has_victim = std::any_of(
                    ar->block.entries.begin(), ar->block.entries.end(), [&](const Entry& e) {
                        return e.client == fault_.victim && e.seq == fault_.drop_seq;
                    });
                if (!has_victim) continue;
                Block stripped = ar->block;
                std::erase_if(stripped.entries, [&](const Entry& e) {
                    return e.client == fault_.victim && e.seq == fault_.drop_seq;
                });
                replacement_.emplace(ar->bid, std::move(stripped));
            }
            if (replacement_.empty()) return;
            auto swap_block = [&](Block& b) -> bool {
                auto it = replacement_.find(b.bid);
                if (it == replacement_.end()) return false;
                b = it->second;
                return true;
            };
            for (auto& ob : actions.out) {
                if (auto* ar = std::get_if<AddResponse>(&ob.msg)) {
                    // the victim keeps the original promise; everyone else
                    // sees the block that will actually be certified
                    if (ob.dst != fault_.victim && swap_block(ar->block))
                        ar->edge_sig =
                            sign(keys_.secret_key, as_span(add_response_sign_payload(*ar)));
                } else if (auto* bc = std::get_if<BlockCertify>(&ob.msg)) {
                    if (auto it = replacement_.find(bc->bid); it != replacement_.end()) {
                        bc->digest = block_digest(it->second);
                        bc->edge_sig =
                            sign(keys_.secret_key, as_span(block_certify_sign_payload(*bc)));
                    }
                } else if (auto* rr = std::get_if<ReadResponse>(&ob.msg)) {
                    if (rr->block && swap_block(*rr->block))
                        rr->edge_sig =
                            sign(keys_.secret_key, as_span(read_response_sign_payload(*rr)));
                } else if (auto* mr = std::get_if<MergeRequest>(&ob.msg)) {
                    bool changed = false;
                    for (auto& item : mr->l0) changed |= swap_block(item.block);
                    if (changed)
                        mr->edge_sig =
                            sign(keys_.secret_key, as_span(merge_request_sign_payload(*mr)));
                } else if (auto* gr = std::get_if<GetResponse>(&ob.msg)) {
                    bool changed = false;
                    for (auto& item : gr->bundle.l0) changed |= swap_block(item.block);
                    if (changed)
                        gr->edge_sig =
                            sign(keys_.secret_key, as_span(get_response_sign_payload(*gr)));
                }
            }
            return;
        }

        case B::WrongDigest: {
            for (auto& ob : actions.out) {
                auto* bc = std::get_if<BlockCertify>(&ob.msg);
                if (!bc || bc->bid != fault_.bid) continue;
                bc->digest = hash(bc->digest.span());  // well-formed, provably wrong
                bc->edge_sig = sign(keys_.secret_key, as_span(block_certify_sign_payload(*bc)));
            }
            return;
        }

        case B::OmitBlock: {
            for (auto& ob : actions.out) {
                auto* rr = std::get_if<ReadResponse>(&ob.msg);
                if (!rr || rr->bid != fault_.bid) continue;
                rr->status = ReadStatus::Unavailable;
                rr->block.reset();
                rr->proof.reset();
                rr->edge_sig = sign(keys_.secret_key, as_span(read_response_sign_payload(*rr)));
            }
            return;
        }

        case B::StaleSnapshot: {
            for (auto& ob : actions.out) {
                auto* gr = std::get_if<GetResponse>(&ob.msg);
                if (!gr) continue;
                const Snapshot* snap = nullptr;
                for (const auto& s : history_) {
                    if (s.t <= now - fault_.age_ms) snap = &s;
                }
                if (!snap) continue;  // nothing old enough yet; serve truthfully
                served_ages_.push_back(now - snap->t);
                // current proofs are real and make the stale bundle look clean
                gr->bundle = lookup(snap->lsm, gr->key, inner_.proofs());
                gr->edge_sig = sign(keys_.secret_key, as_span(get_response_sign_payload(*gr)));
            }
            return;
        }
    }
}

}  // namespace wedge
