// Copyright 2026 the wedgechain authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

// Random instance generators for property tests. Values are structurally
// arbitrary (random signatures etc.); codec properties do not depend on
// cryptographic validity.

#include "wedge/simnet.hpp"
#include "wedge/wire.hpp"

namespace wedge::testgen {

inline Bytes bytes(Rng& rng, size_t max_len = 32) {
    Bytes out(rng.below(max_len + 1));
    for (auto& b : out) b = uint8_t(rng.next_u64());
    return out;
}

inline Digest digest(Rng& rng) {
    Digest d;
    for (auto& b : d.bytes) b = uint8_t(rng.next_u64());
    return d;
}

inline Signature signature(Rng& rng) {
    Signature s;
    for (auto& b : s.bytes) b = uint8_t(rng.next_u64());
    return s;
}

inline NodeId node(Rng& rng) {
    return {NodeKind(rng.below(3)), uint32_t(rng.below(1000))};
}

inline NodeId client(Rng& rng) { return {NodeKind::Client, uint32_t(rng.below(1000))}; }
inline NodeId edge(Rng& rng) { return {NodeKind::Edge, uint32_t(rng.below(16))}; }

inline EntryOp entry_op(Rng& rng) {
    switch (rng.below(3)) {
        case 0: return LogData{bytes(rng)};
        case 1: return Put{rng.next_u64(), bytes(rng)};
        default: return NoOp{};
    }
}

inline Entry entry(Rng& rng) {
    Entry e;
    e.client = client(rng);
    e.seq = rng.below(1 << 20);
    e.op = entry_op(rng);
    e.client_sig = signature(rng);
    return e;
}

inline Block block(Rng& rng, size_t max_entries = 5) {
    Block b;
    b.edge = edge(rng);
    b.bid = rng.below(1 << 16);
    size_t n = rng.below(max_entries + 1);
    for (size_t i = 0; i < n; i++) b.entries.push_back(entry(rng));
    return b;
}

inline BlockProof proof(Rng& rng) {
    BlockProof p;
    p.edge = edge(rng);
    p.bid = rng.below(1 << 16);
    p.digest = digest(rng);
    p.cloud_sig = signature(rng);
    return p;
}

inline PageEntry page_entry(Rng& rng) {
    PageEntry e;
    e.key = rng.below(1 << 20);
    e.value = bytes(rng);
    e.vbid = rng.below(1 << 10);
    e.vidx = uint32_t(rng.below(100));
    return e;
}

inline Page page(Rng& rng) {
    Page p;
    p.level = uint32_t(rng.below(4));
    p.page_id = rng.below(1 << 10);
    p.min_key = rng.next_u64();
    p.max_key = rng.next_u64();
    p.created = double(rng.below(1 << 20)) / 8.0;
    p.origin = rng.below(1 << 10);
    size_t n = rng.below(4);
    for (size_t i = 0; i < n; i++) p.entries.push_back(page_entry(rng));
    return p;
}

inline LevelRoot level_root(Rng& rng) {
    return {uint32_t(1 + rng.below(3)), digest(rng), signature(rng)};
}

inline GlobalRoot global_root(Rng& rng) {
    GlobalRoot g;
    g.hash = digest(rng);
    g.timestamp = double(rng.below(1 << 24)) / 16.0;
    g.watermark = rng.below(1 << 12);
    g.cloud_sig = signature(rng);
    return g;
}

inline MerklePath path(Rng& rng) {
    MerklePath p;
    size_t n = rng.below(5);
    for (size_t i = 0; i < n; i++) p.siblings.push_back({uint8_t(rng.below(2)), digest(rng)});
    return p;
}

inline GetProofBundle bundle(Rng& rng) {
    GetProofBundle b;
    size_t n = rng.below(3);
    for (size_t i = 0; i < n; i++) {
        L0Item item;
        item.block = block(rng, 3);
        if (rng.below(2)) item.proof = proof(rng);
        b.l0.push_back(std::move(item));
    }
    n = rng.below(3);
    for (size_t i = 0; i < n; i++) {
        LevelPage lp;
        lp.level = uint32_t(1 + rng.below(3));
        lp.page = page(rng);
        lp.path = path(rng);
        b.pages.push_back(std::move(lp));
    }
    n = rng.below(3);
    for (size_t i = 0; i < n; i++) b.roots.push_back(level_root(rng));
    b.global = global_root(rng);
    return b;
}

inline WireMessage message(Rng& rng) {
    switch (rng.below(15)) {
        case 0: return AddRequest{entry(rng)};
        case 1: {
            AddResponse m;
            m.block = block(rng);
            m.bid = m.block.bid;
            m.edge_sig = signature(rng);
            return m;
        }
        case 2: {
            BlockCertify m;
            m.edge = edge(rng);
            m.bid = rng.below(1 << 16);
            m.digest = digest(rng);
            m.edge_sig = signature(rng);
            return m;
        }
        case 3: return BlockProofMsg{proof(rng)};
        case 4: return ReadRequest{rng.below(1 << 16)};
        case 5: {
            ReadResponse m;
            m.edge = edge(rng);
            m.bid = rng.below(1 << 16);
            m.status = ReadStatus(rng.below(3));
            m.at_ms = double(rng.below(1 << 24)) / 4.0;
            if (rng.below(2)) m.block = block(rng, 3);
            if (rng.below(2)) m.proof = proof(rng);
            m.edge_sig = signature(rng);
            return m;
        }
        case 6: {
            GossipMsg m;
            m.edge = edge(rng);
            m.log_size = rng.below(1 << 16);
            m.timestamp = double(rng.below(1 << 24)) / 2.0;
            m.cloud_sig = signature(rng);
            return m;
        }
        case 7: {
            DisputeMsg m;
            m.accuser = client(rng);
            m.kind = DisputeKind(rng.below(4));
            m.evidence = bytes(rng, 64);
            m.accuser_sig = signature(rng);
            return m;
        }
        case 8: return GetRequest{rng.next_u64()};
        case 9: {
            GetResponse m;
            m.edge = edge(rng);
            m.key = rng.next_u64();
            m.bundle = bundle(rng);
            m.edge_sig = signature(rng);
            return m;
        }
        case 10: {
            MergeRequest m;
            m.edge = edge(rng);
            m.merge_id = rng.below(1 << 12);
            m.level = uint32_t(rng.below(3));
            if (m.level == 0) {
                size_t n = 1 + rng.below(3);
                for (size_t i = 0; i < n; i++) {
                    L0Item item;
                    item.block = block(rng, 3);
                    item.proof = proof(rng);
                    m.l0.push_back(std::move(item));
                }
            } else {
                size_t n = 1 + rng.below(3);
                for (size_t i = 0; i < n; i++) m.lower_pages.push_back(page(rng));
                m.lower_root = level_root(rng);
            }
            size_t n = rng.below(3);
            for (size_t i = 0; i < n; i++) m.upper_pages.push_back(page(rng));
            if (!m.upper_pages.empty()) m.upper_root = level_root(rng);
            m.edge_sig = signature(rng);
            return m;
        }
        case 11: {
            MergeResponse m;
            m.edge = edge(rng);
            m.merge_id = rng.below(1 << 12);
            m.level = uint32_t(rng.below(3));
            size_t n = rng.below(4);
            for (size_t i = 0; i < n; i++) m.pages.push_back(page(rng));
            m.new_root = level_root(rng);
            m.global = global_root(rng);
            m.cloud_sig = signature(rng);
            return m;
        }
        case 12: {
            Verdict m;
            m.edge = edge(rng);
            m.reason = VerdictReason(rng.below(6));
            m.cloud_sig = signature(rng);
            return m;
        }
        case 13: {
            BlockUpload m;
            m.block = block(rng);
            m.edge_sig = signature(rng);
            return m;
        }
        default: {
            ValueResponse m;
            m.key = rng.next_u64();
            m.found = rng.below(2) != 0;
            m.value = bytes(rng);
            m.cloud_sig = signature(rng);
            return m;
        }
    }
}

}  // namespace wedge::testgen
