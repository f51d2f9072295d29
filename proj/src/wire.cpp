// Copyright 2026 the wedgechain authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#include "wedge/wire.hpp"

#include <algorithm>

namespace wedge {

namespace {

enum MsgTag : uint8_t {
    kAddRequest = 0,
    kAddResponse = 1,
    kBlockCertify = 2,
    kBlockProofMsg = 3,
    kReadRequest = 4,
    kReadResponse = 5,
    kGossipMsg = 6,
    kDisputeMsg = 7,
    kGetRequest = 8,
    kGetResponse = 9,
    kMergeRequest = 10,
    kMergeResponse = 11,
    kVerdict = 12,
    kBlockUpload = 13,
    kValueResponse = 14,
};

void put_node(ByteWriter& w, NodeId n) {
    w.u8(uint8_t(n.kind));
    w.u32(n.id);
}

NodeId get_node(ByteReader& r) {
    uint8_t k = r.u8();
    if (k > 2) throw WireError("bad node kind");
    NodeId n;
    n.kind = NodeKind(k);
    n.id = r.u32();
    return n;
}

void put_digest(ByteWriter& w, const Digest& d) { w.raw(d.span()); }
Digest get_digest(ByteReader& r) {
    Digest d;
    auto s = r.raw(32);
    std::copy(s.begin(), s.end(), d.bytes.begin());
    return d;
}

void put_sig(ByteWriter& w, const Signature& s) { w.raw(s.span()); }
Signature get_sig(ByteReader& r) {
    Signature s;
    auto sp = r.raw(64);
    std::copy(sp.begin(), sp.end(), s.bytes.begin());
    return s;
}

void put_op(ByteWriter& w, const EntryOp& op) {
    if (const auto* ld = std::get_if<LogData>(&op)) {
        w.u8(0);
        w.bytes(as_span(ld->payload));
    } else if (const auto* p = std::get_if<Put>(&op)) {
        w.u8(1);
        w.u64(p->key);
        w.bytes(as_span(p->value));
    } else {
        w.u8(2);
    }
}

EntryOp get_op(ByteReader& r) {
    switch (r.u8()) {
        case 0:
            return LogData{r.bytes()};
        case 1: {
            Put p;
            p.key = r.u64();
            p.value = r.bytes();
            return p;
        }
        case 2:
            return NoOp{};
        default:
            throw WireError("bad entry op tag");
    }
}

void put_entry_body(ByteWriter& w, const Entry& e) {
    put_node(w, e.client);
    w.u64(e.seq);
    put_op(w, e.op);
}

void put_entry(ByteWriter& w, const Entry& e) {
    put_entry_body(w, e);
    put_sig(w, e.client_sig);
}

Entry get_entry(ByteReader& r) {
    Entry e;
    e.client = get_node(r);
    e.seq = r.u64();
    e.op = get_op(r);
    e.client_sig = get_sig(r);
    return e;
}

void put_block(ByteWriter& w, const Block& b) {
    put_node(w, b.edge);
    w.u64(b.bid);
    w.u32(uint32_t(b.entries.size()));
    for (const auto& e : b.entries) put_entry(w, e);
}

Block get_block(ByteReader& r) {
    Block b;
    b.edge = get_node(r);
    b.bid = r.u64();
    uint32_t n = r.u32();
    b.entries.reserve(std::min<size_t>(n, r.remaining() / 78));  // min encoded entry size
    for (uint32_t i = 0; i < n; i++) b.entries.push_back(get_entry(r));
    return b;
}

void put_proof(ByteWriter& w, const BlockProof& p) {
    put_node(w, p.edge);
    w.u64(p.bid);
    put_digest(w, p.digest);
    put_sig(w, p.cloud_sig);
}

BlockProof get_proof(ByteReader& r) {
    BlockProof p;
    p.edge = get_node(r);
    p.bid = r.u64();
    p.digest = get_digest(r);
    p.cloud_sig = get_sig(r);
    return p;
}

void put_page(ByteWriter& w, const Page& p) {
    w.u32(p.level);
    w.u64(p.page_id);
    w.u64(p.min_key);
    w.u64(p.max_key);
    w.f64(p.created);
    w.u64(p.origin);
    w.u32(uint32_t(p.entries.size()));
    for (const auto& e : p.entries) {
        w.u64(e.key);
        w.bytes(as_span(e.value));
        w.u64(e.vbid);
        w.u32(e.vidx);
    }
}

Page get_page(ByteReader& r) {
    Page p;
    p.level = r.u32();
    p.page_id = r.u64();
    p.min_key = r.u64();
    p.max_key = r.u64();
    p.created = r.f64();
    p.origin = r.u64();
    uint32_t n = r.u32();
    p.entries.reserve(std::min<size_t>(n, r.remaining() / 24));
    for (uint32_t i = 0; i < n; i++) {
        PageEntry e;
        e.key = r.u64();
        e.value = r.bytes();
        e.vbid = r.u64();
        e.vidx = r.u32();
        p.entries.push_back(std::move(e));
    }
    return p;
}

void put_level_root(ByteWriter& w, const LevelRoot& lr) {
    w.u32(lr.level);
    put_digest(w, lr.root);
    put_sig(w, lr.cloud_sig);
}

LevelRoot get_level_root(ByteReader& r) {
    LevelRoot lr;
    lr.level = r.u32();
    lr.root = get_digest(r);
    lr.cloud_sig = get_sig(r);
    return lr;
}

void put_global(ByteWriter& w, const GlobalRoot& g) {
    put_digest(w, g.hash);
    w.f64(g.timestamp);
    w.u64(g.watermark);
    put_sig(w, g.cloud_sig);
}

GlobalRoot get_global(ByteReader& r) {
    GlobalRoot g;
    g.hash = get_digest(r);
    g.timestamp = r.f64();
    g.watermark = r.u64();
    g.cloud_sig = get_sig(r);
    return g;
}

void put_path(ByteWriter& w, const MerklePath& p) {
    w.u32(uint32_t(p.siblings.size()));
    for (const auto& s : p.siblings) {
        w.u8(s.side);
        put_digest(w, s.digest);
    }
}

MerklePath get_path(ByteReader& r) {
    MerklePath p;
    uint32_t n = r.u32();
    p.siblings.reserve(std::min<size_t>(n, r.remaining() / 33));
    for (uint32_t i = 0; i < n; i++) {
        PathElem e;
        e.side = r.u8();
        if (e.side > 1) throw WireError("bad path side");
        e.digest = get_digest(r);
        p.siblings.push_back(e);
    }
    return p;
}

void put_l0_item(ByteWriter& w, const L0Item& it) {
    put_block(w, it.block);
    w.u8(it.proof ? 1 : 0);
    if (it.proof) put_proof(w, *it.proof);
}

L0Item get_l0_item(ByteReader& r) {
    L0Item it;
    it.block = get_block(r);
    if (r.u8()) it.proof = get_proof(r);
    return it;
}

void put_bundle(ByteWriter& w, const GetProofBundle& b) {
    w.u32(uint32_t(b.l0.size()));
    for (const auto& it : b.l0) put_l0_item(w, it);
    w.u32(uint32_t(b.pages.size()));
    for (const auto& lp : b.pages) {
        w.u32(lp.level);
        put_page(w, lp.page);
        put_path(w, lp.path);
    }
    w.u32(uint32_t(b.roots.size()));
    for (const auto& lr : b.roots) put_level_root(w, lr);
    put_global(w, b.global);
}

GetProofBundle get_bundle(ByteReader& r) {
    GetProofBundle b;
    uint32_t n = r.u32();
    b.l0.reserve(std::min<size_t>(n, r.remaining() / 18));
    for (uint32_t i = 0; i < n; i++) b.l0.push_back(get_l0_item(r));
    n = r.u32();
    b.pages.reserve(std::min<size_t>(n, r.remaining() / 41));
    for (uint32_t i = 0; i < n; i++) {
        LevelPage lp;
        lp.level = r.u32();
        lp.page = get_page(r);
        lp.path = get_path(r);
        b.pages.push_back(std::move(lp));
    }
    n = r.u32();
    b.roots.reserve(std::min<size_t>(n, r.remaining() / 100));
    for (uint32_t i = 0; i < n; i++) b.roots.push_back(get_level_root(r));
    b.global = get_global(r);
    return b;
}

// ---- message bodies (everything except the trailing signature) ----

void put_add_response_body(ByteWriter& w, const AddResponse& m) {
    put_block(w, m.block);
    w.u64(m.bid);
}

void put_block_certify_body(ByteWriter& w, const BlockCertify& m) {
    put_node(w, m.edge);
    w.u64(m.bid);
    put_digest(w, m.digest);
}

void put_read_response_body(ByteWriter& w, const ReadResponse& m) {
    put_node(w, m.edge);
    w.u64(m.bid);
    w.u8(uint8_t(m.status));
    w.f64(m.at_ms);
    w.u8(m.block ? 1 : 0);
    if (m.block) put_block(w, *m.block);
    w.u8(m.proof ? 1 : 0);
    if (m.proof) put_proof(w, *m.proof);
}

void put_gossip_body(ByteWriter& w, const GossipMsg& m) {
    put_node(w, m.edge);
    w.u64(m.log_size);
    w.f64(m.timestamp);
}

void put_dispute_body(ByteWriter& w, const DisputeMsg& m) {
    put_node(w, m.accuser);
    w.u8(uint8_t(m.kind));
    w.bytes(as_span(m.evidence));
}

void put_get_response_body(ByteWriter& w, const GetResponse& m) {
    put_node(w, m.edge);
    w.u64(m.key);
    put_bundle(w, m.bundle);
}

void put_merge_request_body(ByteWriter& w, const MergeRequest& m) {
    put_node(w, m.edge);
    w.u64(m.merge_id);
    w.u32(m.level);
    w.u32(uint32_t(m.l0.size()));
    for (const auto& it : m.l0) put_l0_item(w, it);
    w.u32(uint32_t(m.lower_pages.size()));
    for (const auto& p : m.lower_pages) put_page(w, p);
    w.u8(m.lower_root ? 1 : 0);
    if (m.lower_root) put_level_root(w, *m.lower_root);
    w.u32(uint32_t(m.upper_pages.size()));
    for (const auto& p : m.upper_pages) put_page(w, p);
    w.u8(m.upper_root ? 1 : 0);
    if (m.upper_root) put_level_root(w, *m.upper_root);
}

void put_merge_response_body(ByteWriter& w, const MergeResponse& m) {
    put_node(w, m.edge);
    w.u64(m.merge_id);
    w.u32(m.level);
    w.u32(uint32_t(m.pages.size()));
    for (const auto& p : m.pages) put_page(w, p);
    put_level_root(w, m.new_root);
    put_global(w, m.global);
}

void put_verdict_body(ByteWriter& w, const Verdict& m) {
    put_node(w, m.edge);
    w.u8(uint8_t(m.reason));
}

void put_block_upload_body(ByteWriter& w, const BlockUpload& m) { put_block(w, m.block); }

void put_value_response_body(ByteWriter& w, const ValueResponse& m) {
    w.u64(m.key);
    w.u8(m.found ? 1 : 0);
    w.bytes(as_span(m.value));
}

// Signature payload: two-byte domain tag + SHA-256 of the canonical body.
Bytes tagged_payload(const char (&tag)[3], const Bytes& body) {
    Bytes out;
    out.reserve(2 + 32);
    out.push_back(uint8_t(tag[0]));
    out.push_back(uint8_t(tag[1]));
    Digest d = hash(body);
    out.insert(out.end(), d.bytes.begin(), d.bytes.end());
    return out;
}

}  // namespace

Bytes encode(const WireMessage& msg) {
    ByteWriter w;
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, AddRequest>) {
                w.u8(kAddRequest);
                put_entry(w, m.entry);
            } else if constexpr (std::is_same_v<T, AddResponse>) {
                w.u8(kAddResponse);
                put_add_response_body(w, m);
                put_sig(w, m.edge_sig);
            } else if constexpr (std::is_same_v<T, BlockCertify>) {
                w.u8(kBlockCertify);
                put_block_certify_body(w, m);
                put_sig(w, m.edge_sig);
            } else if constexpr (std::is_same_v<T, BlockProofMsg>) {
                w.u8(kBlockProofMsg);
                put_proof(w, m.proof);
            } else if constexpr (std::is_same_v<T, ReadRequest>) {
                w.u8(kReadRequest);
                w.u64(m.bid);
            } else if constexpr (std::is_same_v<T, ReadResponse>) {
                w.u8(kReadResponse);
                put_read_response_body(w, m);
                put_sig(w, m.edge_sig);
            } else if constexpr (std::is_same_v<T, GossipMsg>) {
                w.u8(kGossipMsg);
                put_gossip_body(w, m);
                put_sig(w, m.cloud_sig);
            } else if constexpr (std::is_same_v<T, DisputeMsg>) {
                w.u8(kDisputeMsg);
                put_dispute_body(w, m);
                put_sig(w, m.accuser_sig);
            } else if constexpr (std::is_same_v<T, GetRequest>) {
                w.u8(kGetRequest);
                w.u64(m.key);
            } else if constexpr (std::is_same_v<T, GetResponse>) {
                w.u8(kGetResponse);
                put_get_response_body(w, m);
                put_sig(w, m.edge_sig);
            } else if constexpr (std::is_same_v<T, MergeRequest>) {
                w.u8(kMergeRequest);
                put_merge_request_body(w, m);
                put_sig(w, m.edge_sig);
            } else if constexpr (std::is_same_v<T, MergeResponse>) {
                w.u8(kMergeResponse);
                put_merge_response_body(w, m);
                put_sig(w, m.cloud_sig);
            } else if constexpr (std::is_same_v<T, Verdict>) {
                w.u8(kVerdict);
                put_verdict_body(w, m);
                put_sig(w, m.cloud_sig);
            } else if constexpr (std::is_same_v<T, BlockUpload>) {
                w.u8(kBlockUpload);
                put_block_upload_body(w, m);
                put_sig(w, m.edge_sig);
            } else if constexpr (std::is_same_v<T, ValueResponse>) {
                w.u8(kValueResponse);
                put_value_response_body(w, m);
                put_sig(w, m.cloud_sig);
            }
        },
        msg);
    return w.take();
}

WireMessage decode(std::span<const uint8_t> data) {
    ByteReader r(data);
    uint8_t tag = r.u8();
    WireMessage out;
    switch (tag) {
        case kAddRequest:
            out = AddRequest{get_entry(r)};
            break;
        case kAddResponse: {
            AddResponse m;
            m.block = get_block(r);
            m.bid = r.u64();
            m.edge_sig = get_sig(r);
            out = std::move(m);
            break;
        }
        case kBlockCertify: {
            BlockCertify m;
            m.edge = get_node(r);
            m.bid = r.u64();
            m.digest = get_digest(r);
            m.edge_sig = get_sig(r);
            out = m;
            break;
        }
        case kBlockProofMsg:
            out = BlockProofMsg{get_proof(r)};
            break;
        case kReadRequest:
            out = ReadRequest{r.u64()};
            break;
        case kReadResponse: {
            ReadResponse m;
            m.edge = get_node(r);
            m.bid = r.u64();
            uint8_t st = r.u8();
            if (st > 2) throw WireError("bad read status");
            m.status = ReadStatus(st);
            m.at_ms = r.f64();
            if (r.u8()) m.block = get_block(r);
            if (r.u8()) m.proof = get_proof(r);
            m.edge_sig = get_sig(r);
            out = std::move(m);
            break;
        }
        case kGossipMsg: {
            GossipMsg m;
            m.edge = get_node(r);
            m.log_size = r.u64();
            m.timestamp = r.f64();
            m.cloud_sig = get_sig(r);
            out = m;
            break;
        }
        case kDisputeMsg: {
            DisputeMsg m;
            m.accuser = get_node(r);
            uint8_t k = r.u8();
            if (k > 3) throw WireError("bad dispute kind");
            m.kind = DisputeKind(k);
            m.evidence = r.bytes();
            m.accuser_sig = get_sig(r);
            out = std::move(m);
            break;
        }
        case kGetRequest:
            out = GetRequest{r.u64()};
            break;
        case kGetResponse: {
            GetResponse m;
            m.edge = get_node(r);
            m.key = r.u64();
            m.bundle = get_bundle(r);
            m.edge_sig = get_sig(r);
            out = std::move(m);
            break;
        }
        case kMergeRequest: {
            MergeRequest m;
            m.edge = get_node(r);
            m.merge_id = r.u64();
            m.level = r.u32();
            uint32_t n = r.u32();
            for (uint32_t i = 0; i < n; i++) m.l0.push_back(get_l0_item(r));
            n = r.u32();
            for (uint32_t i = 0; i < n; i++) m.lower_pages.push_back(get_page(r));
            if (r.u8()) m.lower_root = get_level_root(r);
            n = r.u32();
            for (uint32_t i = 0; i < n; i++) m.upper_pages.push_back(get_page(r));
            if (r.u8()) m.upper_root = get_level_root(r);
            m.edge_sig = get_sig(r);
            out = std::move(m);
            break;
        }
        case kMergeResponse: {
            MergeResponse m;
            m.edge = get_node(r);
            m.merge_id = r.u64();
            m.level = r.u32();
            uint32_t n = r.u32();
            for (uint32_t i = 0; i < n; i++) m.pages.push_back(get_page(r));
            m.new_root = get_level_root(r);
            m.global = get_global(r);
            m.cloud_sig = get_sig(r);
            out = std::move(m);
            break;
        }
        case kVerdict: {
            Verdict m;
            m.edge = get_node(r);
            uint8_t reason = r.u8();
            if (reason > 5) throw WireError("bad verdict reason");
            m.reason = VerdictReason(reason);
            m.cloud_sig = get_sig(r);
            out = m;
            break;
        }
        case kBlockUpload: {
            BlockUpload m;
            m.block = get_block(r);
            m.edge_sig = get_sig(r);
            out = std::move(m);
            break;
        }
        case kValueResponse: {
            ValueResponse m;
            m.key = r.u64();
            m.found = r.u8() != 0;
            m.value = r.bytes();
            m.cloud_sig = get_sig(r);
            out = std::move(m);
            break;
        }
        default:
            throw WireError("bad message tag");
    }
    r.expect_done();
    return out;
}

const char* kind_name(const WireMessage& msg) {
    static const char* names[] = {
        "add_request",  "add_response",  "block_certify", "block_proof",   "read_request",
        "read_response", "gossip",        "dispute",       "get_request",   "get_response",
        "merge_request", "merge_response", "verdict",       "block_upload",  "value_response"};
    return names[msg.index()];
}

Bytes encode_bundle(const GetProofBundle& b) {
    ByteWriter w;
    put_bundle(w, b);
    return w.take();
}

GetProofBundle decode_bundle(std::span<const uint8_t> data) {
    ByteReader r(data);
    GetProofBundle b = get_bundle(r);
    r.expect_done();
    return b;
}

Bytes encode_block(const Block& b) {
    ByteWriter w;
    put_block(w, b);
    return w.take();
}

Block decode_block(std::span<const uint8_t> data) {
    ByteReader r(data);
    Block b = get_block(r);
    r.expect_done();
    return b;
}

Bytes encode_page(const Page& p) {
    ByteWriter w;
    put_page(w, p);
    return w.take();
}

Digest block_digest(const Block& b) { return hash(encode_block(b)); }

Bytes entry_sign_payload(const Entry& e) {
    ByteWriter w;
    put_entry_body(w, e);
    return tagged_payload("EN", w.buffer());
}

Bytes add_response_sign_payload(const AddResponse& m) {
    ByteWriter w;
    put_add_response_body(w, m);
    return tagged_payload("AR", w.buffer());
}

Bytes block_certify_sign_payload(const BlockCertify& m) {
    ByteWriter w;
    put_block_certify_body(w, m);
    return tagged_payload("BC", w.buffer());
}

Bytes block_proof_sign_payload(const BlockProof& p) {
    ByteWriter w;
    put_node(w, p.edge);
    w.u64(p.bid);
    put_digest(w, p.digest);
    return tagged_payload("BP", w.buffer());
}

Bytes read_response_sign_payload(const ReadResponse& m) {
    ByteWriter w;
    put_read_response_body(w, m);
    return tagged_payload("RR", w.buffer());
}

Bytes gossip_sign_payload(const GossipMsg& m) {
    ByteWriter w;
    put_gossip_body(w, m);
    return tagged_payload("GS", w.buffer());
}

Bytes dispute_sign_payload(const DisputeMsg& m) {
    ByteWriter w;
    put_dispute_body(w, m);
    return tagged_payload("DS", w.buffer());
}

Bytes get_response_sign_payload(const GetResponse& m) {
    ByteWriter w;
    put_get_response_body(w, m);
    return tagged_payload("GQ", w.buffer());
}

Bytes merge_request_sign_payload(const MergeRequest& m) {
    ByteWriter w;
    put_merge_request_body(w, m);
    return tagged_payload("MQ", w.buffer());
}

Bytes merge_response_sign_payload(const MergeResponse& m) {
    ByteWriter w;
    put_merge_response_body(w, m);
    return tagged_payload("MS", w.buffer());
}

Bytes verdict_sign_payload(const Verdict& m) {
    ByteWriter w;
    put_verdict_body(w, m);
    return tagged_payload("VD", w.buffer());
}

Bytes block_upload_sign_payload(const BlockUpload& m) {
    ByteWriter w;
    put_block_upload_body(w, m);
    return tagged_payload("BU", w.buffer());
}

Bytes value_response_sign_payload(const ValueResponse& m) {
    ByteWriter w;
    put_value_response_body(w, m);
    return tagged_payload("VR", w.buffer());
}

Bytes level_root_sign_payload(NodeId edge, uint32_t level, const Digest& root) {
    ByteWriter w;
    put_node(w, edge);
    w.u32(level);
    put_digest(w, root);
    return tagged_payload("LR", w.buffer());
}

Bytes global_root_sign_payload(NodeId edge, const GlobalRoot& g) {
    ByteWriter w;
    put_node(w, edge);
    put_digest(w, g.hash);
    w.f64(g.timestamp);
    w.u64(g.watermark);
    return tagged_payload("GR", w.buffer());
}

Bytes encode_add_promise_evidence(const AddPromiseEvidence& e) {
    ByteWriter w;
    put_add_response_body(w, e.response);
    put_sig(w, e.response.edge_sig);
    put_node(w, e.client);
    w.u64(e.seq);
    w.u8(e.actual ? 1 : 0);
    if (e.actual) put_block(w, *e.actual);
    return w.take();
}

AddPromiseEvidence decode_add_promise_evidence(std::span<const uint8_t> data) {
    ByteReader r(data);
    AddPromiseEvidence e;
    e.response.block = get_block(r);
    e.response.bid = r.u64();
    e.response.edge_sig = get_sig(r);
    e.client = get_node(r);
    e.seq = r.u64();
    if (r.u8()) e.actual = get_block(r);
    r.expect_done();
    return e;
}

Bytes encode_read_response(const ReadResponse& m) {
    ByteWriter w;
    put_read_response_body(w, m);
    put_sig(w, m.edge_sig);
    return w.take();
}

ReadResponse decode_read_response(std::span<const uint8_t> data) {
    ByteReader r(data);
    ReadResponse m;
    m.edge = get_node(r);
    m.bid = r.u64();
    uint8_t st = r.u8();
    if (st > 2) throw WireError("bad read status");
    m.status = ReadStatus(st);
    m.at_ms = r.f64();
    if (r.u8()) m.block = get_block(r);
    if (r.u8()) m.proof = get_proof(r);
    m.edge_sig = get_sig(r);
    r.expect_done();
    return m;
}

Bytes encode_get_response(const GetResponse& m) {
    ByteWriter w;
    put_get_response_body(w, m);
    put_sig(w, m.edge_sig);
    return w.take();
}

GetResponse decode_get_response(std::span<const uint8_t> data) {
    ByteReader r(data);
    GetResponse m;
    m.edge = get_node(r);
    m.key = r.u64();
    m.bundle = get_bundle(r);
    m.edge_sig = get_sig(r);
    r.expect_done();
    return m;
}

}  // namespace wedge
