// Copyright 2026 the wedgechain authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "wedge/bytes.hpp"
#include "wedge/crypto.hpp"

// Domain types and their canonical, bit-exact encoding. Every digest and
// signature in the system is computed over these encodings, never over
// in-memory forms. Byte layout is pinned in WIRE.md; fixtures/wire holds
// frozen reference encodings.

namespace wedge {

using BlockKey = uint64_t;
constexpr uint64_t kKeyInfinity = UINT64_MAX;  // "max of infinity" for page ranges

// ---- log entries and blocks ----

struct LogData {
    Bytes payload;
    auto operator<=>(const LogData&) const = default;
};
struct Put {
    uint64_t key = 0;
    Bytes value;
    auto operator<=>(const Put&) const = default;
};
struct NoOp {
    auto operator<=>(const NoOp&) const = default;
};
using EntryOp = std::variant<LogData, Put, NoOp>;

struct Entry {
    NodeId client;
    uint64_t seq = 0;  // per-client monotonic; (client, seq) is the idempotency identity
    EntryOp op;
    Signature client_sig;  // over the entry body, see sign payloads in WIRE.md
    auto operator<=>(const Entry&) const = default;
};

struct Block {
    NodeId edge;
    uint64_t bid = 0;
    std::vector<Entry> entries;
    auto operator<=>(const Block&) const = default;
};

struct BlockProof {
    NodeId edge;
    uint64_t bid = 0;
    Digest digest;
    Signature cloud_sig;
    auto operator<=>(const BlockProof&) const = default;
};

// ---- index pages, roots, proofs ----

struct PageEntry {
    uint64_t key = 0;
    Bytes value;
    uint64_t vbid = 0;   // version: originating block id,
    uint32_t vidx = 0;   // index of the entry within that block
    auto operator<=>(const PageEntry&) const = default;
    std::pair<uint64_t, uint32_t> version() const { return {vbid, vidx}; }
};

struct Page {
    uint32_t level = 0;
    uint64_t page_id = 0;
    uint64_t min_key = 0;
    uint64_t max_key = 0;
    double created = 0;
    uint64_t origin = 0;  // L0 only: the block id the page came from
    std::vector<PageEntry> entries;  // sorted by key (levels >= 1: unique keys)
    auto operator<=>(const Page&) const = default;
};

struct LevelRoot {
    uint32_t level = 0;
    Digest root;
    Signature cloud_sig;  // binds (edge, level, root)
    auto operator<=>(const LevelRoot&) const = default;
};

struct GlobalRoot {
    Digest hash;  // over the concatenated roots of levels 1..n-1 (empty level -> hash of nothing)
    double timestamp = 0;
    uint64_t watermark = 0;  // first L0 bid not yet consumed by any merge
    Signature cloud_sig;     // binds (edge, hash, timestamp, watermark)
    auto operator<=>(const GlobalRoot&) const = default;
};

struct PathElem {
    uint8_t side = 0;  // 0: sibling hashes on the left, 1: on the right
    Digest digest;
    auto operator<=>(const PathElem&) const = default;
};
struct MerklePath {
    std::vector<PathElem> siblings;
    auto operator<=>(const MerklePath&) const = default;
};

// One L0 page as shipped on the wire: the originating block (pages are
// derived from it) plus its certification when the edge already holds one.
struct L0Item {
    Block block;
    std::optional<BlockProof> proof;
    auto operator<=>(const L0Item&) const = default;
};

struct LevelPage {
    uint32_t level = 0;
    Page page;
    MerklePath path;
    auto operator<=>(const LevelPage&) const = default;
};

struct GetProofBundle {
    std::vector<L0Item> l0;          // all L0 pages, ascending origin from the watermark
    std::vector<LevelPage> pages;    // covering/value page per non-empty level, ascending
    std::vector<LevelRoot> roots;    // signed roots of every non-empty level, ascending
    GlobalRoot global;
    auto operator<=>(const GetProofBundle&) const = default;
};

// ---- wire messages ----

struct AddRequest {
    Entry entry;
    auto operator<=>(const AddRequest&) const = default;
};

struct AddResponse {
    Block block;
    uint64_t bid = 0;
    Signature edge_sig;
    auto operator<=>(const AddResponse&) const = default;
};

struct BlockCertify {
    NodeId edge;
    uint64_t bid = 0;
    Digest digest;
    Signature edge_sig;
    auto operator<=>(const BlockCertify&) const = default;
};

struct BlockProofMsg {
    BlockProof proof;
    auto operator<=>(const BlockProofMsg&) const = default;
};

struct ReadRequest {
    uint64_t bid = 0;
    auto operator<=>(const ReadRequest&) const = default;
};

enum class ReadStatus : uint8_t { Unavailable = 0, Phase1 = 1, Phase2 = 2 };

struct ReadResponse {
    NodeId edge;
    uint64_t bid = 0;
    ReadStatus status = ReadStatus::Unavailable;
    double at_ms = 0;  // edge-local response time; makes unavailable answers datable evidence
    std::optional<Block> block;
    std::optional<BlockProof> proof;
    Signature edge_sig;
    auto operator<=>(const ReadResponse&) const = default;
};

struct GossipMsg {
    NodeId edge;
    uint64_t log_size = 0;  // contiguous certified prefix of the edge's log
    double timestamp = 0;
    Signature cloud_sig;
    auto operator<=>(const GossipMsg&) const = default;
};

enum class DisputeKind : uint8_t { AddPromise = 0, ReadContent = 1, Omission = 2, BadBundle = 3 };

struct DisputeMsg {
    NodeId accuser;
    DisputeKind kind = DisputeKind::AddPromise;
    Bytes evidence;  // wire-encoded signed edge statement, layout per kind (WIRE.md)
    Signature accuser_sig;
    auto operator<=>(const DisputeMsg&) const = default;
};

struct GetRequest {
    uint64_t key = 0;
    auto operator<=>(const GetRequest&) const = default;
};

struct GetResponse {
    NodeId edge;
    uint64_t key = 0;
    GetProofBundle bundle;
    Signature edge_sig;
    auto operator<=>(const GetResponse&) const = default;
};

struct MergeRequest {
    NodeId edge;
    uint64_t merge_id = 0;
    uint32_t level = 0;  // the overflowing level being merged into level+1
    // level == 0: blocks + proofs; level >= 1: the level's pages + its signed root.
    std::vector<L0Item> l0;
    std::vector<Page> lower_pages;
    std::optional<LevelRoot> lower_root;
    std::vector<Page> upper_pages;  // all pages of level+1 (may be empty)
    std::optional<LevelRoot> upper_root;
    Signature edge_sig;
    auto operator<=>(const MergeRequest&) const = default;
};

struct MergeResponse {
    NodeId edge;
    uint64_t merge_id = 0;
    uint32_t level = 0;
    std::vector<Page> pages;  // the new contents of level+1
    LevelRoot new_root;
    GlobalRoot global;
    Signature cloud_sig;
    auto operator<=>(const MergeResponse&) const = default;
};

enum class VerdictReason : uint8_t {
    None = 0,
    Equivocation = 1,
    Lied = 2,
    Omission = 3,
    BadMerge = 4,
    InvalidEvidence = 5,
};

struct Verdict {
    NodeId edge;  // the accused (ignored when reason is None/InvalidEvidence)
    VerdictReason reason = VerdictReason::None;
    Signature cloud_sig;
    auto operator<=>(const Verdict&) const = default;
};

// edge_baseline wiring: the block itself travels to the cloud for certification.
struct BlockUpload {
    Block block;
    Signature edge_sig;
    auto operator<=>(const BlockUpload&) const = default;
};

// cloud_only wiring: plain key-value answer from the trusted cloud.
struct ValueResponse {
    uint64_t key = 0;
    bool found = false;
    Bytes value;
    Signature cloud_sig;
    auto operator<=>(const ValueResponse&) const = default;
};

using WireMessage =
    std::variant<AddRequest, AddResponse, BlockCertify, BlockProofMsg, ReadRequest, ReadResponse,
                 GossipMsg, DisputeMsg, GetRequest, GetResponse, MergeRequest, MergeResponse,
                 Verdict, BlockUpload, ValueResponse>;

// ---- canonical encode / decode ----

Bytes encode(const WireMessage& msg);
WireMessage decode(std::span<const uint8_t> data);
const char* kind_name(const WireMessage& msg);

Bytes encode_bundle(const GetProofBundle& b);
GetProofBundle decode_bundle(std::span<const uint8_t> data);

Bytes encode_block(const Block& b);
Block decode_block(std::span<const uint8_t> data);

Bytes encode_page(const Page& p);

// = hash(canonical(block)); covers the edge id, the bid, and every entry.
Digest block_digest(const Block& b);

// ---- signature payloads ----
// Every signature covers a two-byte domain tag plus the SHA-256 of the
// canonical encoding of the message body (everything except the signature).

Bytes entry_sign_payload(const Entry& e);
Bytes add_response_sign_payload(const AddResponse& m);
Bytes block_certify_sign_payload(const BlockCertify& m);
Bytes block_proof_sign_payload(const BlockProof& p);
Bytes read_response_sign_payload(const ReadResponse& m);
Bytes gossip_sign_payload(const GossipMsg& m);
Bytes dispute_sign_payload(const DisputeMsg& m);
Bytes get_response_sign_payload(const GetResponse& m);
Bytes merge_request_sign_payload(const MergeRequest& m);
Bytes merge_response_sign_payload(const MergeResponse& m);
Bytes verdict_sign_payload(const Verdict& m);
Bytes block_upload_sign_payload(const BlockUpload& m);
Bytes value_response_sign_payload(const ValueResponse& m);
Bytes level_root_sign_payload(NodeId edge, uint32_t level, const Digest& root);
Bytes global_root_sign_payload(NodeId edge, const GlobalRoot& g);

// ---- dispute evidence ----

struct AddPromiseEvidence {
    AddResponse response;
    NodeId client;
    uint64_t seq = 0;
    std::optional<Block> actual;  // the certified block, when the client later obtained it
    auto operator<=>(const AddPromiseEvidence&) const = default;
};

Bytes encode_add_promise_evidence(const AddPromiseEvidence& e);
AddPromiseEvidence decode_add_promise_evidence(std::span<const uint8_t> data);

Bytes encode_read_response(const ReadResponse& r);
ReadResponse decode_read_response(std::span<const uint8_t> data);

Bytes encode_get_response(const GetResponse& r);
GetResponse decode_get_response(std::span<const uint8_t> data);

}  // namespace wedge
