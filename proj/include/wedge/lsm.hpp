// Copyright 2026 the wedgechain authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <map>
#include <optional>

#include "wedge/merkle.hpp"
#include "wedge/wire.hpp"

namespace wedge {

// The authenticated LSM index kept at the edge. L0 pages are the put
// entries of sealed blocks (certified individually through block proofs);
// levels >= 1 are range-partitioned, Merklized, and only ever rewritten by
// cloud-certified merges.

struct L0PageRec {
    Page page;    // derived view: the block's put entries, sorted by key
    Block block;  // the originating block; authenticates the page
};

struct MergeInFlight {
    uint64_t merge_id = 0;
    uint32_t level = 0;
    std::vector<uint64_t> l0_origins;  // consumed L0 bids when level == 0
};

struct LsmState {
    uint32_t levels_count = 4;
    std::vector<uint32_t> thresholds;  // pages per level before a merge fires
    std::vector<L0PageRec> l0;         // ascending origin bid
    std::vector<std::vector<Page>> levels;  // index 0 unused; 1..levels_count-1
    std::map<uint32_t, LevelRoot> level_roots;  // present for non-empty merged levels
    GlobalRoot global;
    std::optional<MergeInFlight> merge_in_flight;
};

LsmState make_lsm(uint32_t levels_count, std::vector<uint32_t> thresholds);

// The put entries of a block in key order, versioned (bid, index-in-block).
// LogData entries are excluded; a block without puts yields an empty page.
Page derive_l0_page(const Block& block, double now);

void insert_l0(LsmState& lsm, const Block& block, double now);

GetProofBundle lookup(const LsmState& lsm, uint64_t key,
                      const std::map<uint64_t, BlockProof>& proofs);

enum class GetStatus { Found, Absent, Invalid };

struct VerifiedGet {
    GetStatus status = GetStatus::Invalid;
    Bytes value;
    // Uncertified L0 pages the bundle leaned on; the result is Phase I until
    // their proofs arrive and match these digests.
    std::vector<std::pair<uint64_t, Digest>> pending;
    bool phase1() const { return !pending.empty(); }
};

VerifiedGet verify_get_proof(const GetProofBundle& bundle, uint64_t key,
                             const PublicKey& cloud_pk, NodeId edge, uint32_t levels_count);

// The merge computation run by the cloud: sort every input entry by key,
// keep the most recent version per key, cut into page_size pages, stamp
// ranges (first min 0, last max infinity, adjacent max = next min - 1).
std::vector<Page> merge_pages(std::vector<PageEntry> entries, uint32_t out_level,
                              uint32_t page_size, double now);

// Unsigned skeleton of the next merge request, if some level overflows.
// L0 merges wait until every consumed page holds its block proof.
std::optional<MergeRequest> build_merge_request(LsmState& lsm, NodeId edge, uint64_t merge_id,
                                                const std::map<uint64_t, BlockProof>& proofs);

// Installs a matching response: consumed pages leave, level+1 is replaced,
// roots and the global root are swapped in. Returns false on a stale or
// unmatched response (no state change).
bool apply_merge_response(LsmState& lsm, const MergeResponse& resp);

}  // namespace wedge
