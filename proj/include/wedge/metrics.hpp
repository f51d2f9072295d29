// Copyright 2026 the wedgechain authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <map>
#include <string>
#include <vector>

#include "wedge/simnet.hpp"
#include "wedge/wire.hpp"

namespace wedge {

// One row per client operation. Schemas are frozen in METRICS.md.
enum class OpKindTag : uint8_t { Add = 0, Put = 1, Read = 2, Get = 3 };

enum class OpStatus : uint8_t {
    Pending = 0,
    Phase1 = 1,
    Phase2 = 2,
    Disputed = 3,
    Unavailable = 4,
    Found = 5,
    Absent = 6,
    Stale = 7,
    Invalid = 8,
};

struct OpRow {
    NodeId client;
    uint64_t seq = 0;  // per-kind sequence for reads/gets, entry seq for writes
    OpKindTag kind = OpKindTag::Add;
    uint64_t bid = 0;
    bool has_bid = false;
    double issued_at = 0;
    double phase1_at = -1;
    double phase2_at = -1;
    OpStatus status = OpStatus::Pending;
};

struct VerdictRow {
    double t = 0;
    NodeId edge;
    VerdictReason reason = VerdictReason::None;
    NodeId accuser;  // or the certify sender for cloud-detected equivocation
};

struct MergeAudit {
    uint32_t level = 0;  // merged-from level
    std::vector<PageEntry> input;
    std::vector<Page> output;
};

struct BlockRow {
    uint64_t bid = 0;
    double sealed_at = -1;
    double p1_at = -1;  // all contributing clients phase1-committed
    double p2_at = -1;
};

// Collected during a run by the nodes; owned by the scenario.
struct Metrics {
    std::vector<OpRow> ops;
    std::vector<TraceRow> messages;
    std::vector<VerdictRow> verdicts;
    std::vector<MergeAudit> merge_audits;  // populated when audit_merges is on
    bool audit_merges = false;

    uint64_t dropped_entries = 0;   // invalid/unknown-client adds dropped at the edge
    uint64_t duplicate_entries = 0;
    uint64_t merges_completed = 0;
    uint64_t merge_overdue = 0;  // cloud saw more certified-unmerged pages than the L0 threshold
    uint64_t gossip_sent = 0;
    uint64_t disputes_sent = 0;

    bool truncated = false;
    double end_time = 0;

    // per-block commit timeline, derived from op rows after the run
    std::vector<BlockRow> blocks;
    void finalize_blocks();

    // aggregate helpers (adds + puts only)
    double percentile_p1(double q) const;
    double percentile_p2(double q) const;
};

double percentile(std::vector<double> values, double q);

}  // namespace wedge
