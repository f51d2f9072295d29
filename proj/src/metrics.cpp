// Copyright 2026 the wedgechain authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#include "wedge/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wedge {

double percentile(std::vector<double> values, double q) {
    if (values.empty()) return std::nan("");
    std::sort(values.begin(), values.end());
    double pos = q * double(values.size() - 1);
    size_t lo = size_t(pos);
    size_t hi = std::min(lo + 1, values.size() - 1);
    double frac = pos - double(lo);
    return values[lo] * (1 - frac) + values[hi] * frac;
}

void Metrics::finalize_blocks() {
    std::map<uint64_t, BlockRow> by_bid;
    for (const auto& op : ops) {
        if (op.kind != OpKindTag::Add && op.kind != OpKindTag::Put) continue;
        if (!op.has_bid) continue;
        auto& row = by_bid[op.bid];
        row.bid = op.bid;
        if (op.phase1_at >= 0) row.p1_at = std::max(row.p1_at, op.phase1_at);
        if (op.phase2_at >= 0)
            row.p2_at = std::max(row.p2_at, op.phase2_at);
        else
            row.p2_at = std::numeric_limits<double>::infinity();  // never completed
        if (op.phase1_at < 0) row.p1_at = std::numeric_limits<double>::infinity();
    }
    blocks.clear();
    blocks.reserve(by_bid.size());
    for (auto& [bid, row] : by_bid) blocks.push_back(row);
}

double Metrics::percentile_p1(double q) const {
    std::vector<double> lat;
    for (const auto& op : ops) {
        if ((op.kind == OpKindTag::Add || op.kind == OpKindTag::Put) && op.phase1_at >= 0)
            lat.push_back(op.phase1_at - op.issued_at);
    }
    return percentile(std::move(lat), q);
}

double Metrics::percentile_p2(double q) const {
    std::vector<double> lat;
    for (const auto& op : ops) {
        if ((op.kind == OpKindTag::Add || op.kind == OpKindTag::Put) && op.phase2_at >= 0)
            lat.push_back(op.phase2_at - op.issued_at);
    }
    return percentile(std::move(lat), q);
}

}  // namespace wedge
