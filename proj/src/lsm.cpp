// Copyright 2026 the wedgechain authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#include "wedge/lsm.hpp"

#include <algorithm>
#include <set>

namespace wedge {

namespace {

std::vector<Digest> level_leaves(const std::vector<Page>& pages) {
    std::vector<Digest> leaves;
    leaves.reserve(pages.size());
    for (const auto& p : pages) leaves.push_back(merkle_leaf(p));
    return leaves;
}

// Index of the page whose [min, max] contains key; ranges partition [0, inf].
std::optional<size_t> covering_index(const std::vector<Page>& pages, uint64_t key) {
    for (size_t i = 0; i < pages.size(); i++) {
        if (pages[i].min_key <= key && key <= pages[i].max_key) return i;
    }
    return std::nullopt;
}

const PageEntry* find_in_page(const Page& page, uint64_t key) {
    // Entries are key-sorted; L0 pages may hold several versions of a key,
    // in which case the latest one wins.
    const PageEntry* best = nullptr;
    for (const auto& e : page.entries) {
        if (e.key != key) continue;
        if (!best || e.version() > best->version()) best = &e;
    }
    return best;
}

}  // namespace

LsmState make_lsm(uint32_t levels_count, std::vector<uint32_t> thresholds) {
    LsmState lsm;
    lsm.levels_count = levels_count;
    lsm.thresholds = std::move(thresholds);
    lsm.levels.resize(levels_count);
    return lsm;
}

Page derive_l0_page(const Block& block, double now) {
    Page p;
    p.level = 0;
    p.page_id = block.bid;
    p.origin = block.bid;
    p.created = now;
    for (uint32_t i = 0; i < block.entries.size(); i++) {
        if (const auto* put = std::get_if<Put>(&block.entries[i].op)) {
            PageEntry e;
            e.key = put->key;
            e.value = put->value;
            e.vbid = block.bid;
            e.vidx = i;
            p.entries.push_back(std::move(e));
        }
    }
    std::stable_sort(p.entries.begin(), p.entries.end(),
                     [](const PageEntry& a, const PageEntry& b) { return a.key < b.key; });
    if (!p.entries.empty()) {
        p.min_key = p.entries.front().key;
        p.max_key = p.entries.back().key;
    }
    return p;
}

void insert_l0(LsmState& lsm, const Block& block, double now) {
    lsm.l0.push_back(L0PageRec{derive_l0_page(block, now), block});
}

GetProofBundle lookup(const LsmState& lsm, uint64_t key,
                      const std::map<uint64_t, BlockProof>& proofs) {
    GetProofBundle bundle;
    bundle.global = lsm.global;
    for (const auto& rec : lsm.l0) {
        L0Item item;
        item.block = rec.block;
        if (auto it = proofs.find(rec.block.bid); it != proofs.end()) item.proof = it->second;
        bundle.l0.push_back(std::move(item));
    }
    for (const auto& [level, root] : lsm.level_roots) bundle.roots.push_back(root);

    bool found_l0 = false;
    for (const auto& rec : lsm.l0) {
        if (find_in_page(rec.page, key)) found_l0 = true;
    }
    if (found_l0) return bundle;  // deeper levels only hold older versions

    for (uint32_t level = 1; level < lsm.levels_count; level++) {
        const auto& pages = lsm.levels[level];
        if (pages.empty()) continue;
        auto idx = covering_index(pages, key);
        if (!idx) continue;  // cannot happen for a well-formed level
        LevelPage lp;
        lp.level = level;
        lp.page = pages[*idx];
        lp.path = merkle_path(level_leaves(pages), *idx);
        bool has_key = find_in_page(lp.page, key) != nullptr;
        bundle.pages.push_back(std::move(lp));
        if (has_key) break;  // the value level; nothing deeper is needed
    }
    return bundle;
}

VerifiedGet verify_get_proof(const GetProofBundle& bundle, uint64_t key,
                             const PublicKey& cloud_pk, NodeId edge, uint32_t levels_count) {
    VerifiedGet out;
    out.status = GetStatus::Invalid;

    // (a) every L0 page authenticates against its block proof, or is pending
    for (const auto& item : bundle.l0) {
        if (item.block.edge != edge) return out;
        Digest d = block_digest(item.block);
        if (item.proof) {
            const BlockProof& pr = *item.proof;
            if (pr.edge != edge || pr.bid != item.block.bid || pr.digest != d) return out;
            if (!verify(cloud_pk, as_span(block_proof_sign_payload(pr)), pr.cloud_sig)) return out;
        } else {
            out.pending.emplace_back(item.block.bid, d);
        }
    }

    // (b) L0 origins run contiguously from the signed watermark
    for (size_t i = 0; i < bundle.l0.size(); i++) {
        if (bundle.l0[i].block.bid != bundle.global.watermark + i) return out;
    }

    // (d) the claimed set of non-empty levels must reproduce the signed global hash
    std::map<uint32_t, const LevelRoot*> roots;
    uint32_t last_level = 0;
    for (const auto& lr : bundle.roots) {
        if (lr.level < 1 || lr.level >= levels_count) return out;
        if (!roots.empty() && lr.level <= last_level) return out;
        last_level = lr.level;
        if (!verify(cloud_pk, as_span(level_root_sign_payload(edge, lr.level, lr.root)), lr.cloud_sig))
            return out;
        roots[lr.level] = &lr;
    }
    Bytes concat;
    concat.reserve(32 * (levels_count - 1));
    Digest empty_root = empty_merkle_root();
    for (uint32_t level = 1; level < levels_count; level++) {
        const Digest& d = roots.contains(level) ? roots[level]->root : empty_root;
        concat.insert(concat.end(), d.bytes.begin(), d.bytes.end());
    }
    if (hash(concat) != bundle.global.hash) return out;
    if (!verify(cloud_pk, as_span(global_root_sign_payload(edge, bundle.global)),
                bundle.global.cloud_sig))
        return out;

    // (c) every included page proves membership in its level's signed root
    uint32_t prev_page_level = 0;
    std::map<uint32_t, const Page*> page_at;
    for (const auto& lp : bundle.pages) {
        if (lp.level < 1 || lp.level >= levels_count) return out;
        if (lp.level <= prev_page_level) return out;
        prev_page_level = lp.level;
        if (lp.page.level != lp.level) return out;
        auto it = roots.find(lp.level);
        if (it == roots.end()) return out;  // page from a level claimed empty
        if (!merkle_verify(merkle_leaf(lp.page), lp.path, it->second->root)) return out;
        page_at[lp.level] = &lp.page;
    }

    // value derivation + (e) range/coverage discipline
    std::optional<std::pair<uint64_t, uint32_t>> best_version;
    for (const auto& item : bundle.l0) {
        Page p = derive_l0_page(item.block, 0);
        if (const auto* e = find_in_page(p, key)) {
            if (!best_version || e->version() > *best_version) {
                best_version = e->version();
                out.value = e->value;
            }
        }
    }
    bool value_in_l0 = best_version.has_value();

    if (!value_in_l0) {
        // walk non-empty levels top down; each must cover the key until a hit
        bool found = false;
        for (uint32_t level = 1; level < levels_count && !found; level++) {
            if (!roots.contains(level)) continue;  // provably empty level
            auto it = page_at.find(level);
            if (it == page_at.end()) return out;  // coverage gap
            const Page& page = *it->second;
            if (!(page.min_key <= key && key <= page.max_key)) return out;
            if (const auto* e = find_in_page(page, key)) {
                out.value = e->value;
                best_version = e->version();
                found = true;
            }
        }
        if (found) {
            // (f) nothing anywhere in the bundle may carry a newer version
            for (const auto& lp : bundle.pages) {
                if (const auto* e = find_in_page(lp.page, key)) {
                    if (e->version() > *best_version) return out;
                }
            }
            out.status = GetStatus::Found;
        } else {
            out.status = GetStatus::Absent;
        }
    } else {
        // (f) included level pages must not outrank the L0 hit
        for (const auto& lp : bundle.pages) {
            if (const auto* e = find_in_page(lp.page, key)) {
                if (e->version() > *best_version) return out;
            }
        }
        out.status = GetStatus::Found;
    }
    return out;
}

std::vector<Page> merge_pages(std::vector<PageEntry> entries, uint32_t out_level,
                              uint32_t page_size, double now) {
    std::stable_sort(entries.begin(), entries.end(), [](const PageEntry& a, const PageEntry& b) {
        return a.key != b.key ? a.key < b.key : a.version() < b.version();
    });
    std::vector<PageEntry> deduped;
    deduped.reserve(entries.size());
    for (auto& e : entries) {
        if (!deduped.empty() && deduped.back().key == e.key) {
            deduped.back() = std::move(e);  // later version of the same key
        } else {
            deduped.push_back(std::move(e));
        }
    }

    std::vector<Page> pages;
    for (size_t start = 0; start < deduped.size(); start += page_size) {
        size_t end = std::min(start + size_t(page_size), deduped.size());
        Page p;
        p.level = out_level;
        p.page_id = pages.size();
        p.created = now;
        p.entries.assign(deduped.begin() + start, deduped.begin() + end);
        pages.push_back(std::move(p));
    }
    for (size_t i = 0; i < pages.size(); i++) {
        pages[i].min_key = i == 0 ? 0 : pages[i].entries.front().key;
        pages[i].max_key =
            i + 1 == pages.size() ? kKeyInfinity : pages[i + 1].entries.front().key - 1;
    }
    return pages;
}

std::optional<MergeRequest> build_merge_request(LsmState& lsm, NodeId edge, uint64_t merge_id,
                                                const std::map<uint64_t, BlockProof>& proofs) {
    if (lsm.merge_in_flight) return std::nullopt;
    // the last level is a sink; it never merges out
    for (uint32_t level = 0; level + 1 < lsm.levels_count; level++) {
        size_t count = level == 0 ? lsm.l0.size() : lsm.levels[level].size();
        if (count <= lsm.thresholds[level]) continue;

        MergeRequest req;
        req.edge = edge;
        req.merge_id = merge_id;
        req.level = level;
        MergeInFlight inflight;
        inflight.merge_id = merge_id;
        inflight.level = level;
        if (level == 0) {
            // only certified pages can carry their proofs into the request;
            // the uncertified tail stays behind, like pages sealed mid-merge
            size_t certified = 0;
            while (certified < lsm.l0.size() &&
                   proofs.contains(lsm.l0[certified].block.bid))
                certified++;
            if (certified <= lsm.thresholds[0]) continue;  // not enough ready yet
            for (size_t i = 0; i < certified; i++) {
                const auto& rec = lsm.l0[i];
                req.l0.push_back(L0Item{rec.block, proofs.at(rec.block.bid)});
                inflight.l0_origins.push_back(rec.block.bid);
            }
        } else {
            req.lower_pages = lsm.levels[level];
            req.lower_root = lsm.level_roots.at(level);
        }
        req.upper_pages = lsm.levels[level + 1];
        if (auto it = lsm.level_roots.find(level + 1); it != lsm.level_roots.end())
            req.upper_root = it->second;
        lsm.merge_in_flight = std::move(inflight);
        return req;
    }
    return std::nullopt;
}

bool apply_merge_response(LsmState& lsm, const MergeResponse& resp) {
    if (!lsm.merge_in_flight || lsm.merge_in_flight->merge_id != resp.merge_id) return false;
    const MergeInFlight& fl = *lsm.merge_in_flight;
    if (fl.level != resp.level) return false;

    if (fl.level == 0) {
        // blocks sealed mid-merge stay; only the consumed prefix leaves
        std::set<uint64_t> consumed(fl.l0_origins.begin(), fl.l0_origins.end());
        std::erase_if(lsm.l0, [&](const L0PageRec& rec) { return consumed.contains(rec.block.bid); });
    } else {
        lsm.levels[fl.level].clear();
        lsm.level_roots.erase(fl.level);
    }
    lsm.levels[fl.level + 1] = resp.pages;
    if (resp.pages.empty()) {
        lsm.level_roots.erase(fl.level + 1);
    } else {
        lsm.level_roots[fl.level + 1] = resp.new_root;
    }
    lsm.global = resp.global;
    lsm.merge_in_flight.reset();
    return true;
}

}  // namespace wedge
