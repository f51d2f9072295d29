// Copyright 2026 the wedgechain authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#include "wedge/merkle.hpp"

#include <stdexcept>

namespace wedge {

namespace {

Digest hash_pair(const Digest& left, const Digest& right) {
    Bytes buf;
    buf.reserve(64);
    buf.insert(buf.end(), left.bytes.begin(), left.bytes.end());
    buf.insert(buf.end(), right.bytes.begin(), right.bytes.end());
    return hash(buf);
}

}  // namespace

Digest merkle_leaf(const Page& page) { return hash(encode_page(page)); }

Digest empty_merkle_root() { return hash(std::span<const uint8_t>{}); }

Digest merkle_root(std::span<const Digest> leaves) {
    if (leaves.empty()) return empty_merkle_root();
    std::vector<Digest> level(leaves.begin(), leaves.end());
    while (level.size() > 1) {
        std::vector<Digest> next;
        next.reserve((level.size() + 1) / 2);
        for (size_t i = 0; i + 1 < level.size(); i += 2) next.push_back(hash_pair(level[i], level[i + 1]));
        if (level.size() % 2 == 1) next.push_back(level.back());
        level = std::move(next);
    }
    return level[0];
}

Digest merkle_root_of_pages(std::span<const Page> pages) {
    std::vector<Digest> leaves;
    leaves.reserve(pages.size());
    for (const auto& p : pages) leaves.push_back(merkle_leaf(p));
    return merkle_root(leaves);
}

MerklePath merkle_path(std::span<const Digest> leaves, size_t index) {
    if (index >= leaves.size()) throw std::out_of_range("merkle_path: index out of range");
    MerklePath path;
    std::vector<Digest> level(leaves.begin(), leaves.end());
    size_t pos = index;
    while (level.size() > 1) {
        if (pos % 2 == 0) {
            if (pos + 1 < level.size()) path.siblings.push_back({1, level[pos + 1]});
            // else: odd promotion, no sibling at this level
        } else {
            path.siblings.push_back({0, level[pos - 1]});
        }
        std::vector<Digest> next;
        next.reserve((level.size() + 1) / 2);
        for (size_t i = 0; i + 1 < level.size(); i += 2) next.push_back(hash_pair(level[i], level[i + 1]));
        if (level.size() % 2 == 1) next.push_back(level.back());
        level = std::move(next);
        pos /= 2;
    }
    return path;
}

bool merkle_verify(const Digest& leaf, const MerklePath& path, const Digest& root) {
    Digest cur = leaf;
    for (const auto& elem : path.siblings) {
        cur = elem.side == 0 ? hash_pair(elem.digest, cur) : hash_pair(cur, elem.digest);
    }
    return cur == root;
}

}  // namespace wedge
