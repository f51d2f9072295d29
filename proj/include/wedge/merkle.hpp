// Copyright 2026 the wedgechain authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <span>
#include <vector>

#include "wedge/wire.hpp"

namespace wedge {

// Binary Merkle tree over page hashes. Pairs are hashed left||right; an odd
// node at any level is promoted unchanged. An empty leaf set hashes to
// hash(empty input), the sentinel an empty level contributes to the global root.

Digest merkle_leaf(const Page& page);
Digest merkle_root(std::span<const Digest> leaves);
Digest merkle_root_of_pages(std::span<const Page> pages);

// index must be < leaves.size(); promotion levels contribute no path element.
MerklePath merkle_path(std::span<const Digest> leaves, size_t index);
bool merkle_verify(const Digest& leaf, const MerklePath& path, const Digest& root);

Digest empty_merkle_root();

}  // namespace wedge
