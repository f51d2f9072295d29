// Copyright 2026 the wedgechain authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#include <doctest.h>

#include "generators.hpp"
#include "wedge/merkle.hpp"

using namespace wedge;

namespace {

std::vector<Digest> random_leaves(Rng& rng, size_t n) {
    std::vector<Digest> leaves;
    for (size_t i = 0; i < n; i++) leaves.push_back(testgen::digest(rng));
    return leaves;
}

Digest pair_hash(const Digest& l, const Digest& r) {
    Bytes b;
    b.insert(b.end(), l.bytes.begin(), l.bytes.end());
    b.insert(b.end(), r.bytes.begin(), r.bytes.end());
    return hash(b);
}

}  // namespace

TEST_CASE("single leaf is the root; two leaves hash together; empty is hash(empty)") {
    Rng rng(1);
    auto leaves = random_leaves(rng, 2);
    CHECK(merkle_root({leaves.data(), 1}) == leaves[0]);
    CHECK(merkle_root(leaves) == pair_hash(leaves[0], leaves[1]));
    CHECK(merkle_root({}) == hash(std::span<const uint8_t>{}));
    CHECK(empty_merkle_root() == hash(std::span<const uint8_t>{}));
}

TEST_CASE("odd promotion: three leaves") {
    Rng rng(2);
    auto leaves = random_leaves(rng, 3);
    Digest expect = pair_hash(pair_hash(leaves[0], leaves[1]), leaves[2]);
    CHECK(merkle_root(leaves) == expect);
}

TEST_CASE("paths verify for every index across sizes, including odd promotion") {
    Rng rng(3);
    for (size_t n = 1; n <= 33; n++) {
        auto leaves = random_leaves(rng, n);
        Digest root = merkle_root(leaves);
        for (size_t i = 0; i < n; i++) {
            MerklePath path = merkle_path(leaves, i);
            CHECK(merkle_verify(leaves[i], path, root));
            // wrong leaf fails
            Digest other = leaves[(i + 1) % n];
            if (n > 1) CHECK_FALSE(merkle_verify(other, path, root));
        }
    }
}

TEST_CASE("tampered sibling or root fails verification") {
    Rng rng(4);
    auto leaves = random_leaves(rng, 5);
    Digest root = merkle_root(leaves);
    MerklePath path = merkle_path(leaves, 2);
    REQUIRE(!path.siblings.empty());
    MerklePath bad = path;
    bad.siblings[0].digest.bytes[7] ^= 1;
    CHECK_FALSE(merkle_verify(leaves[2], bad, root));
    MerklePath flipped = path;
    flipped.siblings[0].side ^= 1;
    CHECK_FALSE(merkle_verify(leaves[2], flipped, root));
    Digest bad_root = root;
    bad_root.bytes[0] ^= 1;
    CHECK_FALSE(merkle_verify(leaves[2], path, bad_root));
}

TEST_CASE("out-of-range path index throws") {
    Rng rng(5);
    auto leaves = random_leaves(rng, 4);
    CHECK_THROWS_AS(merkle_path(leaves, 4), std::out_of_range);
}

TEST_CASE("page leaves key the tree: any page field change moves the root") {
    Rng rng(6);
    std::vector<Page> pages;
    for (int i = 0; i < 4; i++) pages.push_back(testgen::page(rng));
    Digest root = merkle_root_of_pages(pages);
    auto mutated = pages;
    mutated[1].max_key ^= 1;
    CHECK(merkle_root_of_pages(mutated) != root);
    mutated = pages;
    mutated[2].created += 1.0;
    CHECK(merkle_root_of_pages(mutated) != root);
}
