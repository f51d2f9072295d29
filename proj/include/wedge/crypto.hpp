// Copyright 2026 the wedgechain authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>

#include "wedge/bytes.hpp"

namespace wedge {

// SHA-256 digests and deterministic Ed25519 signatures, backed by libsodium.
// All operations are pure; callable from any thread.

struct Digest {
    std::array<uint8_t, 32> bytes{};
    auto operator<=>(const Digest&) const = default;
    std::span<const uint8_t> span() const { return {bytes.data(), bytes.size()}; }
    std::string hex() const { return to_hex(span()); }
};

struct Signature {
    std::array<uint8_t, 64> bytes{};
    auto operator<=>(const Signature&) const = default;
    std::span<const uint8_t> span() const { return {bytes.data(), bytes.size()}; }
};

struct PublicKey {
    std::array<uint8_t, 32> bytes{};
    auto operator<=>(const PublicKey&) const = default;
    std::span<const uint8_t> span() const { return {bytes.data(), bytes.size()}; }
};

struct SecretKey {
    std::array<uint8_t, 64> bytes{};  // libsodium layout: seed || public key
    auto operator<=>(const SecretKey&) const = default;
};

enum class NodeKind : uint8_t { Client = 0, Edge = 1, Cloud = 2 };

struct NodeId {
    NodeKind kind = NodeKind::Client;
    uint32_t id = 0;
    auto operator<=>(const NodeId&) const = default;
    std::string str() const;
};

struct KeyPair {
    PublicKey public_key;
    SecretKey secret_key;
    NodeId owner;
};

Digest hash(std::span<const uint8_t> data);
Digest hash(const Bytes& data);

// Deterministic from seed so scenarios are reproducible.
KeyPair keygen(const std::array<uint8_t, 32>& seed, NodeId owner);

Signature sign(const SecretKey& secret, std::span<const uint8_t> message);
bool verify(const PublicKey& pub, std::span<const uint8_t> message, const Signature& sig);

// sign() records its own (pk, msg, sig) triples in a process-wide memo;
// verify() short-circuits on a hit and falls back to real Ed25519
// verification for anything it has not produced itself. Results are
// identical either way (scheme completeness is property-tested); only
// wall time changes. Tests may clear the memo to force full verification.
void clear_verify_memo();

}  // namespace wedge
