// Copyright 2026 the wedgechain authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#include "wedge/crypto.hpp"

#include <sodium.h>

#include <mutex>
#include <shared_mutex>
#include <unordered_set>

namespace wedge {

namespace {

void ensure_sodium() {
    static const int rc = sodium_init();
    if (rc < 0) throw std::runtime_error("sodium_init failed");
}

// Memo of triples known valid because our own sign() produced them.
// Keyed by a truncated hash of (pk || sig || message); a spurious hit
// would require a 64-bit collision against a non-adversarial key.
struct VerifyMemo {
    std::shared_mutex mu;
    std::unordered_set<uint64_t> known;
};

VerifyMemo& memo() {
    static VerifyMemo m;
    return m;
}

uint64_t memo_key(const PublicKey& pk, std::span<const uint8_t> msg, const Signature& sig) {
    crypto_hash_sha256_state st;
    crypto_hash_sha256_init(&st);
    crypto_hash_sha256_update(&st, pk.bytes.data(), pk.bytes.size());
    crypto_hash_sha256_update(&st, sig.bytes.data(), sig.bytes.size());
    crypto_hash_sha256_update(&st, msg.data(), msg.size());
    uint8_t out[32];
    crypto_hash_sha256_final(&st, out);
    uint64_t k = 0;
    for (int i = 0; i < 8; i++) k = (k << 8) | out[i];
    return k;
}

}  // namespace

std::string to_hex(std::span<const uint8_t> data) {
    static const char* digits = "0123456789abcdef";
    std::string s;
    s.reserve(data.size() * 2);
    for (uint8_t b : data) {
        s.push_back(digits[b >> 4]);
        s.push_back(digits[b & 0xf]);
    }
    return s;
}

Bytes from_hex(std::string_view hex) {
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    if (hex.size() % 2 != 0) throw WireError("odd hex length");
    Bytes out;
    out.reserve(hex.size() / 2);
    for (size_t i = 0; i < hex.size(); i += 2) {
        int hi = nibble(hex[i]), lo = nibble(hex[i + 1]);
        if (hi < 0 || lo < 0) throw WireError("bad hex digit");
        out.push_back(uint8_t(hi << 4 | lo));
    }
    return out;
}

std::string NodeId::str() const {
    const char prefix = kind == NodeKind::Client ? 'c' : kind == NodeKind::Edge ? 'e' : 'L';
    return prefix + std::to_string(id);
}

Digest hash(std::span<const uint8_t> data) {
    ensure_sodium();
    Digest d;
    crypto_hash_sha256(d.bytes.data(), data.data(), data.size());
    return d;
}

Digest hash(const Bytes& data) { return hash(std::span<const uint8_t>(data.data(), data.size())); }

KeyPair keygen(const std::array<uint8_t, 32>& seed, NodeId owner) {
    ensure_sodium();
    KeyPair kp;
    kp.owner = owner;
    crypto_sign_seed_keypair(kp.public_key.bytes.data(), kp.secret_key.bytes.data(), seed.data());
    return kp;
}

Signature sign(const SecretKey& secret, std::span<const uint8_t> message) {
    ensure_sodium();
    Signature sig;
    crypto_sign_detached(sig.bytes.data(), nullptr, message.data(), message.size(),
                         secret.bytes.data());
    PublicKey pk;  // libsodium secret keys carry the public half
    std::copy(secret.bytes.begin() + 32, secret.bytes.end(), pk.bytes.begin());
    uint64_t k = memo_key(pk, message, sig);
    auto& m = memo();
    std::unique_lock lock(m.mu);
    m.known.insert(k);
    return sig;
}

bool verify(const PublicKey& pub, std::span<const uint8_t> message, const Signature& sig) {
    ensure_sodium();
    uint64_t k = memo_key(pub, message, sig);
    auto& m = memo();
    {
        std::shared_lock lock(m.mu);
        if (m.known.contains(k)) return true;
    }
    bool ok = crypto_sign_verify_detached(sig.bytes.data(), message.data(), message.size(),
                                          pub.bytes.data()) == 0;
    if (ok) {
        std::unique_lock lock(m.mu);
        m.known.insert(k);
    }
    return ok;
}

void clear_verify_memo() {
    auto& m = memo();
    std::unique_lock lock(m.mu);
    m.known.clear();
}

}  // namespace wedge
