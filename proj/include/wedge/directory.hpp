// Copyright 2026 the wedgechain authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <map>
#include <optional>

#include "wedge/crypto.hpp"

namespace wedge {

// Static identity directory: every node knows every public key up front
// (nodes are authenticated; key distribution is out of scope).
struct KeyDirectory {
    std::map<NodeId, PublicKey> keys;

    const PublicKey* find(NodeId id) const {
        auto it = keys.find(id);
        return it == keys.end() ? nullptr : &it->second;
    }
    bool check(NodeId id, std::span<const uint8_t> payload, const Signature& sig) const {
        const PublicKey* pk = find(id);
        return pk && verify(*pk, payload, sig);
    }
};

}  // namespace wedge
