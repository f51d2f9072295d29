// Copyright 2026 the wedgechain authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "generators.hpp"
#include "wedge/wire.hpp"

using namespace wedge;

TEST_CASE("decode(encode(x)) == x for every message variant, 10k cases") {
    Rng rng(0x51b37a3e);
    for (int i = 0; i < 10000; i++) {
        WireMessage msg = testgen::message(rng);
        Bytes b = encode(msg);
        WireMessage back = decode(as_span(b));
        CHECK(back == msg);
        // and the encoding itself is stable
        CHECK(encode(back) == b);
    }
}

TEST_CASE("trailing bytes and truncations are decode errors") {
    Rng rng(7);
    WireMessage msg = testgen::message(rng);
    Bytes b = encode(msg);
    Bytes longer = b;
    longer.push_back(0);
    CHECK_THROWS_AS(decode(as_span(longer)), WireError);
    Bytes shorter(b.begin(), b.end() - 1);
    CHECK_THROWS_AS(decode(as_span(shorter)), WireError);
    CHECK_THROWS_AS(decode({}), WireError);
    Bytes bad_tag{255};
    CHECK_THROWS_AS(decode(as_span(bad_tag)), WireError);
}

TEST_CASE("encoding is injective: distinct blocks encode differently") {
    Rng rng(99);
    Block a = testgen::block(rng);
    while (a.entries.empty() || !std::holds_alternative<Put>(a.entries[0].op))
        a = testgen::block(rng);
    Block b = a;
    std::get<Put>(b.entries[0].op).value.push_back(1);
    CHECK(encode_block(a) != encode_block(b));
    Block c = a;
    c.bid++;
    CHECK(encode_block(a) != encode_block(c));
}

TEST_CASE("block id zero encodes as eight zero octets in its field") {
    Block b;
    b.edge = NodeId{NodeKind::Edge, 0};
    b.bid = 0;
    Bytes enc = encode_block(b);
    // layout: node(1+4) | bid(8) | entry count(4)
    REQUIRE(enc.size() == 17);
    for (int i = 5; i < 13; i++) CHECK(enc[i] == 0);
}

TEST_CASE("block digest definition and coverage") {
    Rng rng(5);
    Block b = testgen::block(rng, 3);
    CHECK(block_digest(b) == hash(encode_block(b)));
    CHECK(block_digest(b) == block_digest(b));

    // bid is covered
    Block other_bid = b;
    other_bid.bid++;
    CHECK(block_digest(b) != block_digest(other_bid));

    // entry payloads are covered
    Block flipped = b;
    if (flipped.entries.empty()) {
        flipped.entries.push_back(testgen::entry(rng));
        CHECK(block_digest(b) != block_digest(flipped));
    } else {
        flipped.entries[0].client_sig.bytes[0] ^= 1;
        CHECK(block_digest(b) != block_digest(flipped));
    }

    // edge id is covered
    Block other_edge = b;
    other_edge.edge.id++;
    CHECK(block_digest(b) != block_digest(other_edge));
}

TEST_CASE("signature payloads are domain-separated") {
    Rng rng(11);
    BlockCertify bc;
    bc.edge = NodeId{NodeKind::Edge, 1};
    bc.bid = 4;
    bc.digest = testgen::digest(rng);
    BlockProof bp;
    bp.edge = bc.edge;
    bp.bid = bc.bid;
    bp.digest = bc.digest;
    // same (edge, bid, digest) body, different roles: payloads must differ
    CHECK(block_certify_sign_payload(bc) != block_proof_sign_payload(bp));
}

TEST_CASE("dispute evidence containers round-trip") {
    Rng rng(13);
    AddPromiseEvidence ev;
    ev.response.block = testgen::block(rng, 3);
    ev.response.bid = ev.response.block.bid;
    ev.response.edge_sig = testgen::signature(rng);
    ev.client = testgen::client(rng);
    ev.seq = 42;
    ev.actual = testgen::block(rng, 2);
    CHECK(decode_add_promise_evidence(as_span(encode_add_promise_evidence(ev))) == ev);
    ev.actual.reset();
    CHECK(decode_add_promise_evidence(as_span(encode_add_promise_evidence(ev))) == ev);

    ReadResponse rr;
    rr.edge = NodeId{NodeKind::Edge, 0};
    rr.bid = 3;
    rr.status = ReadStatus::Unavailable;
    rr.at_ms = 12.5;
    rr.edge_sig = testgen::signature(rng);
    CHECK(decode_read_response(as_span(encode_read_response(rr))) == rr);
}

TEST_CASE("wire fixtures stay frozen") {
    namespace fs = std::filesystem;
    // WEDGE_REGEN_FIXTURES=1 rewrites them after an intentional format change
    bool regen = std::getenv("WEDGE_REGEN_FIXTURES") != nullptr;
    fs::path dir = "fixtures/wire";
    REQUIRE(fs::exists(dir.parent_path()));
    fs::create_directories(dir);

    Rng rng(0xF1D0);
    std::vector<std::pair<std::string, WireMessage>> fixtures;
    fixtures.emplace_back("add_request", AddRequest{testgen::entry(rng)});
    {
        AddResponse m;
        m.block = testgen::block(rng, 2);
        m.bid = m.block.bid;
        m.edge_sig = testgen::signature(rng);
        fixtures.emplace_back("add_response", m);
    }
    {
        BlockCertify m;
        m.edge = NodeId{NodeKind::Edge, 0};
        m.bid = 7;
        m.digest = testgen::digest(rng);
        m.edge_sig = testgen::signature(rng);
        fixtures.emplace_back("block_certify", m);
    }
    fixtures.emplace_back("block_proof", BlockProofMsg{testgen::proof(rng)});
    {
        GossipMsg m;
        m.edge = NodeId{NodeKind::Edge, 0};
        m.log_size = 5;
        m.timestamp = 1250.5;
        m.cloud_sig = testgen::signature(rng);
        fixtures.emplace_back("gossip", m);
    }
    {
        GetResponse m;
        m.edge = NodeId{NodeKind::Edge, 0};
        m.key = 77;
        m.bundle = testgen::bundle(rng);
        m.edge_sig = testgen::signature(rng);
        fixtures.emplace_back("get_response", m);
    }

    for (const auto& [name, msg] : fixtures) {
        fs::path bin = dir / (name + ".bin");
        fs::path hex = dir / (name + ".hex");
        Bytes enc = encode(msg);
        if (regen || !fs::exists(bin)) {
            std::ofstream bf(bin, std::ios::binary);
            bf.write(reinterpret_cast<const char*>(enc.data()), std::streamsize(enc.size()));
            std::ofstream hf(hex);
            hf << to_hex(enc) << "\n";
        }
        std::ifstream bf(bin, std::ios::binary);
        REQUIRE(bf.good());
        Bytes disk((std::istreambuf_iterator<char>(bf)), std::istreambuf_iterator<char>());
        CHECK_MESSAGE(disk == enc, "fixture drift: ", name);
        CHECK(decode(as_span(disk)) == msg);

        std::ifstream hf(hex);
        std::string hexline;
        std::getline(hf, hexline);
        CHECK(hexline == to_hex(enc));
    }
}
