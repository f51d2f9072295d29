// Copyright 2026 the wedgechain authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wedge {

using Bytes = std::vector<uint8_t>;

struct WireError : std::runtime_error {
    explicit WireError(const std::string& what) : std::runtime_error(what) {}
};

std::string to_hex(std::span<const uint8_t> data);
Bytes from_hex(std::string_view hex);

// Canonical encoding primitives: big-endian fixed-width integers,
// u32 length prefixes for variable-length fields. See WIRE.md.
class ByteWriter {
  public:
    void u8(uint8_t v) { out_.push_back(v); }
    void u32(uint32_t v) {
        out_.push_back(uint8_t(v >> 24));
        out_.push_back(uint8_t(v >> 16));
        out_.push_back(uint8_t(v >> 8));
        out_.push_back(uint8_t(v));
    }
    void u64(uint64_t v) {
        u32(uint32_t(v >> 32));
        u32(uint32_t(v));
    }
    // IEEE-754 bit pattern, big-endian: exact roundtrip for timestamps.
    void f64(double v) { u64(std::bit_cast<uint64_t>(v)); }
    void raw(std::span<const uint8_t> data) { out_.insert(out_.end(), data.begin(), data.end()); }
    void bytes(std::span<const uint8_t> data) {
        if (data.size() > UINT32_MAX) throw WireError("field too long");
        u32(uint32_t(data.size()));
        raw(data);
    }
    Bytes take() { return std::move(out_); }
    const Bytes& buffer() const { return out_; }
    size_t size() const { return out_.size(); }

  private:
    Bytes out_;
};

class ByteReader {
  public:
    explicit ByteReader(std::span<const uint8_t> data) : data_(data) {}

    uint8_t u8() { return *next(1); }
    uint32_t u32() {
        const uint8_t* p = next(4);
        return (uint32_t(p[0]) << 24) | (uint32_t(p[1]) << 16) | (uint32_t(p[2]) << 8) | uint32_t(p[3]);
    }
    uint64_t u64() {
        uint64_t hi = u32();
        return (hi << 32) | u32();
    }
    double f64() { return std::bit_cast<double>(u64()); }
    std::span<const uint8_t> raw(size_t n) { return {next(n), n}; }
    Bytes bytes() {
        uint32_t n = u32();
        auto s = raw(n);
        return Bytes(s.begin(), s.end());
    }
    size_t remaining() const { return data_.size() - pos_; }
    bool done() const { return pos_ == data_.size(); }
    // Decoders must consume their input exactly; trailing bytes are an error.
    void expect_done() const {
        if (!done()) throw WireError("trailing bytes after decode");
    }

  private:
    const uint8_t* next(size_t n) {
        if (data_.size() - pos_ < n) throw WireError("unexpected end of input");
        const uint8_t* p = data_.data() + pos_;
        pos_ += n;
        return p;
    }
    std::span<const uint8_t> data_;
    size_t pos_ = 0;
};

inline std::span<const uint8_t> as_span(const Bytes& b) { return {b.data(), b.size()}; }
inline std::span<const uint8_t> as_span(std::string_view s) {
    return {reinterpret_cast<const uint8_t*>(s.data()), s.size()};
}

}  // namespace wedge
