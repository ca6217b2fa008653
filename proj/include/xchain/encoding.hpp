// Copyright (c) 2026 The xchain developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

//
// Canonical binary encoding.
//
// Every value is serialized as a sequence of length-prefixed fields in
// declared field order: u32 big-endian byte length followed by the field
// bytes.  Integers are encoded as u64 big-endian, strings as UTF-8 bytes,
// hashes as their 32 raw bytes, and entity sets as the ascending sorted
// concatenation of u64 big-endian ids in a single field.  The scheme is
// self-delimiting, prefix-free per field, and bit-exact reproducible, which
// is what transaction ids and header hashes are computed over.
//

#pragma once

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

#include "xchain/hash.hpp"

namespace xchain {

/** Thrown by ByteReader when input bytes do not parse. */
struct DecodeError : std::runtime_error {
    explicit DecodeError(const std::string& what) : std::runtime_error(what) {}
};

/** Appends canonical fields to a byte buffer. */
class ByteWriter {
public:
    const Bytes& bytes() const { return m_buf; }
    Bytes take() { return std::move(m_buf); }

    void putRawU8(uint8_t v) { m_buf.push_back(v); }

    void putRawU32(uint32_t v)
    {
        for (int shift = 24; shift >= 0; shift -= 8) {
            m_buf.push_back(static_cast<uint8_t>(v >> shift));
        }
    }

    void putRawU64(uint64_t v)
    {
        for (int shift = 56; shift >= 0; shift -= 8) {
            m_buf.push_back(static_cast<uint8_t>(v >> shift));
        }
    }

    void field(const uint8_t* data, size_t len)
    {
        putRawU32(static_cast<uint32_t>(len));
        m_buf.insert(m_buf.end(), data, data + len);
    }

    void field(const Bytes& b) { field(b.data(), b.size()); }
    void field(std::string_view s) { field(reinterpret_cast<const uint8_t*>(s.data()), s.size()); }
    void field(const Hash256& h) { field(h.data(), h.size()); }

    void fieldU64(uint64_t v)
    {
        putRawU32(8);
        putRawU64(v);
    }

    /** Entity set: one field holding the ascending ids, 8 bytes each. */
    void fieldEntitySet(const std::set<uint64_t>& ids)
    {
        putRawU32(static_cast<uint32_t>(ids.size() * 8));
        for (uint64_t id : ids) putRawU64(id);
    }

private:
    Bytes m_buf;
};

/** Consumes canonical fields from a byte buffer; throws DecodeError on any malformation. */
class ByteReader {
public:
    explicit ByteReader(const Bytes& buf) : m_buf(buf) {}

    bool atEnd() const { return m_pos == m_buf.size(); }

    uint8_t rawU8()
    {
        need(1);
        return m_buf[m_pos++];
    }

    uint32_t rawU32()
    {
        need(4);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v = (v << 8) | m_buf[m_pos++];
        return v;
    }

    uint64_t rawU64()
    {
        need(8);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v = (v << 8) | m_buf[m_pos++];
        return v;
    }

    Bytes field()
    {
        uint32_t len = rawU32();
        need(len);
        Bytes out(m_buf.begin() + static_cast<long>(m_pos), m_buf.begin() + static_cast<long>(m_pos + len));
        m_pos += len;
        return out;
    }

    std::string fieldString()
    {
        Bytes b = field();
        return std::string(b.begin(), b.end());
    }

    uint64_t fieldU64()
    {
        uint32_t len = rawU32();
        if (len != 8) throw DecodeError("fieldU64: expected 8-byte field");
        return rawU64();
    }

    Hash256 fieldHash()
    {
        uint32_t len = rawU32();
        if (len != 32) throw DecodeError("fieldHash: expected 32-byte field");
        need(32);
        Hash256 h{};
        std::copy(m_buf.begin() + static_cast<long>(m_pos), m_buf.begin() + static_cast<long>(m_pos + 32), h.begin());
        m_pos += 32;
        return h;
    }

    std::set<uint64_t> fieldEntitySet()
    {
        uint32_t len = rawU32();
        if (len % 8 != 0) throw DecodeError("fieldEntitySet: length not a multiple of 8");
        need(len);
        std::set<uint64_t> out;
        uint64_t prev = 0;
        bool first = true;
        for (uint32_t i = 0; i < len; i += 8) {
            uint64_t v = rawU64();
            if (!first && v <= prev) throw DecodeError("fieldEntitySet: ids not strictly ascending");
            out.insert(v);
            prev = v;
            first = false;
        }
        return out;
    }

    void expectEnd() const
    {
        if (!atEnd()) throw DecodeError("trailing bytes after value");
    }

private:
    void need(size_t n) const
    {
        if (m_pos + n > m_buf.size()) throw DecodeError("unexpected end of input");
    }

    const Bytes& m_buf;
    size_t m_pos = 0;
};

} // namespace xchain
