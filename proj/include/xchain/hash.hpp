// Copyright (c) 2026 The xchain developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <openssl/evp.h>

namespace xchain {

using Bytes = std::vector<uint8_t>;

/** 256-bit hash value (SHA-256 output). */
using Hash256 = std::array<uint8_t, 32>;

/** All-zero hash, used as the genesis parent link. */
inline constexpr Hash256 ZERO_HASH{};

/** One-shot SHA-256 over a raw buffer. */
inline Hash256 sha256(const uint8_t* data, size_t len)
{
    Hash256 out{};
    unsigned int outLen = 0;
    if (EVP_Digest(data, len, out.data(), &outLen, EVP_sha256(), nullptr) != 1 || outLen != out.size()) {
        throw std::runtime_error("sha256: digest computation failed");
    }
    return out;
}

inline Hash256 sha256(const Bytes& data)
{
    return sha256(data.data(), data.size());
}

inline Hash256 sha256(std::string_view data)
{
    return sha256(reinterpret_cast<const uint8_t*>(data.data()), data.size());
}

/** Lowercase hex encoding of an arbitrary byte buffer. */
inline std::string toHex(const uint8_t* data, size_t len)
{
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (size_t i = 0; i < len; ++i) {
        out.push_back(digits[data[i] >> 4]);
        out.push_back(digits[data[i] & 0x0f]);
    }
    return out;
}

inline std::string toHex(const Hash256& h) { return toHex(h.data(), h.size()); }
inline std::string toHex(const Bytes& b) { return toHex(b.data(), b.size()); }

inline int hexNibble(char c)
{
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

/** Decode a hex string; throws std::invalid_argument on malformed input. */
inline Bytes fromHex(std::string_view hex)
{
    if (hex.size() % 2 != 0) {
        throw std::invalid_argument("fromHex: odd-length hex string");
    }
    Bytes out;
    out.reserve(hex.size() / 2);
    for (size_t i = 0; i < hex.size(); i += 2) {
        int hi = hexNibble(hex[i]);
        int lo = hexNibble(hex[i + 1]);
        if (hi < 0 || lo < 0) {
            throw std::invalid_argument("fromHex: invalid hex digit");
        }
        out.push_back(static_cast<uint8_t>((hi << 4) | lo));
    }
    return out;
}

/** Decode a 64-char hex string into a Hash256; throws on malformed input. */
inline Hash256 hashFromHex(std::string_view hex)
{
    if (hex.size() != 64) {
        throw std::invalid_argument("hashFromHex: expected 64 hex chars");
    }
    Bytes raw = fromHex(hex);
    Hash256 out{};
    std::memcpy(out.data(), raw.data(), out.size());
    return out;
}

} // namespace xchain
