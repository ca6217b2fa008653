// Copyright (c) 2026 The xchain developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <gtest/gtest.h>

#include "xchain/hash.hpp"

using namespace xchain;

// FIPS 180-2 test vectors.
TEST(Hash, KnownVectors)
{
    EXPECT_EQ(toHex(sha256(std::string_view(""))),
              "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    EXPECT_EQ(toHex(sha256(std::string_view("abc"))),
              "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    EXPECT_EQ(toHex(sha256(std::string_view("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq"))),
              "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

TEST(Hash, HexRoundTrip)
{
    Bytes raw = {0x00, 0x01, 0xab, 0xff, 0x7f};
    EXPECT_EQ(toHex(raw), "0001abff7f");
    EXPECT_EQ(fromHex("0001abff7f"), raw);
    EXPECT_EQ(fromHex(""), Bytes{});

    Hash256 h = sha256(std::string_view("abc"));
    EXPECT_EQ(hashFromHex(toHex(h)), h);
}

TEST(Hash, FromHexRejectsMalformed)
{
    EXPECT_THROW(fromHex("abc"), std::invalid_argument);   // odd length
    EXPECT_THROW(fromHex("zz"), std::invalid_argument);    // bad digit
    EXPECT_THROW(hashFromHex("00"), std::invalid_argument); // wrong length
}

TEST(Hash, ZeroHashIsAllZero)
{
    for (uint8_t byte : ZERO_HASH) EXPECT_EQ(byte, 0);
}
