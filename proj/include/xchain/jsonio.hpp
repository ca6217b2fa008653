// Copyright (c) 2026 The xchain developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

//
// JSON codecs for the wire-level artifacts exchanged with the CLI: Merkle
// proofs, inclusion proof bundles, and block headers.  All hashes and byte
// strings are lowercase hex; header timestamps are expressed in seconds.
//

#pragma once

#include <cmath>
#include <string>

#include <json.hpp>

#include "xchain/core.hpp"
#include "xchain/hash.hpp"
#include "xchain/merkle.hpp"

namespace xchain {

inline nlohmann::ordered_json proofToJson(const MerkleProof& p)
{
    nlohmann::ordered_json j;
    j["leafHash"] = toHex(p.leafHash);
    j["index"] = p.index;
    nlohmann::ordered_json siblings = nlohmann::ordered_json::array();
    for (const Hash256& s : p.siblings) siblings.push_back(toHex(s));
    j["siblings"] = std::move(siblings);
    return j;
}

inline MerkleProof proofFromJson(const nlohmann::json& j)
{
    MerkleProof p;
    p.leafHash = hashFromHex(j.at("leafHash").get<std::string>());
    p.index = j.at("index").get<uint64_t>();
    for (const auto& s : j.at("siblings")) {
        p.siblings.push_back(hashFromHex(s.get<std::string>()));
    }
    return p;
}

inline nlohmann::ordered_json receiptToJson(const Receipt& rc)
{
    nlohmann::ordered_json j;
    j["txId"] = toHex(rc.txId);
    j["status"] = rc.status;
    nlohmann::ordered_json events = nlohmann::ordered_json::array();
    for (const Bytes& e : rc.emittedEvents) events.push_back(toHex(e));
    j["events"] = std::move(events);
    return j;
}

inline Receipt receiptFromJson(const nlohmann::json& j)
{
    Receipt rc;
    rc.txId = hashFromHex(j.at("txId").get<std::string>());
    rc.status = j.at("status").get<bool>();
    for (const auto& e : j.at("events")) {
        rc.emittedEvents.push_back(fromHex(e.get<std::string>()));
    }
    return rc;
}

inline nlohmann::ordered_json bundleToJson(const InclusionProofBundle& b)
{
    nlohmann::ordered_json j;
    j["txProof"] = proofToJson(b.txProof);
    j["receiptProof"] = proofToJson(b.receiptProof);
    j["path"] = b.path;
    j["blockHash"] = toHex(b.blockHash);
    j["receipt"] = receiptToJson(b.receipt);
    return j;
}

inline InclusionProofBundle bundleFromJson(const nlohmann::json& j)
{
    InclusionProofBundle b;
    b.txProof = proofFromJson(j.at("txProof"));
    b.receiptProof = proofFromJson(j.at("receiptProof"));
    b.path = j.at("path").get<uint64_t>();
    b.blockHash = hashFromHex(j.at("blockHash").get<std::string>());
    b.receipt = receiptFromJson(j.at("receipt"));
    if (b.txProof.index != b.receiptProof.index || b.path != b.txProof.index) {
        throw DecodeError("bundle: transaction and receipt proofs must share one path");
    }
    return b;
}

inline nlohmann::ordered_json headerToJson(const BlockHeader& h)
{
    nlohmann::ordered_json j;
    j["chain"] = h.chain;
    j["number"] = h.number;
    j["parentHash"] = toHex(h.parentHash);
    j["txRoot"] = toHex(h.txRoot);
    j["receiptRoot"] = toHex(h.receiptRoot);
    j["timestampSeconds"] = h.timestampSeconds();
    j["selfHash"] = toHex(h.selfHash);
    return j;
}

inline BlockHeader headerFromJson(const nlohmann::json& j)
{
    BlockHeader h;
    h.chain = j.at("chain").get<ChainId>();
    h.number = j.at("number").get<uint64_t>();
    h.parentHash = hashFromHex(j.at("parentHash").get<std::string>());
    h.txRoot = hashFromHex(j.at("txRoot").get<std::string>());
    h.receiptRoot = hashFromHex(j.at("receiptRoot").get<std::string>());
    h.timestampMs = static_cast<uint64_t>(
        std::llround(j.at("timestampSeconds").get<double>() * 1000.0));
    h.selfHash = hashFromHex(j.at("selfHash").get<std::string>());
    return h;
}

} // namespace xchain
