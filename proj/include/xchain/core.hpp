// Copyright (c) 2026 The xchain developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

//
// Core domain model shared by every module: chains, users, asset entities,
// transactions, receipts, blocks, and the accessor functions contracts use
// to reason about foreign transactions.
//
// All values here are immutable after construction (no interior mutation),
// so they are safe to share freely.  Authorship is simulated: a transaction
// carries the signer's UserId and the simulation only lets an agent author
// transactions under its own id; real signature schemes are intentionally
// out of scope.
//

#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "xchain/encoding.hpp"
#include "xchain/hash.hpp"

namespace xchain {

/** Identifier of one blockchain in the ecosystem registry. */
using ChainId = uint32_t;

/** Opaque identifier of an off-chain user. */
using UserId = std::string;

/** Identifier of one smallest indivisible asset entity; globally unique. */
using EntityId = uint64_t;

/** Ordered entity set (the X / Y sets of a transfer). */
using EntitySet = std::set<EntityId>;

/** Address of a smart contract: host chain plus opaque address string. */
struct ContractAddress {
    ChainId chain = 0;
    std::string addr;

    auto operator<=>(const ContractAddress&) const = default;
};

/** First byte of every transaction payload, selecting the invoked method. */
enum class MethodTag : uint8_t {
    Burn = 0x01,
    Claim = 0x02,
    Confirm = 0x03,
    RelayHeader = 0x04,
};

// ============================================================================
// Transaction
// ============================================================================

struct Transaction {
    Hash256 id{};           // hash of (signer, nonce, target, payload)
    UserId signer;          // authenticated author
    uint64_t nonce = 0;     // strictly increasing per signer
    ContractAddress target; // invoked contract
    Bytes payload;          // method tag + ordered parameter tuple

    bool operator==(const Transaction&) const = default;
};

/** Canonical bytes the transaction id is computed over (all fields but id). */
inline Bytes txIdPreimage(const Transaction& tx)
{
    ByteWriter w;
    w.field(tx.signer);
    w.fieldU64(tx.nonce);
    w.fieldU64(tx.target.chain);
    w.field(tx.target.addr);
    w.field(tx.payload);
    return w.take();
}

/** Builds a transaction, deriving its id from the canonical preimage. */
inline Transaction makeTransaction(UserId signer, uint64_t nonce, ContractAddress target, Bytes payload)
{
    Transaction tx;
    tx.signer = std::move(signer);
    tx.nonce = nonce;
    tx.target = std::move(target);
    tx.payload = std::move(payload);
    tx.id = sha256(txIdPreimage(tx));
    return tx;
}

/** Full canonical encoding (id included); Merkle leaves hash these bytes. */
inline Bytes encodeTransaction(const Transaction& tx)
{
    ByteWriter w;
    w.field(tx.id);
    w.field(tx.signer);
    w.fieldU64(tx.nonce);
    w.fieldU64(tx.target.chain);
    w.field(tx.target.addr);
    w.field(tx.payload);
    return w.take();
}

inline Transaction decodeTransaction(ByteReader& r)
{
    Transaction tx;
    tx.id = r.fieldHash();
    tx.signer = r.fieldString();
    tx.nonce = r.fieldU64();
    tx.target.chain = static_cast<ChainId>(r.fieldU64());
    tx.target.addr = r.fieldString();
    tx.payload = r.field();
    return tx;
}

inline Transaction decodeTransaction(const Bytes& bytes)
{
    ByteReader r(bytes);
    Transaction tx = decodeTransaction(r);
    r.expectEnd();
    return tx;
}

// ============================================================================
// Receipt
// ============================================================================

struct Receipt {
    Hash256 txId{};                  // transaction this receipt belongs to
    bool status = false;             // true iff execution completed without error
    std::vector<Bytes> emittedEvents; // opaque event records (rejection codes etc.)

    bool operator==(const Receipt&) const = default;
};

inline Bytes encodeReceipt(const Receipt& rc)
{
    ByteWriter w;
    w.field(rc.txId);
    uint8_t status = rc.status ? 1 : 0;
    w.field(&status, 1);
    w.putRawU32(static_cast<uint32_t>(rc.emittedEvents.size()));
    for (const Bytes& ev : rc.emittedEvents) w.field(ev);
    return w.take();
}

inline Receipt decodeReceipt(const Bytes& bytes)
{
    ByteReader r(bytes);
    Receipt rc;
    rc.txId = r.fieldHash();
    Bytes status = r.field();
    if (status.size() != 1 || status[0] > 1) throw DecodeError("receipt: bad status field");
    rc.status = status[0] == 1;
    uint32_t count = r.rawU32();
    for (uint32_t i = 0; i < count; ++i) rc.emittedEvents.push_back(r.field());
    r.expectEnd();
    return rc;
}

/** The rejection/event code of a receipt, if any (first emitted event as text). */
inline std::string receiptCode(const Receipt& rc)
{
    if (rc.emittedEvents.empty()) return {};
    return std::string(rc.emittedEvents[0].begin(), rc.emittedEvents[0].end());
}

/** Builds an opaque event record from a code string. */
inline Bytes eventBytes(std::string_view code)
{
    return Bytes(code.begin(), code.end());
}

/** A status-false receipt carrying one rejection code. */
inline Receipt rejectedReceipt(const Hash256& txId, std::string_view code)
{
    Receipt rc;
    rc.txId = txId;
    rc.status = false;
    rc.emittedEvents.push_back(eventBytes(code));
    return rc;
}

// ============================================================================
// Block header and block
// ============================================================================

struct BlockHeader {
    ChainId chain = 0;
    uint64_t number = 0;     // height; genesis = 0
    Hash256 parentHash{};    // parent.selfHash; zero for genesis
    Hash256 txRoot{};        // Merkle root over canonical tx encodings
    Hash256 receiptRoot{};   // Merkle root over canonical receipt encodings
    uint64_t timestampMs = 0; // simulated time, integer milliseconds
    Hash256 selfHash{};      // hash over the preceding fields

    bool operator==(const BlockHeader&) const = default;

    /** Simulated seconds, the unit used in all human-facing output. */
    double timestampSeconds() const { return static_cast<double>(timestampMs) / 1000.0; }
};

/** Canonical bytes selfHash is computed over (all fields but selfHash). */
inline Bytes headerPreimage(const BlockHeader& h)
{
    ByteWriter w;
    w.fieldU64(h.chain);
    w.fieldU64(h.number);
    w.field(h.parentHash);
    w.field(h.txRoot);
    w.field(h.receiptRoot);
    w.fieldU64(h.timestampMs);
    return w.take();
}

inline Hash256 computeHeaderHash(const BlockHeader& h)
{
    return sha256(headerPreimage(h));
}

inline Bytes encodeHeader(const BlockHeader& h)
{
    // Full encoding = selfHash preimage followed by the selfHash field.
    Bytes out = headerPreimage(h);
    ByteWriter tail;
    tail.field(h.selfHash);
    out.insert(out.end(), tail.bytes().begin(), tail.bytes().end());
    return out;
}

inline BlockHeader decodeHeader(const Bytes& bytes)
{
    ByteReader r(bytes);
    BlockHeader h;
    h.chain = static_cast<ChainId>(r.fieldU64());
    h.number = r.fieldU64();
    h.parentHash = r.fieldHash();
    h.txRoot = r.fieldHash();
    h.receiptRoot = r.fieldHash();
    h.timestampMs = r.fieldU64();
    h.selfHash = r.fieldHash();
    r.expectEnd();
    return h;
}

struct Block {
    BlockHeader header;
    std::vector<Transaction> transactions;
    std::vector<Receipt> receipts; // receipt i belongs to transaction i

    bool operator==(const Block&) const = default;
};

// ============================================================================
// Accessors over foreign transactions (the contract-side vocabulary)
// ============================================================================

/** The contract a transaction invoked. */
inline const ContractAddress& calledContract(const Transaction& tx)
{
    return tx.target;
}

/** The user that signed a transaction. */
inline const UserId& submitter(const Transaction& tx)
{
    return tx.signer;
}

/** Raised by isSuccessful when the transaction is not in the given block. */
struct NotIncludedError : std::runtime_error {
    NotIncludedError() : std::runtime_error("transaction not included in block") {}
};

/**
 * Whether a transaction included in `block` executed successfully, read off
 * the receipt stored at the transaction's own index.
 */
inline bool isSuccessful(const Transaction& tx, const Block& block)
{
    for (size_t i = 0; i < block.transactions.size(); ++i) {
        if (block.transactions[i].id == tx.id) {
            return block.receipts.at(i).status;
        }
    }
    throw NotIncludedError();
}

} // namespace xchain
