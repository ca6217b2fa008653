// Copyright (c) 2026 The xchain developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

//
// The asset contract: an entity-set ownership ledger plus the burn, claim,
// and confirm transaction handlers.
//
// A transfer moves an entity set X from a sender on the source chain to a
// recipient on the destination chain in up to three steps:
//
//   burn    (src)  destroy X, optionally locking a stake Y
//   claim   (dest) recreate X for the recipient, gated on an inclusion
//                  proof of the successful burn served by the dest-hosted
//                  relay of src; after the claim timeout a third-party
//                  claimer earns a small fee cut of X
//   confirm (src)  report the finalized claim back to src, gated on an
//                  inclusion proof of the successful claim; the stake Y
//                  returns to the sender, or — after the confirm timeout —
//                  rewards whoever confirmed
//
// The base protocol is simply the Y = ∅ special case with no confirm step.
//
// Every check failure produces a status-false receipt with a stable,
// distinguishing event code; the first failing check wins.  Execution also
// tallies an operation count per transaction (checks evaluated + hash work
// in proof verification + payload words processed), the simulator's
// stand-in for gas.
//

#pragma once

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "xchain/chain.hpp"
#include "xchain/core.hpp"
#include "xchain/merkle.hpp"
#include "xchain/relay.hpp"

namespace xchain {

struct ProtocolParams {
    uint64_t claimTimeoutBlocks = 10;   // t: relayed confirmations of the burn block after
                                        //    which third-party claimers earn the fee
    uint64_t confirmTimeoutBlocks = 30; // src blocks after the burn after which third-party
                                        //    confirmers earn the stake
    uint32_t feeEntityCount = 1;        // f: |X_fee| before the |X|−1 cap
    uint32_t minConfirmations = 5;      // k: confirmations verifyInclusion demands
};

// ============================================================================
// Method payloads
// ============================================================================

struct BurnPayload {
    UserId recipient;
    ChainId dest = 0;
    EntitySet X; // entities to transfer (burned on src)
    EntitySet Y; // stake locked on src; empty for the base protocol

    bool operator==(const BurnPayload&) const = default;
};

inline Bytes encodeBurnPayload(const BurnPayload& p)
{
    ByteWriter w;
    w.putRawU8(static_cast<uint8_t>(MethodTag::Burn));
    w.field(p.recipient);
    w.fieldU64(p.dest);
    w.fieldEntitySet(p.X);
    w.fieldEntitySet(p.Y);
    return w.take();
}

inline BurnPayload decodeBurnPayload(const Bytes& payload)
{
    ByteReader r(payload);
    if (r.rawU8() != static_cast<uint8_t>(MethodTag::Burn)) throw DecodeError("not a burn payload");
    BurnPayload p;
    p.recipient = r.fieldString();
    p.dest = static_cast<ChainId>(r.fieldU64());
    p.X = r.fieldEntitySet();
    p.Y = r.fieldEntitySet();
    r.expectEnd();
    if (p.X.empty()) throw DecodeError("burn payload: X must be non-empty");
    return p;
}

struct ClaimPayload {
    Transaction burnTx;
    InclusionProofBundle burnBundle;

    bool operator==(const ClaimPayload&) const = default;
};

inline Bytes encodeClaimPayload(const ClaimPayload& p)
{
    ByteWriter w;
    w.putRawU8(static_cast<uint8_t>(MethodTag::Claim));
    w.field(encodeTransaction(p.burnTx));
    w.field(encodeBundle(p.burnBundle));
    return w.take();
}

inline ClaimPayload decodeClaimPayload(const Bytes& payload)
{
    ByteReader r(payload);
    if (r.rawU8() != static_cast<uint8_t>(MethodTag::Claim)) throw DecodeError("not a claim payload");
    ClaimPayload p;
    p.burnTx = decodeTransaction(r.field());
    p.burnBundle = decodeBundle(r.field());
    r.expectEnd();
    return p;
}

struct ConfirmPayload {
    Transaction claimTx;
    InclusionProofBundle claimBundle;

    bool operator==(const ConfirmPayload&) const = default;
};

inline Bytes encodeConfirmPayload(const ConfirmPayload& p)
{
    ByteWriter w;
    w.putRawU8(static_cast<uint8_t>(MethodTag::Confirm));
    w.field(encodeTransaction(p.claimTx));
    w.field(encodeBundle(p.claimBundle));
    return w.take();
}

inline ConfirmPayload decodeConfirmPayload(const Bytes& payload)
{
    ByteReader r(payload);
    if (r.rawU8() != static_cast<uint8_t>(MethodTag::Confirm)) throw DecodeError("not a confirm payload");
    ConfirmPayload p;
    p.claimTx = decodeTransaction(r.field());
    p.claimBundle = decodeBundle(r.field());
    r.expectEnd();
    return p;
}

// ============================================================================
// Ledger
// ============================================================================

/** Stake locked by one burn, waiting for its confirm. */
struct StakeEntry {
    UserId sender;
    EntitySet stake;              // Y; may be empty under the base protocol
    uint64_t burnBlockHeight = 0; // confirm-timeout reference point
};

struct AssetLedger {
    ChainId chain = 0;
    ContractAddress self;                        // this contract's own address
    std::map<UserId, EntitySet> owned;           // per-user ownership sets
    std::set<Hash256> usedBurns;                 // burn tx ids already claimed
    std::set<Hash256> usedClaims;                // claim tx ids already confirmed
    std::map<Hash256, StakeEntry> lockedStakes;  // keyed by burn tx id
    std::map<ChainId, ContractAddress> registry; // authorized asset contract per chain
    ProtocolParams params;

    void grantGenesis(const UserId& user, const EntitySet& entities)
    {
        owned[user].insert(entities.begin(), entities.end());
    }

    bool ownsAll(const UserId& user, const EntitySet& entities) const
    {
        auto it = owned.find(user);
        if (it == owned.end()) return entities.empty();
        return std::includes(it->second.begin(), it->second.end(), entities.begin(), entities.end());
    }

    void remove(const UserId& user, const EntitySet& entities)
    {
        EntitySet& s = owned[user];
        for (EntityId e : entities) s.erase(e);
    }

    void grant(const UserId& user, const EntitySet& entities)
    {
        owned[user].insert(entities.begin(), entities.end());
    }

    uint64_t ownedTotal() const
    {
        uint64_t n = 0;
        for (const auto& [user, s] : owned) n += s.size();
        return n;
    }

    uint64_t lockedTotal() const
    {
        uint64_t n = 0;
        for (const auto& [id, e] : lockedStakes) n += e.stake.size();
        return n;
    }
};

/** The f (capped at |X|−1) lowest entity ids of X. */
inline EntitySet feeCut(const EntitySet& X, uint32_t f)
{
    size_t take = std::min<size_t>(f, X.empty() ? 0 : X.size() - 1);
    EntitySet out;
    auto it = X.begin();
    for (size_t i = 0; i < take; ++i, ++it) out.insert(*it);
    return out;
}

// ============================================================================
// Contract
// ============================================================================

/** Per-method running totals of the operation-count work metric. */
struct OpStats {
    uint64_t count = 0;
    uint64_t totalOps = 0;

    double meanOps() const { return count == 0 ? 0.0 : static_cast<double>(totalOps) / static_cast<double>(count); }
};

class AssetContract : public Contract {
public:
    explicit AssetContract(AssetLedger ledger) : m_ledger(std::move(ledger)) {}

    AssetLedger& ledger() { return m_ledger; }
    const AssetLedger& ledger() const { return m_ledger; }

    /** Wires the host-chain relay replicating `remote`. */
    void setRelay(ChainId remote, std::shared_ptr<RelayContract> relay)
    {
        m_relays[remote] = std::move(relay);
    }

    const std::map<uint8_t, OpStats>& opStats() const { return m_opStats; }

    Receipt execute(const Transaction& tx, const ExecContext& ctx) override
    {
        uint8_t tag = tx.payload.empty() ? 0 : tx.payload[0];
        uint64_t ops = payloadWords(tx.payload);
        Receipt rc;
        switch (static_cast<MethodTag>(tag)) {
        case MethodTag::Burn:
            rc = execBurn(tx, ctx, ops);
            break;
        case MethodTag::Claim:
            rc = execClaim(tx, ctx, ops);
            break;
        case MethodTag::Confirm:
            rc = execConfirm(tx, ctx, ops);
            break;
        default:
            return rejectedReceipt(tx.id, "MalformedPayload");
        }
        OpStats& st = m_opStats[tag];
        st.count += 1;
        st.totalOps += ops;
        m_lastOps = ops;
        return rc;
    }

    uint64_t lastOps() const { return m_lastOps; }

private:
    static uint64_t payloadWords(const Bytes& payload)
    {
        return (payload.size() + 31) / 32;
    }

    const RelayState* relayFor(ChainId remote) const
    {
        auto it = m_relays.find(remote);
        return it == m_relays.end() ? nullptr : &it->second->state();
    }

    /**
     * burn⟨recipient, dest, X, Y⟩ — destroys X and locks Y.
     * Checks in order: dest registered; X owned by sender; Y owned by
     * sender; X and Y disjoint.
     */
    Receipt execBurn(const Transaction& tx, const ExecContext& ctx, uint64_t& ops)
    {
        BurnPayload p;
        try {
            p = decodeBurnPayload(tx.payload);
        } catch (const DecodeError&) {
            return rejectedReceipt(tx.id, "MalformedPayload");
        }
        const UserId& sender = submitter(tx);

        ++ops;
        if (!m_ledger.registry.count(p.dest)) return rejectedReceipt(tx.id, "UnknownDest");
        ++ops;
        if (!m_ledger.ownsAll(sender, p.X)) return rejectedReceipt(tx.id, "NotOwnerX");
        ++ops;
        if (!m_ledger.ownsAll(sender, p.Y)) return rejectedReceipt(tx.id, "NotOwnerY");
        ++ops;
        for (EntityId e : p.Y) {
            if (p.X.count(e)) return rejectedReceipt(tx.id, "Overlap");
        }

        m_ledger.remove(sender, p.X); // X leaves circulation on this chain
        m_ledger.remove(sender, p.Y);
        m_ledger.lockedStakes[tx.id] = StakeEntry{sender, p.Y, ctx.blockHeight};

        Receipt rc;
        rc.txId = tx.id;
        rc.status = true;
        return rc;
    }

    /**
     * claim⟨tx_burn, proof⟩ — recreates X for the recipient.
     * Checks in order: (i) executing chain is the burn's dest; (ii) burn not
     * already claimed; (iii) relay verifies the burn's inclusion on src with
     * k confirmations; (iv) the burn invoked the authorized src contract;
     * (v) the burn executed successfully.
     */
    Receipt execClaim(const Transaction& tx, const ExecContext&, uint64_t& ops)
    {
        ClaimPayload p;
        BurnPayload burn;
        try {
            p = decodeClaimPayload(tx.payload);
            burn = decodeBurnPayload(p.burnTx.payload);
        } catch (const DecodeError&) {
            return rejectedReceipt(tx.id, "MalformedPayload");
        }

        ++ops; // (i)
        if (burn.dest != m_ledger.chain) return rejectedReceipt(tx.id, "WrongDest");
        ++ops; // (ii)
        if (m_ledger.usedBurns.count(p.burnTx.id)) return rejectedReceipt(tx.id, "AlreadyClaimed");

        ++ops; // (iii)
        ChainId src = p.burnTx.target.chain;
        const RelayState* relay = relayFor(src);
        if (!relay) return rejectedReceipt(tx.id, "InclusionFailed");
        if (!payVerificationFee(*relay, submitter(tx))) return rejectedReceipt(tx.id, "InclusionFailed");
        VerifyOutcome vo = relay->verifyInclusion(
            VerificationQuery{p.burnTx, p.burnBundle, src, m_ledger.params.minConfirmations});
        ops += vo.hashOps;
        if (!vo.ok) return rejectedReceipt(tx.id, "InclusionFailed");

        ++ops; // (iv)
        auto authorized = m_ledger.registry.find(src);
        if (authorized == m_ledger.registry.end() || calledContract(p.burnTx) != authorized->second) {
            return rejectedReceipt(tx.id, "UnauthorizedBurnContract");
        }
        ++ops; // (v) — the receipt proof vouches for the burn's own status
        if (!p.burnBundle.receipt.status) return rejectedReceipt(tx.id, "BurnFailed");

        // fee decision: has the burn block been relayed for more than t blocks?
        ++ops;
        const BlockHeader* burnHeader = relay->headerAt(p.burnBundle.blockHash);
        bool timeoutReached =
            burnHeader && (relay->mainHeadHeight() - burnHeader->number) > m_ledger.params.claimTimeoutBlocks;

        Receipt rc;
        rc.txId = tx.id;
        rc.status = true;
        EntitySet xFee;
        if (timeoutReached && submitter(tx) != burn.recipient) {
            xFee = feeCut(burn.X, m_ledger.params.feeEntityCount);
            if (!xFee.empty()) {
                m_ledger.grant(submitter(tx), xFee);
                rc.emittedEvents.push_back(eventBytes("FeePaid:" + entityListText(xFee)));
            }
        }
        EntitySet toRecipient;
        std::set_difference(burn.X.begin(), burn.X.end(), xFee.begin(), xFee.end(),
                            std::inserter(toRecipient, toRecipient.begin()));
        m_ledger.grant(burn.recipient, toRecipient);
        m_ledger.usedBurns.insert(p.burnTx.id);
        return rc;
    }

    /**
     * confirm⟨tx_claim, proof⟩ — reports the finalized claim back to src.
     * Checks in order: (i) claim not already confirmed; (ii) the embedded
     * burn invoked this very contract; (iii) relay verifies the claim's
     * inclusion on dest with k confirmations; (iv) the claim invoked the
     * authorized dest contract; (v) the claim executed successfully.
     */
    Receipt execConfirm(const Transaction& tx, const ExecContext& ctx, uint64_t& ops)
    {
        ConfirmPayload p;
        ClaimPayload claim;
        try {
            p = decodeConfirmPayload(tx.payload);
            claim = decodeClaimPayload(p.claimTx.payload);
        } catch (const DecodeError&) {
            return rejectedReceipt(tx.id, "MalformedPayload");
        }
        const Transaction& burnTx = claim.burnTx;

        ++ops; // (i)
        if (m_ledger.usedClaims.count(p.claimTx.id)) return rejectedReceipt(tx.id, "AlreadyConfirmed");
        ++ops; // (ii)
        if (calledContract(burnTx) != m_ledger.self) return rejectedReceipt(tx.id, "WrongSourceContract");

        ++ops; // (iii)
        ChainId dest = p.claimTx.target.chain;
        const RelayState* relay = relayFor(dest);
        if (!relay) return rejectedReceipt(tx.id, "InclusionFailed");
        if (!payVerificationFee(*relay, submitter(tx))) return rejectedReceipt(tx.id, "InclusionFailed");
        VerifyOutcome vo = relay->verifyInclusion(
            VerificationQuery{p.claimTx, p.claimBundle, dest, m_ledger.params.minConfirmations});
        ops += vo.hashOps;
        if (!vo.ok) return rejectedReceipt(tx.id, "InclusionFailed");

        ++ops; // (iv)
        auto authorized = m_ledger.registry.find(dest);
        if (authorized == m_ledger.registry.end() || calledContract(p.claimTx) != authorized->second) {
            return rejectedReceipt(tx.id, "UnauthorizedClaimContract");
        }
        ++ops; // (v)
        if (!p.claimBundle.receipt.status) return rejectedReceipt(tx.id, "ClaimFailed");

        auto entry = m_ledger.lockedStakes.find(burnTx.id);
        if (entry == m_ledger.lockedStakes.end()) {
            // Unreachable with a sound relay: a verified successful claim
            // implies this contract executed the burn.  Fail closed.
            return rejectedReceipt(tx.id, "WrongSourceContract");
        }

        ++ops; // timeout decision
        bool timeout = (ctx.blockHeight - entry->second.burnBlockHeight) > m_ledger.params.confirmTimeoutBlocks;

        Receipt rc;
        rc.txId = tx.id;
        rc.status = true;
        const EntitySet& Y = entry->second.stake;
        if (timeout) {
            m_ledger.grant(submitter(tx), Y);
            rc.emittedEvents.push_back(eventBytes("StakeToSubmitter:" + submitter(tx)));
        } else {
            // before the timeout the stake returns to the sender no matter
            // who submitted the confirm
            m_ledger.grant(entry->second.sender, Y);
            rc.emittedEvents.push_back(eventBytes("StakeToSender:" + entry->second.sender));
        }
        m_ledger.usedClaims.insert(p.claimTx.id);
        m_ledger.lockedStakes.erase(entry);
        return rc;
    }

    /** Charges the relay's per-verification fee; false if it cannot be paid. */
    bool payVerificationFee(const RelayState& relay, const UserId& payer)
    {
        uint32_t fee = relay.feePerVerification();
        if (fee == 0) return true;
        auto it = m_ledger.owned.find(payer);
        if (it == m_ledger.owned.end() || it->second.size() < fee) return false;
        EntitySet cut;
        auto e = it->second.begin();
        for (uint32_t i = 0; i < fee; ++i, ++e) cut.insert(*e);
        m_ledger.remove(payer, cut);
        m_ledger.grant(relay.feeCollector(), cut);
        return true;
    }

    static std::string entityListText(const EntitySet& s)
    {
        std::string out;
        for (EntityId e : s) {
            if (!out.empty()) out.push_back(',');
            out += std::to_string(e);
        }
        return out;
    }

    AssetLedger m_ledger;
    std::map<ChainId, std::shared_ptr<RelayContract>> m_relays;
    std::map<uint8_t, OpStats> m_opStats;
    uint64_t m_lastOps = 0;
};

// ============================================================================
// Supply census
// ============================================================================

/** Where every accounted entity sits, with duplicate detection. */
struct SupplyCensus {
    uint64_t ownedCount = 0;
    uint64_t lockedCount = 0;
    uint64_t inTransitCount = 0;
    std::vector<std::string> violations; // entities seen in more than one place

    uint64_t total() const { return ownedCount + lockedCount + inTransitCount; }
};

/**
 * Counts every entity across all ledgers' owned sets, locked stakes, and the
 * harness-supplied set of burned-but-unclaimed (in-transit) entities.  Any
 * entity appearing twice is a conservation violation.
 */
inline SupplyCensus censusSupply(const std::vector<const AssetLedger*>& ledgers,
                                 const EntitySet& inTransitBurned)
{
    SupplyCensus census;
    std::map<EntityId, std::string> seen;
    auto note = [&](EntityId e, std::string where) {
        auto [it, fresh] = seen.emplace(e, where);
        if (!fresh) {
            census.violations.push_back("entity " + std::to_string(e) + " in " + it->second +
                                        " and " + where);
        }
    };
    for (const AssetLedger* ledger : ledgers) {
        for (const auto& [user, entities] : ledger->owned) {
            census.ownedCount += entities.size();
            for (EntityId e : entities) {
                note(e, "owned[" + user + "]@" + std::to_string(ledger->chain));
            }
        }
        for (const auto& [burnId, entry] : ledger->lockedStakes) {
            census.lockedCount += entry.stake.size();
            for (EntityId e : entry.stake) {
                note(e, "stake@" + std::to_string(ledger->chain));
            }
        }
    }
    census.inTransitCount = inTransitBurned.size();
    for (EntityId e : inTransitBurned) note(e, "in-transit");
    return census;
}

/** owned + locked + in-transit; the conserved quantity (= |A| at genesis). */
inline uint64_t totalAccountedSupply(const std::vector<const AssetLedger*>& ledgers,
                                     const EntitySet& inTransitBurned)
{
    return censusSupply(ledgers, inTransitBurned).total();
}

} // namespace xchain
