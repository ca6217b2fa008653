// Copyright (c) 2026 The xchain developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

//
// Header relay: the transaction-inclusion verifier.
//
// A RelayState lives inside a contract on its host chain and replicates the
// headers of one remote chain.  Off-chain RelayerClients forward remote
// main-chain headers as ordinary transactions; the contract validates their
// structural linkage and tracks the highest known remote head.  Claim and
// confirm executions then ask the relay whether a given transaction is
// included in a sufficiently confirmed remote main-chain block, proven by a
// transaction proof and a receipt proof sharing one search path.
//
// Verification answers a plain boolean, mirroring an on-chain call: every
// failure mode — unknown block, side branch, too few confirmations, proof
// mismatch — is just `false`.
//

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "xchain/chain.hpp"
#include "xchain/core.hpp"
#include "xchain/merkle.hpp"

namespace xchain {

/** Inclusion question put to a relay. */
struct VerificationQuery {
    Transaction tx;              // transaction whose inclusion is claimed
    InclusionProofBundle bundle; // proof material
    ChainId remote = 0;          // chain the transaction supposedly lives on
    uint32_t minConfirmations = 0;
};

/** Boolean verdict plus the hash work spent reaching it (cost metric input). */
struct VerifyOutcome {
    bool ok = false;
    uint64_t hashOps = 0; // SHA-256 invocations performed during verification
};

class RelayState {
public:
    enum class SubmitResult { Accepted, Duplicate, UnknownParent, BadLinkage, BadHash };

    static const char* submitResultName(SubmitResult r)
    {
        switch (r) {
        case SubmitResult::Accepted: return "Accepted";
        case SubmitResult::Duplicate: return "Duplicate";
        case SubmitResult::UnknownParent: return "UnknownParent";
        case SubmitResult::BadLinkage: return "BadLinkage";
        case SubmitResult::BadHash: return "BadHash";
        }
        return "?";
    }

    RelayState(ChainId host, ChainId remote, const BlockHeader& checkpoint,
               uint32_t lagBlocks = 1, uint32_t feePerVerification = 0)
        : m_host(host),
          m_remote(remote),
          m_lagBlocks(lagBlocks),
          m_feePerVerification(feePerVerification),
          m_feeCollector("relay:" + std::to_string(host) + ":" + std::to_string(remote))
    {
        m_headers[checkpoint.selfHash] = checkpoint;
        m_mainHead = checkpoint.selfHash;
        m_mainHeadHeight = checkpoint.number;
    }

    ChainId hostChain() const { return m_host; }
    ChainId remoteChain() const { return m_remote; }
    uint32_t lagBlocks() const { return m_lagBlocks; }
    uint32_t feePerVerification() const { return m_feePerVerification; }
    const UserId& feeCollector() const { return m_feeCollector; }
    const Hash256& mainHead() const { return m_mainHead; }
    uint64_t mainHeadHeight() const { return m_mainHeadHeight; }
    size_t storedHeaderCount() const { return m_headers.size(); }
    bool hasHeader(const Hash256& h) const { return m_headers.count(h) > 0; }

    const BlockHeader* headerAt(const Hash256& h) const
    {
        auto it = m_headers.find(h);
        return it == m_headers.end() ? nullptr : &it->second;
    }

    /**
     * Stores a relayed header iff its hash recomputes, its parent is known,
     * and its height links correctly.  Re-submissions of stored headers are
     * idempotent successes (racing honest relayers are benign).  mainHead
     * advances only on strictly greater height: first seen wins ties.
     */
    SubmitResult submitHeader(const BlockHeader& header)
    {
        if (computeHeaderHash(header) != header.selfHash) return SubmitResult::BadHash;
        if (m_headers.count(header.selfHash)) return SubmitResult::Duplicate;
        auto parent = m_headers.find(header.parentHash);
        if (parent == m_headers.end()) return SubmitResult::UnknownParent;
        if (header.number != parent->second.number + 1 || header.chain != m_remote) {
            return SubmitResult::BadLinkage;
        }
        m_headers[header.selfHash] = header;
        if (header.number > m_mainHeadHeight) {
            m_mainHead = header.selfHash;
            m_mainHeadHeight = header.number;
        }
        return SubmitResult::Accepted;
    }

    /**
     * The inclusion verdict.  True iff ALL hold: the bundle's block is a
     * stored header; it lies on the branch ending at mainHead; it is
     * confirmed by at least minConfirmations stored descendants; both
     * Merkle proofs bind the canonical transaction/receipt bytes to the
     * header's roots; and both proofs follow the same search path.
     */
    VerifyOutcome verifyInclusion(const VerificationQuery& q) const
    {
        VerifyOutcome out;
        if (q.remote != m_remote) return out;

        auto it = m_headers.find(q.bundle.blockHash);
        if (it == m_headers.end()) return out;
        const BlockHeader& header = it->second;

        if (!onMainBranch(header)) return out;
        if (m_mainHeadHeight - header.number < q.minConfirmations) return out;

        const InclusionProofBundle& b = q.bundle;
        if (b.txProof.index != b.receiptProof.index || b.path != b.txProof.index) return out;

        // transaction proof must commit to exactly the claimed transaction
        out.hashOps += 1;
        if (merkleLeafHash(encodeTransaction(q.tx)) != b.txProof.leafHash) return out;
        out.hashOps += b.txProof.siblings.size();
        if (!verifyMembership(b.txProof, header.txRoot)) return out;

        // receipt proof must commit to the carried receipt of that transaction
        if (b.receipt.txId != q.tx.id) return out;
        out.hashOps += 1;
        if (merkleLeafHash(encodeReceipt(b.receipt)) != b.receiptProof.leafHash) return out;
        out.hashOps += b.receiptProof.siblings.size();
        if (!verifyMembership(b.receiptProof, header.receiptRoot)) return out;

        out.ok = true;
        return out;
    }

private:
    // Walks back from mainHead to the header's height and compares hashes.
    bool onMainBranch(const BlockHeader& header) const
    {
        if (header.number > m_mainHeadHeight) return false;
        Hash256 cursor = m_mainHead;
        uint64_t height = m_mainHeadHeight;
        while (height > header.number) {
            const BlockHeader* cur = headerAt(cursor);
            if (!cur) return false; // store invariant violated; fail closed
            cursor = cur->parentHash;
            --height;
            if (!m_headers.count(cursor)) return false;
        }
        return cursor == header.selfHash;
    }

    ChainId m_host;
    ChainId m_remote;
    uint32_t m_lagBlocks;
    uint32_t m_feePerVerification;
    UserId m_feeCollector;
    std::map<Hash256, BlockHeader> m_headers;
    Hash256 m_mainHead{};
    uint64_t m_mainHeadHeight = 0;
};

// ============================================================================
// On-chain adapter
// ============================================================================

/** Payload of a header-relay transaction: method tag + canonical header bytes. */
inline Bytes encodeRelayHeaderPayload(const BlockHeader& h)
{
    ByteWriter w;
    w.putRawU8(static_cast<uint8_t>(MethodTag::RelayHeader));
    w.field(encodeHeader(h));
    return w.take();
}

/**
 * Contract hosting a RelayState on its host chain.  Processes header-relay
 * transactions; claim/confirm contracts query the state synchronously.
 */
class RelayContract : public Contract {
public:
    using SyncHook = std::function<void(uint64_t timeMs, ChainId host, ChainId remote, uint64_t mainHeadHeight)>;

    RelayContract(RelayState state) : m_state(std::move(state)) {}

    RelayState& state() { return m_state; }
    const RelayState& state() const { return m_state; }

    void setSyncHook(SyncHook hook) { m_syncHook = std::move(hook); }

    Receipt execute(const Transaction& tx, const ExecContext& ctx) override
    {
        BlockHeader header;
        try {
            ByteReader r(tx.payload);
            if (r.rawU8() != static_cast<uint8_t>(MethodTag::RelayHeader)) {
                return rejectedReceipt(tx.id, "MalformedPayload");
            }
            header = decodeHeader(r.field());
            r.expectEnd();
        } catch (const DecodeError&) {
            return rejectedReceipt(tx.id, "MalformedPayload");
        }

        RelayState::SubmitResult res = m_state.submitHeader(header);
        if (m_syncHook) m_syncHook(ctx.timeMs, m_state.hostChain(), m_state.remoteChain(), m_state.mainHeadHeight());
        switch (res) {
        case RelayState::SubmitResult::Accepted:
        case RelayState::SubmitResult::Duplicate: {
            Receipt rc;
            rc.txId = tx.id;
            rc.status = true;
            return rc;
        }
        default:
            return rejectedReceipt(tx.id, RelayState::submitResultName(res));
        }
    }

private:
    RelayState m_state;
    SyncHook m_syncHook;
};

// ============================================================================
// Off-chain relayer
// ============================================================================

/**
 * Off-chain client forwarding remote headers to the relay contract on the
 * host chain.  Runs once per scheduler batch (after block production).
 *
 * lagBlocks L: a discovered header is submitted after L−1 further host
 * blocks, so it becomes visible on the host chain L host blocks after
 * discovery (L=1: submitted immediately, visible in the next host block).
 *
 * holdbackBlocks H: only headers with at least H remote confirmations are
 * forwarded, modeling relayers that wait for remote finality before paying
 * for a relay transaction.  H=0 forwards straight up to the remote head.
 */
class RelayerClient {
public:
    RelayerClient(UserId user, const ChainSim* remote, ChainSim* host, ContractAddress relayContract,
                  uint32_t lagBlocks = 1, uint32_t holdbackBlocks = 0)
        : m_user(std::move(user)),
          m_remote(remote),
          m_host(host),
          m_contract(std::move(relayContract)),
          m_lagBlocks(lagBlocks),
          m_holdback(holdbackBlocks)
    {
    }

    const UserId& user() const { return m_user; }
    void pause() { m_paused = true; }
    void resume() { m_paused = false; }

    /** Byzantine mode: stop following the remote main chain entirely. */
    void disableHonestForwarding() { m_honest = false; }

    /** Queues explicit headers (e.g. a side branch) for forwarding. */
    void feedHeaders(const std::vector<BlockHeader>& headers)
    {
        for (const BlockHeader& h : headers) m_outbox.push_back(h);
    }

    void step(uint64_t nowMs)
    {
        if (m_paused) return;
        if (m_honest) {
            uint64_t remoteHead = m_remote->headHeight();
            uint64_t limit = remoteHead >= m_holdback ? remoteHead - m_holdback : 0;
            while (m_nextHeight <= limit) {
                m_outbox.push_back(m_remote->blockAt(m_nextHeight).header);
                ++m_nextHeight;
            }
        }
        // honor the forwarding delay: headers queued in earlier steps age by
        // one host block per step; those aged lagBlocks−1 are submitted now
        uint64_t ready = m_outbox.size();
        for (uint64_t i = 0; i < ready; ++i) {
            PendingHeader& p = m_outbox[i];
            if (p.ageSteps + 1 < m_lagBlocks) {
                ++p.ageSteps;
                continue;
            }
            if (p.submitted) continue;
            Transaction tx = makeTransaction(m_user, ++m_nonce, m_contract,
                                             encodeRelayHeaderPayload(p.header));
            m_host->submitTx(tx, nowMs);
            p.submitted = true;
        }
        while (!m_outbox.empty() && m_outbox.front().submitted) m_outbox.pop_front();
    }

private:
    struct PendingHeader {
        BlockHeader header;
        uint32_t ageSteps = 0;
        bool submitted = false;
        PendingHeader(const BlockHeader& h) : header(h) {}
    };

    UserId m_user;
    const ChainSim* m_remote;
    ChainSim* m_host;
    ContractAddress m_contract;
    uint32_t m_lagBlocks;
    uint32_t m_holdback;
    bool m_paused = false;
    bool m_honest = true;
    uint64_t m_nextHeight = 1; // genesis is the relay checkpoint
    uint64_t m_nonce = 0;
    std::deque<PendingHeader> m_outbox;
};

/**
 * Builds the honest proof bundle for transaction `txIndex` of `block`:
 * Merkle proofs over the canonical transaction and receipt encodings at the
 * same path, plus the containing header hash and the receipt itself.
 */
inline InclusionProofBundle buildInclusionBundle(const Block& block, size_t txIndex)
{
    std::vector<Bytes> txLeaves, rcLeaves;
    for (const Transaction& tx : block.transactions) txLeaves.push_back(encodeTransaction(tx));
    for (const Receipt& rc : block.receipts) rcLeaves.push_back(encodeReceipt(rc));
    MerkleTree txTree = MerkleTree::build(txLeaves);
    MerkleTree rcTree = MerkleTree::build(rcLeaves);
    return makeBundle(txTree.proveMembership(txIndex), rcTree.proveMembership(txIndex),
                      block.header.selfHash, block.receipts.at(txIndex));
}

} // namespace xchain
