// Copyright (c) 2026 The xchain developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

//
// Scripted user behaviors driving scenarios: honest senders and recipients,
// altruistic and rational finalizers, and adversaries (proof forgers,
// double claimers, fork-feeding relayers).
//
// Agents observe the world exactly as an off-chain client would — included
// blocks, receipts, and the public relay contract state — and act by
// submitting ordinary transactions.  They get no privileged simulator
// introspection.  Each agent is stepped once per simulation round inside
// the single-threaded event loop.
//

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "xchain/asset.hpp"
#include "xchain/chain.hpp"
#include "xchain/core.hpp"
#include "xchain/relay.hpp"

namespace xchain {

// ============================================================================
// Public world view and transaction wallet
// ============================================================================

/**
 * The observable state agents act on: chains (read-only), the authorized
 * contract registry, the public relay contract states, and the deployed
 * protocol parameters.
 */
class PublicView {
public:
    void addChain(const ChainSim* sim) { m_chains[sim->id()] = sim; }
    void setRegistry(std::map<ChainId, ContractAddress> registry) { m_registry = std::move(registry); }
    void addRelay(ChainId host, ChainId remote, const RelayContract* relay,
                  ContractAddress contractAddress)
    {
        m_relays[{host, remote}] = relay;
        m_relayAddresses[{host, remote}] = std::move(contractAddress);
    }
    void setProtocol(ProtocolParams params, int protocol)
    {
        m_params = params;
        m_protocol = protocol;
    }

    const ChainSim* chain(ChainId c) const
    {
        auto it = m_chains.find(c);
        return it == m_chains.end() ? nullptr : it->second;
    }
    const std::map<ChainId, const ChainSim*>& chains() const { return m_chains; }
    const std::map<ChainId, ContractAddress>& registry() const { return m_registry; }

    const ContractAddress* assetContract(ChainId c) const
    {
        auto it = m_registry.find(c);
        return it == m_registry.end() ? nullptr : &it->second;
    }

    const RelayState* relay(ChainId host, ChainId remote) const
    {
        auto it = m_relays.find({host, remote});
        return it == m_relays.end() ? nullptr : &it->second->state();
    }

    const ContractAddress* relayAddress(ChainId host, ChainId remote) const
    {
        auto it = m_relayAddresses.find({host, remote});
        return it == m_relayAddresses.end() ? nullptr : &it->second;
    }

    const ProtocolParams& params() const { return m_params; }
    int protocol() const { return m_protocol; }

private:
    std::map<ChainId, const ChainSim*> m_chains;
    std::map<ChainId, ContractAddress> m_registry;
    std::map<std::pair<ChainId, ChainId>, const RelayContract*> m_relays;
    std::map<std::pair<ChainId, ChainId>, ContractAddress> m_relayAddresses;
    int m_protocol = 2;
    ProtocolParams m_params;
};

/**
 * Shared transaction submitter.  A single monotone nonce counter keeps every
 * transaction id unique and the allocation order deterministic.
 */
class Wallet {
public:
    explicit Wallet(std::map<ChainId, ChainSim*> chains) : m_chains(std::move(chains)) {}

    Transaction submit(const UserId& signer, const ContractAddress& target, Bytes payload,
                       uint64_t nowMs)
    {
        Transaction tx = makeTransaction(signer, ++m_nonce, target, std::move(payload));
        m_chains.at(target.chain)->submitTx(tx, nowMs);
        return tx;
    }

private:
    std::map<ChainId, ChainSim*> m_chains;
    uint64_t m_nonce = 0;
};

// ============================================================================
// Incremental chain observer
// ============================================================================

struct ObservedBurn {
    Transaction tx;
    BurnPayload payload;
    ChainId src = 0;
    uint64_t blockHeight = 0;
    size_t txIndex = 0;
    bool succeeded = false;
    bool authorized = false; // targeted the registry contract for src
};

struct ObservedClaim {
    Transaction tx;
    ClaimPayload payload;
    ChainId dest = 0;
    uint64_t blockHeight = 0;
    size_t txIndex = 0;
    bool succeeded = false;
    bool authorized = false; // targeted the registry contract for dest
};

/**
 * An agent's private index over public chain data: burns, claims, and
 * confirms it has seen so far, updated incrementally block by block.
 */
class ChainObserver {
public:
    void update(const PublicView& view)
    {
        for (const auto& [chainId, sim] : view.chains()) {
            uint64_t& next = m_nextHeight[chainId];
            for (; next <= sim->headHeight(); ++next) {
                scanBlock(view, chainId, sim->blockAt(next));
            }
        }
    }

    const std::map<Hash256, ObservedBurn>& burns() const { return m_burns; }
    const std::map<Hash256, ObservedClaim>& claims() const { return m_claims; }

    /** Burn ids consumed by a successful claim at the authorized contract. */
    bool burnClaimed(const Hash256& burnTxId) const { return m_claimedBurns.count(burnTxId) > 0; }
    /** Claim ids consumed by a successful confirm at the authorized contract. */
    bool claimConfirmed(const Hash256& claimTxId) const { return m_confirmedClaims.count(claimTxId) > 0; }

private:
    void scanBlock(const PublicView& view, ChainId chainId, const Block& block)
    {
        const ContractAddress* authorized = view.assetContract(chainId);
        for (size_t i = 0; i < block.transactions.size(); ++i) {
            const Transaction& tx = block.transactions[i];
            const Receipt& rc = block.receipts[i];
            if (tx.payload.empty()) continue;
            bool atAuthorized = authorized && tx.target == *authorized;
            switch (static_cast<MethodTag>(tx.payload[0])) {
            case MethodTag::Burn: {
                ObservedBurn ob;
                try {
                    ob.payload = decodeBurnPayload(tx.payload);
                } catch (const DecodeError&) {
                    break;
                }
                ob.tx = tx;
                ob.src = chainId;
                ob.blockHeight = block.header.number;
                ob.txIndex = i;
                ob.succeeded = rc.status;
                ob.authorized = atAuthorized;
                m_burns.emplace(tx.id, std::move(ob));
                break;
            }
            case MethodTag::Claim: {
                ObservedClaim oc;
                try {
                    oc.payload = decodeClaimPayload(tx.payload);
                } catch (const DecodeError&) {
                    break;
                }
                oc.tx = tx;
                oc.dest = chainId;
                oc.blockHeight = block.header.number;
                oc.txIndex = i;
                oc.succeeded = rc.status;
                oc.authorized = atAuthorized;
                if (oc.succeeded && oc.authorized) m_claimedBurns.insert(oc.payload.burnTx.id);
                m_claims.emplace(tx.id, std::move(oc));
                break;
            }
            case MethodTag::Confirm: {
                try {
                    ConfirmPayload cp = decodeConfirmPayload(tx.payload);
                    if (rc.status && atAuthorized) m_confirmedClaims.insert(cp.claimTx.id);
                } catch (const DecodeError&) {
                }
                break;
            }
            default:
                break;
            }
        }
    }

    std::map<ChainId, uint64_t> m_nextHeight;
    std::map<Hash256, ObservedBurn> m_burns;
    std::map<Hash256, ObservedClaim> m_claims;
    std::set<Hash256> m_claimedBurns;
    std::set<Hash256> m_confirmedClaims;
};

// ============================================================================
// Agent base
// ============================================================================

class Agent {
public:
    explicit Agent(UserId user, uint64_t activateAtMs = 0)
        : m_user(std::move(user)), m_activateAtMs(activateAtMs)
    {
    }
    virtual ~Agent() = default;

    const UserId& user() const { return m_user; }

    void step(const PublicView& view, Wallet& wallet, uint64_t nowMs)
    {
        if (nowMs < m_activateAtMs) return;
        act(view, wallet, nowMs);
    }

    /** Everything this agent has submitted, in submission order. */
    const std::vector<Transaction>& submissions() const { return m_submitted; }

protected:
    virtual void act(const PublicView& view, Wallet& wallet, uint64_t nowMs) = 0;

    Transaction send(Wallet& wallet, const ContractAddress& target, Bytes payload, uint64_t nowMs)
    {
        Transaction tx = wallet.submit(m_user, target, std::move(payload), nowMs);
        m_submitted.push_back(tx);
        return tx;
    }

    /**
     * Builds the claim a burn calls for and dry-runs it against the public
     * relay state; returns the payload only when on-chain verification would
     * pass right now.
     */
    std::optional<Bytes> claimablePayload(const PublicView& view, const ObservedBurn& burn) const
    {
        const RelayState* relay = view.relay(burn.payload.dest, burn.src);
        if (!relay) return std::nullopt;
        const ChainSim* src = view.chain(burn.src);
        if (!src) return std::nullopt;
        InclusionProofBundle bundle =
            buildInclusionBundle(src->blockAt(burn.blockHeight), burn.txIndex);
        VerificationQuery q{burn.tx, bundle, burn.src, view.params().minConfirmations};
        if (!relay->verifyInclusion(q).ok) return std::nullopt;
        return encodeClaimPayload({burn.tx, std::move(bundle)});
    }

    /** The confirm counterpart of claimablePayload, for a successful claim. */
    std::optional<Bytes> confirmablePayload(const PublicView& view, const ObservedClaim& claim,
                                            ChainId src) const
    {
        const RelayState* relay = view.relay(src, claim.dest);
        if (!relay) return std::nullopt;
        const ChainSim* dest = view.chain(claim.dest);
        if (!dest) return std::nullopt;
        InclusionProofBundle bundle =
            buildInclusionBundle(dest->blockAt(claim.blockHeight), claim.txIndex);
        VerificationQuery q{claim.tx, bundle, claim.dest, view.params().minConfirmations};
        if (!relay->verifyInclusion(q).ok) return std::nullopt;
        return encodeConfirmPayload({claim.tx, std::move(bundle)});
    }

    ChainObserver m_observer;

private:
    UserId m_user;
    uint64_t m_activateAtMs = 0;
    std::vector<Transaction> m_submitted;
};

// ============================================================================
// Honest behaviors
// ============================================================================

/**
 * Claims every pending burn addressed to this user as soon as the relay can
 * verify it.  Recipients never wait for the fee window — they receive X in
 * full either way.
 */
class HonestRecipient : public Agent {
public:
    using Agent::Agent;

protected:
    void act(const PublicView& view, Wallet& wallet, uint64_t nowMs) override
    {
        m_observer.update(view);
        for (const auto& [burnId, burn] : m_observer.burns()) {
            if (!burn.succeeded || !burn.authorized) continue;
            if (burn.payload.recipient != user()) continue;
            if (m_observer.burnClaimed(burnId) || m_acted.count(burnId)) continue;
            auto payload = claimablePayload(view, burn);
            if (!payload) continue;
            send(wallet, *view.assetContract(burn.payload.dest), std::move(*payload), nowMs);
            m_acted.insert(burnId);
        }
    }

private:
    std::set<Hash256> m_acted;
};

/**
 * Watches for successful claims of its own burns and reports them back to
 * the source chain (the confirm step) as soon as the relay can verify them.
 * Confirming promptly is in the sender's own interest: before the timeout
 * the stake returns to the sender no matter who submits.
 */
class HonestSender : public Agent {
public:
    using Agent::Agent;

protected:
    void act(const PublicView& view, Wallet& wallet, uint64_t nowMs) override
    {
        if (view.protocol() < 2) return; // no confirm step in the base protocol
        m_observer.update(view);
        for (const auto& [claimId, claim] : m_observer.claims()) {
            if (!claim.succeeded || !claim.authorized) continue;
            const Transaction& burnTx = claim.payload.burnTx;
            if (burnTx.signer != user()) continue; // only my own transfers
            if (m_observer.claimConfirmed(claimId) || m_acted.count(claimId)) continue;
            ChainId src = burnTx.target.chain;
            auto payload = confirmablePayload(view, claim, src);
            if (!payload) continue;
            send(wallet, *view.assetContract(src), std::move(*payload), nowMs);
            m_acted.insert(claimId);
        }
    }

private:
    std::set<Hash256> m_acted;
};

/**
 * Finalizes anything pending, for anyone, as soon as verification can pass —
 * fee or no fee.  One altruist in the population suffices to guarantee every
 * transfer completes.
 */
class AltruisticFinalizer : public Agent {
public:
    using Agent::Agent;

protected:
    void act(const PublicView& view, Wallet& wallet, uint64_t nowMs) override
    {
        m_observer.update(view);
        for (const auto& [burnId, burn] : m_observer.burns()) {
            if (!burn.succeeded || !burn.authorized) continue;
            if (m_observer.burnClaimed(burnId) || m_actedBurns.count(burnId)) continue;
            auto payload = claimablePayload(view, burn);
            if (!payload) continue;
            send(wallet, *view.assetContract(burn.payload.dest), std::move(*payload), nowMs);
            m_actedBurns.insert(burnId);
        }
        if (view.protocol() < 2) return;
        for (const auto& [claimId, claim] : m_observer.claims()) {
            if (!claim.succeeded || !claim.authorized) continue;
            if (m_observer.claimConfirmed(claimId) || m_actedClaims.count(claimId)) continue;
            ChainId src = claim.payload.burnTx.target.chain;
            auto payload = confirmablePayload(view, claim, src);
            if (!payload) continue;
            send(wallet, *view.assetContract(src), std::move(*payload), nowMs);
            m_actedClaims.insert(claimId);
        }
    }

private:
    std::set<Hash256> m_actedBurns;
    std::set<Hash256> m_actedClaims;
};

/**
 * Acts only when the expected reward strictly exceeds its cost threshold and
 * the relevant timeout has passed so the reward is actually collectable:
 * claims are worth min(f, |X|−1) fee entities once the claim timeout is
 * over; confirms are worth |Y| once the confirm timeout is over.
 */
class RationalFinalizer : public Agent {
public:
    RationalFinalizer(UserId user, uint64_t costThreshold, uint64_t activateAtMs = 0)
        : Agent(std::move(user), activateAtMs), m_costThreshold(costThreshold)
    {
    }

protected:
    void act(const PublicView& view, Wallet& wallet, uint64_t nowMs) override
    {
        m_observer.update(view);
        const ProtocolParams& params = view.params();
        for (const auto& [burnId, burn] : m_observer.burns()) {
            if (!burn.succeeded || !burn.authorized) continue;
            if (burn.payload.recipient == user()) continue; // no fee for the recipient
            if (m_observer.burnClaimed(burnId) || m_actedBurns.count(burnId)) continue;

            uint64_t reward = feeCut(burn.payload.X, params.feeEntityCount).size();
            if (reward <= m_costThreshold) continue;
            const RelayState* relay = view.relay(burn.payload.dest, burn.src);
            if (!relay) continue;
            // the fee is payable only once the relayed view of the burn block
            // is older than the claim timeout
            const BlockHeader* header = relayedBurnHeader(view, *relay, burn);
            if (!header) continue;
            if (relay->mainHeadHeight() - header->number <= params.claimTimeoutBlocks) continue;

            auto payload = claimablePayload(view, burn);
            if (!payload) continue;
            send(wallet, *view.assetContract(burn.payload.dest), std::move(*payload), nowMs);
            m_actedBurns.insert(burnId);
        }
        if (view.protocol() < 2) return;
        for (const auto& [claimId, claim] : m_observer.claims()) {
            if (!claim.succeeded || !claim.authorized) continue;
            if (m_observer.claimConfirmed(claimId) || m_actedClaims.count(claimId)) continue;

            auto burnIt = m_observer.burns().find(claim.payload.burnTx.id);
            if (burnIt == m_observer.burns().end()) continue;
            const ObservedBurn& burn = burnIt->second;
            if (burn.payload.Y.size() <= m_costThreshold) continue; // stake not worth it
            // the stake goes to the submitter only after the confirm timeout,
            // measured in source-chain blocks since the burn
            const ChainSim* src = view.chain(burn.src);
            if (!src) continue;
            uint64_t nextHeight = src->headHeight() + 1;
            if (nextHeight - burn.blockHeight <= params.confirmTimeoutBlocks) continue;

            auto payload = confirmablePayload(view, claim, burn.src);
            if (!payload) continue;
            send(wallet, *view.assetContract(burn.src), std::move(*payload), nowMs);
            m_actedClaims.insert(claimId);
        }
    }

private:
    const BlockHeader* relayedBurnHeader(const PublicView& view, const RelayState& relay,
                                         const ObservedBurn& burn) const
    {
        const ChainSim* src = view.chain(burn.src);
        if (!src) return nullptr;
        return relay.headerAt(src->blockAt(burn.blockHeight).header.selfHash);
    }

    uint64_t m_costThreshold;
    std::set<Hash256> m_actedBurns;
    std::set<Hash256> m_actedClaims;
};

// ============================================================================
// Byzantine behaviors
// ============================================================================

/** Departs from the protocol by doing nothing at all — never claims. */
class ByzantineWithholder : public Agent {
public:
    using Agent::Agent;

protected:
    void act(const PublicView&, Wallet&, uint64_t) override {}
};

/**
 * Attempts to claim every verifiable burn with a corrupted proof bundle
 * (one flipped byte in the transaction leaf hash).
 */
class ByzantineForger : public Agent {
public:
    using Agent::Agent;

protected:
    void act(const PublicView& view, Wallet& wallet, uint64_t nowMs) override
    {
        m_observer.update(view);
        for (const auto& [burnId, burn] : m_observer.burns()) {
            if (!burn.succeeded || !burn.authorized) continue;
            if (m_acted.count(burnId)) continue;
            // forge only when the honest claim would verify, so the rejection
            // is attributable to the forgery alone
            if (!claimablePayload(view, burn)) continue;
            const ChainSim* src = view.chain(burn.src);
            InclusionProofBundle bundle =
                buildInclusionBundle(src->blockAt(burn.blockHeight), burn.txIndex);
            bundle.txProof.leafHash[0] ^= 0x01;
            send(wallet, *view.assetContract(burn.payload.dest),
                 encodeClaimPayload({burn.tx, std::move(bundle)}), nowMs);
            m_acted.insert(burnId);
        }
    }

private:
    std::set<Hash256> m_acted;
};

/**
 * Submits two claims for every verifiable burn — its own duplicate pair —
 * and also re-claims burns other users already consumed.
 */
class ByzantineDoubleClaimer : public Agent {
public:
    using Agent::Agent;

protected:
    void act(const PublicView& view, Wallet& wallet, uint64_t nowMs) override
    {
        m_observer.update(view);
        for (const auto& [burnId, burn] : m_observer.burns()) {
            if (!burn.succeeded || !burn.authorized) continue;
            if (m_acted.count(burnId)) continue;
            auto payload = claimablePayload(view, burn);
            if (!payload) continue;
            const ContractAddress& dest = *view.assetContract(burn.payload.dest);
            send(wallet, dest, *payload, nowMs);
            send(wallet, dest, *payload, nowMs); // the duplicate (distinct nonce)
            m_acted.insert(burnId);
        }
    }

private:
    std::set<Hash256> m_acted;
};

/**
 * Mines a short side branch on the remote chain containing a fabricated
 * "successful" burn, feeds those headers to the host relay, and tries to
 * claim from the side block.  Models an adversary with private mining power
 * and a cooperating dishonest relayer.
 */
class ForkFeedingRelayer : public Agent {
public:
    ForkFeedingRelayer(UserId user, ChainSim* remote, ChainId hostChain, uint64_t activateAtMs = 0)
        : Agent(std::move(user), activateAtMs), m_remote(remote), m_hostChain(hostChain)
    {
    }

protected:
    void act(const PublicView& view, Wallet& wallet, uint64_t nowMs) override
    {
        const ContractAddress* relayAddr = view.relayAddress(m_hostChain, m_remote->id());
        const ContractAddress* victim = view.assetContract(m_hostChain);
        const ContractAddress* remoteAsset = view.assetContract(m_remote->id());
        if (!relayAddr || !victim || !remoteAsset) return;

        if (!m_forged) {
            // fabricate a burn of entities nobody owns, "include" it in a
            // side block, and pair it with a forged success receipt
            BurnPayload fake{user(), m_hostChain, {900001, 900002}, {}};
            m_fakeBurn = makeTransaction(user(), 0x46524B00 + m_seq++, *remoteAsset,
                                         encodeBurnPayload(fake));
            Receipt rc;
            rc.txId = m_fakeBurn.id;
            rc.status = true;
            uint64_t from = m_remote->headHeight() == 0 ? 0 : m_remote->headHeight() - 1;
            std::vector<BlockHeader> side = m_remote->injectFork(from, 1, {m_fakeBurn}, {rc});
            m_sideHeader = side.front();
            m_sideBlock = *m_remote->findBlock(m_sideHeader.selfHash);
            send(wallet, *relayAddr, encodeRelayHeaderPayload(m_sideHeader), nowMs);
            m_forged = true;
            return;
        }

        if (m_claimSubmitted) return;
        const RelayState* relay = view.relay(m_hostChain, m_remote->id());
        if (!relay || !relay->headerAt(m_sideHeader.selfHash)) return;
        // wait until depth alone would satisfy the verifier, so the rejection
        // exercises the main-branch check rather than the confirmation count
        if (relay->mainHeadHeight() < m_sideHeader.number + view.params().minConfirmations) return;
        InclusionProofBundle bundle = buildInclusionBundle(m_sideBlock, 0);
        send(wallet, *victim, encodeClaimPayload({m_fakeBurn, std::move(bundle)}), nowMs);
        m_claimSubmitted = true;
    }

private:
    ChainSim* m_remote;
    ChainId m_hostChain;
    uint32_t m_seq = 0;
    bool m_forged = false;
    bool m_claimSubmitted = false;
    Transaction m_fakeBurn;
    BlockHeader m_sideHeader;
    Block m_sideBlock;
};

// ============================================================================
// Attack bookkeeping
// ============================================================================

struct AttackOutcome {
    std::string attack;
    uint64_t attempted = 0;
    uint64_t succeeded = 0;
    std::map<std::string, uint64_t> rejectionCodes;
};

/**
 * Classifies a set of submitted transactions by their on-chain outcome:
 * status-true receipts count as successes, everything else lands in the
 * rejection-code histogram (never-included transactions count as "Pending").
 */
inline AttackOutcome tallyOutcomes(std::string attack,
                                   const std::map<ChainId, const ChainSim*>& chains,
                                   const std::vector<Transaction>& submissions)
{
    AttackOutcome out;
    out.attack = std::move(attack);
    for (const Transaction& tx : submissions) {
        ++out.attempted;
        const ChainSim* sim = chains.at(tx.target.chain);
        size_t index = 0;
        const Block* block = sim->findTransaction(tx.id, index);
        if (!block) {
            ++out.rejectionCodes["Pending"];
            continue;
        }
        const Receipt& rc = block->receipts.at(index);
        if (rc.status) {
            ++out.succeeded;
        } else {
            std::string code = receiptCode(rc);
            ++out.rejectionCodes[code.empty() ? "Rejected" : code];
        }
    }
    return out;
}

} // namespace xchain
