// Copyright (c) 2026 The xchain developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

//
// Adversarial test drivers: each attack stages a concrete protocol abuse
// against a live simulation and reports how the contracts answered it.
//
// Every driver follows the same recipe: set the scene (often including an
// attacker-deployed copy of the asset contract), fire the hostile
// transactions, let the simulation include them, and tally the receipts.
// A well-behaved deployment rejects every attempt, so `succeeded` is zero
// for all catalogued attacks; most drivers additionally run a legitimate
// control action afterwards to prove the protocol still works for honest
// users.  The drivers are deterministic: the same config and seed replay
// the same transcripts.
//

#pragma once

#include <functional>
#include <map>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "xchain/agents.hpp"
#include "xchain/asset.hpp"
#include "xchain/scenario.hpp"

namespace xchain {

struct UnknownAttack : std::runtime_error {
    explicit UnknownAttack(const std::string& kind)
        : std::runtime_error("unknown attack kind: " + kind)
    {
    }
};

/** Stable listing of every attack `runAttack` understands. */
inline const std::vector<std::string>& attackCatalogue()
{
    static const std::vector<std::string> kinds = {
        "mimic-contract",   "fake-proof",          "double-claim",
        "third-chain-claim", "double-confirm",      "fork-relay",
        "invalid-burn",     "claim-failed-burn",   "confirm-wrong-source",
        "confirm-mimic-claim", "confirm-failed-claim", "malformed-payload",
    };
    return kinds;
}

namespace attackdetail {

/**
 * Shared attack scaffolding: a simulation plus the cast (an honest sender
 * with genesis entities on the source chain and the attacker "mallory"),
 * with helpers to submit transactions and advance the clock to well-defined
 * milestones.
 */
class Rig {
public:
    Rig(const ScenarioConfig& config, const std::string& kind)
        : sim(config), m_kind(kind)
    {
        if (config.chains.size() < 2) {
            throw ConfigError("attack " + kind + ": config needs at least two chains");
        }
        src = config.chains[0].chain;
        dest = config.chains[1].chain;
        for (const GenesisGrant& g : config.genesis) {
            if (g.chain == src && g.entities >= 8) {
                sender = g.user;
                break;
            }
        }
        if (sender.empty()) {
            throw ConfigError("attack " + kind +
                              ": config needs a genesis owner with at least 8 entities on chain " +
                              std::to_string(src));
        }
        requireRelay(dest, src);
        requireRelay(src, dest);
    }

    Simulation sim;
    ChainId src = 0;
    ChainId dest = 0;
    UserId sender;
    UserId attacker = "mallory";

    void requireRelay(ChainId host, ChainId remote)
    {
        const RelayState* r = sim.view().relay(host, remote);
        if (!r) {
            throw ConfigError("attack " + m_kind + ": config needs a relay on chain " +
                              std::to_string(host) + " for chain " + std::to_string(remote));
        }
        if (r->feePerVerification() != 0) {
            throw ConfigError("attack " + m_kind + ": attack drivers need zero-fee relays");
        }
    }

    ContractAddress assetAddr(ChainId c) const { return *sim.view().assetContract(c); }

    Transaction submit(const UserId& user, ChainId c, Bytes payload)
    {
        return sim.wallet().submit(user, assetAddr(c), std::move(payload), sim.nowMs());
    }

    Transaction submitTo(const UserId& user, const ContractAddress& target, Bytes payload)
    {
        return sim.wallet().submit(user, target, std::move(payload), sim.nowMs());
    }

    /** First `n` entities `user` currently owns on `c`. */
    EntitySet pickOwned(const UserId& user, ChainId c, size_t n)
    {
        const AssetLedger& ledger = sim.asset(c).ledger();
        EntitySet out;
        auto it = ledger.owned.find(user);
        if (it != ledger.owned.end()) {
            for (EntityId e : it->second) {
                out.insert(e);
                if (out.size() == n) break;
            }
        }
        if (out.size() < n) {
            throw ConfigError("attack " + m_kind + ": " + user + " owns fewer than " +
                              std::to_string(n) + " entities on chain " + std::to_string(c));
        }
        return out;
    }

    void guard()
    {
        if (sim.nowMs() > sim.config().maxSimMs) {
            throw std::runtime_error("attack " + m_kind +
                                     ": driver exceeded the scenario time limit");
        }
    }

    uint64_t includedHeight(const Hash256& txId, ChainId c)
    {
        size_t index = 0;
        while (true) {
            const Block* b = sim.chain(c).findTransaction(txId, index);
            if (b) return b->header.number;
            guard();
            sim.advanceBatch();
        }
    }

    void advanceUntilRelayed(ChainId host, ChainId remote, uint64_t remoteHeight)
    {
        const RelayState* r = sim.view().relay(host, remote);
        uint32_t k = sim.config().params.minConfirmations;
        while (r->mainHeadHeight() < remoteHeight + k) {
            guard();
            sim.advanceBatch();
        }
    }

    const Receipt& receiptOf(const Hash256& txId, ChainId c)
    {
        size_t index = 0;
        const Block* b = sim.chain(c).findTransaction(txId, index);
        if (!b) throw std::logic_error("attack " + m_kind + ": transaction never included");
        return b->receipts.at(index);
    }

    /** Submits a burn, waits for inclusion, and returns it with its height. */
    Transaction burnIncluded(const UserId& from, const UserId& to, ChainId s, ChainId d,
                             EntitySet X, EntitySet Y, uint64_t& heightOut)
    {
        Bytes payload = encodeBurnPayload({to, d, std::move(X), std::move(Y)});
        Transaction tx = submit(from, s, std::move(payload));
        heightOut = includedHeight(tx.id, s);
        return tx;
    }

    InclusionProofBundle bundleFor(const Transaction& tx, ChainId c)
    {
        size_t index = 0;
        const Block* b = sim.chain(c).findTransaction(tx.id, index);
        if (!b) throw std::logic_error("attack " + m_kind + ": transaction never included");
        return buildInclusionBundle(*b, index);
    }

    Bytes claimPayloadFor(const Transaction& burnTx, ChainId s)
    {
        return encodeClaimPayload({burnTx, bundleFor(burnTx, s)});
    }

    Bytes confirmPayloadFor(const Transaction& claimTx, ChainId d)
    {
        return encodeConfirmPayload({claimTx, bundleFor(claimTx, d)});
    }

    /** Deploys an attacker-run copy of the asset contract on `c`. */
    std::shared_ptr<AssetContract> deployMimic(ChainId c,
                                               std::map<ChainId, ContractAddress> registry)
    {
        AssetLedger ledger;
        ledger.chain = c;
        ledger.self = ContractAddress{c, "mimic@" + std::to_string(c)};
        ledger.registry = std::move(registry);
        ledger.params = sim.config().params;
        auto contract = std::make_shared<AssetContract>(std::move(ledger));
        sim.deployContract(c, contract->ledger().self, contract);
        return contract;
    }

    void expectControlSuccess(const Transaction& tx, ChainId c, const std::string& what)
    {
        includedHeight(tx.id, c);
        const Receipt& rc = receiptOf(tx.id, c);
        if (!rc.status) {
            throw std::logic_error("attack " + m_kind + ": control " + what +
                                   " failed with " + receiptCode(rc));
        }
    }

    AttackOutcome tally(const std::vector<Transaction>& submissions)
    {
        // settle anything still pending before reading receipts
        for (const Transaction& tx : submissions) includedHeight(tx.id, tx.target.chain);
        std::map<ChainId, const ChainSim*> chains;
        for (const ChainConfig& cc : sim.config().chains) chains[cc.chain] = &sim.chain(cc.chain);
        return tallyOutcomes(m_kind, chains, submissions);
    }

private:
    std::string m_kind;
};

// ----------------------------------------------------------------------------
// Individual drivers
// ----------------------------------------------------------------------------

/**
 * The attacker deploys her own copy of the asset contract, burns counterfeit
 * entities there, and presents the (genuinely included) burn to the real
 * destination contract.  The claim must fail the contract-identity check.
 */
inline AttackOutcome attackMimicContract(const ScenarioConfig& config)
{
    Rig r(config, "mimic-contract");
    auto mimic = r.deployMimic(r.src, r.sim.config().registry);
    mimic->ledger().grantGenesis(r.attacker, {9000001, 9000002, 9000003});

    Bytes payload = encodeBurnPayload({r.attacker, r.dest, {9000001, 9000002}, {}});
    Transaction burnTx = r.submitTo(r.attacker, mimic->ledger().self, std::move(payload));
    uint64_t h = r.includedHeight(burnTx.id, r.src);
    if (!r.receiptOf(burnTx.id, r.src).status) {
        throw std::logic_error("mimic-contract: staging burn failed");
    }
    r.advanceUntilRelayed(r.dest, r.src, h);

    Transaction claim = r.submit(r.attacker, r.dest, r.claimPayloadFor(burnTx, r.src));
    return r.tally({claim});
}

/**
 * Every decode-clean single-field corruption of a valid proof bundle, plus a
 * fabricated burn transaction presented with an honest bundle.  All must die
 * in inclusion verification; the unmodified bundle must still work.
 */
inline AttackOutcome attackFakeProof(const ScenarioConfig& config)
{
    Rig r(config, "fake-proof");
    EntitySet picked = r.pickOwned(r.sender, r.src, 2);
    auto it = picked.begin();
    EntityId a = *it++;
    EntityId b = *it;

    // two burns so the block's Merkle paths have at least one sibling level
    Transaction burn1 = r.submit(r.sender, r.src, encodeBurnPayload({r.attacker, r.dest, {a}, {}}));
    Transaction burn2 = r.submit(r.sender, r.src, encodeBurnPayload({r.attacker, r.dest, {b}, {}}));
    uint64_t h = r.includedHeight(burn1.id, r.src);
    r.includedHeight(burn2.id, r.src);
    r.advanceUntilRelayed(r.dest, r.src, h);

    const InclusionProofBundle good = r.bundleFor(burn1, r.src);
    std::vector<Transaction> forged;
    auto fire = [&](const Transaction& tx, InclusionProofBundle bundle) {
        forged.push_back(
            r.submit(r.attacker, r.dest, encodeClaimPayload({tx, std::move(bundle)})));
    };

    {
        InclusionProofBundle m = good;
        m.txProof.leafHash[0] ^= 0x01; // transaction leaf
        fire(burn1, std::move(m));
    }
    {
        InclusionProofBundle m = good;
        m.receiptProof.leafHash[0] ^= 0x01; // receipt leaf
        fire(burn1, std::move(m));
    }
    if (!good.txProof.siblings.empty()) {
        InclusionProofBundle m = good;
        m.txProof.siblings[0][0] ^= 0x01; // transaction path
        fire(burn1, std::move(m));
    }
    if (!good.receiptProof.siblings.empty()) {
        InclusionProofBundle m = good;
        m.receiptProof.siblings[0][0] ^= 0x01; // receipt path
        fire(burn1, std::move(m));
    }
    {
        InclusionProofBundle m = good;
        m.blockHash[0] ^= 0x01; // unknown header
        fire(burn1, std::move(m));
    }
    {
        InclusionProofBundle m = good;
        m.receipt.status = false; // doctored receipt body
        fire(burn1, std::move(m));
    }
    {
        InclusionProofBundle m = good;
        m.receipt.txId[0] ^= 0x01; // receipt re-pointed at another transaction
        fire(burn1, std::move(m));
    }
    {
        InclusionProofBundle m = good;
        m.receipt.emittedEvents.push_back(eventBytes("Forged")); // padded receipt
        fire(burn1, std::move(m));
    }
    {
        InclusionProofBundle m = good;
        m.path ^= 1; // neighbour position, consistently rewritten
        m.txProof.index ^= 1;
        m.receiptProof.index ^= 1;
        fire(burn1, std::move(m));
    }
    {
        // a burn that never happened, dressed in an honest block's proof
        Transaction ghost = makeTransaction(
            r.attacker, 0xF00D0001, r.assetAddr(r.src),
            encodeBurnPayload({r.attacker, r.dest, {7777777}, {}}));
        fire(ghost, good);
    }

    AttackOutcome out = r.tally(forged);

    Transaction control = r.submit(r.attacker, r.dest, encodeClaimPayload({burn1, good}));
    r.expectControlSuccess(control, r.dest, "claim with the untouched bundle");
    return out;
}

/** Claims the same burn twice; the duplicate must be refused. */
inline AttackOutcome attackDoubleClaim(const ScenarioConfig& config)
{
    Rig r(config, "double-claim");
    uint64_t h = 0;
    Transaction burnTx = r.burnIncluded(r.sender, r.attacker, r.src, r.dest,
                                        r.pickOwned(r.sender, r.src, 1), {}, h);
    r.advanceUntilRelayed(r.dest, r.src, h);

    Bytes payload = r.claimPayloadFor(burnTx, r.src);
    Transaction first = r.submit(r.attacker, r.dest, payload);  // legitimate
    Transaction dup = r.submit(r.attacker, r.dest, payload);    // the attack
    AttackOutcome out = r.tally({dup});
    r.expectControlSuccess(first, r.dest, "first claim");
    return out;
}

/** Presents a burn destined for one chain to a different chain's contract. */
inline AttackOutcome attackThirdChainClaim(const ScenarioConfig& config)
{
    Rig r(config, "third-chain-claim");
    if (config.chains.size() < 3) {
        throw ConfigError("attack third-chain-claim: config needs a third chain");
    }
    ChainId third = config.chains[2].chain;

    uint64_t h = 0;
    Transaction burnTx = r.burnIncluded(r.sender, r.attacker, r.src, r.dest,
                                        r.pickOwned(r.sender, r.src, 1), {}, h);
    r.advanceUntilRelayed(r.dest, r.src, h);

    Transaction offTarget = r.submit(r.attacker, third, r.claimPayloadFor(burnTx, r.src));
    AttackOutcome out = r.tally({offTarget});

    Transaction control = r.submit(r.attacker, r.dest, r.claimPayloadFor(burnTx, r.src));
    r.expectControlSuccess(control, r.dest, "claim on the true destination");
    return out;
}

/** Replays a confirm to release the same stake twice. */
inline AttackOutcome attackDoubleConfirm(const ScenarioConfig& config)
{
    Rig r(config, "double-confirm");
    EntitySet picked = r.pickOwned(r.sender, r.src, 2);
    auto it = picked.begin();
    EntitySet X{*it++};
    EntitySet Y{*it};

    uint64_t burnH = 0;
    Transaction burnTx = r.burnIncluded(r.sender, r.attacker, r.src, r.dest, X, Y, burnH);
    r.advanceUntilRelayed(r.dest, r.src, burnH);
    Transaction claim = r.submit(r.attacker, r.dest, r.claimPayloadFor(burnTx, r.src));
    uint64_t claimH = r.includedHeight(claim.id, r.dest);
    if (!r.receiptOf(claim.id, r.dest).status) {
        throw std::logic_error("double-confirm: staging claim failed");
    }
    r.advanceUntilRelayed(r.src, r.dest, claimH);

    Bytes payload = r.confirmPayloadFor(claim, r.dest);
    Transaction first = r.submit(r.sender, r.src, payload); // legitimate
    Transaction dup = r.submit(r.attacker, r.src, payload); // the attack
    AttackOutcome out = r.tally({dup});
    r.expectControlSuccess(first, r.src, "first confirm");
    return out;
}

/**
 * A dishonest relayer feeds the relay a side-branch header containing a
 * fabricated burn, then claims from the side block once depth alone would
 * satisfy the verifier.  The main-branch check must refuse it.
 */
inline AttackOutcome attackForkRelay(const ScenarioConfig& config)
{
    Rig r(config, "fork-relay");
    // activate once the honest relayer has synced far enough that the side
    // header's parent is already known to the relay
    uint64_t activateAt = 8 * r.sim.chain(r.src).config().interBlockMs();
    auto agent = std::make_unique<ForkFeedingRelayer>(r.attacker, &r.sim.chain(r.src), r.dest,
                                                      activateAt);
    ForkFeedingRelayer* handle = agent.get();
    r.sim.addAgent(std::move(agent));

    // run until the forged claim lands on the destination chain
    while (true) {
        const std::vector<Transaction>& sent = handle->submissions();
        if (!sent.empty() && sent.back().payload[0] == static_cast<uint8_t>(MethodTag::Claim)) {
            size_t index = 0;
            if (r.sim.chain(r.dest).findTransaction(sent.back().id, index)) break;
        }
        r.guard();
        r.sim.advanceBatch();
    }

    std::vector<Transaction> claims;
    for (const Transaction& tx : handle->submissions()) {
        if (!tx.payload.empty() && tx.payload[0] == static_cast<uint8_t>(MethodTag::Claim)) {
            claims.push_back(tx);
        }
    }
    return r.tally(claims);
}

/**
 * A fuzz barrage of structurally valid burns that violate ownership rules:
 * a configurable-seed stream of not-owned entity sets, plus one unknown
 * destination, one staked set the sender does not own, and one overlapping
 * transfer/stake pair.
 */
inline AttackOutcome attackInvalidBurn(const ScenarioConfig& config, size_t fuzzCount = 1000)
{
    Rig r(config, "invalid-burn");
    std::vector<Transaction> burns;

    EntitySet ownedPair = r.pickOwned(r.sender, r.src, 2);
    auto it = ownedPair.begin();
    EntityId o1 = *it++;
    EntityId o2 = *it;

    burns.push_back(r.submit(r.sender, r.src, encodeBurnPayload({r.attacker, 999999, {o1}, {}})));
    burns.push_back(
        r.submit(r.sender, r.src, encodeBurnPayload({r.attacker, r.dest, {o1}, {88888888}})));
    burns.push_back(
        r.submit(r.sender, r.src, encodeBurnPayload({r.attacker, r.dest, {o1, o2}, {o2}})));

    std::mt19937_64 rng(config.seed ^ 0x1badb002u);
    std::uniform_int_distribution<EntityId> entity(10000000, 99999999);
    std::uniform_int_distribution<int> setSize(1, 3);
    for (size_t i = 0; i < fuzzCount; ++i) {
        EntitySet X;
        int n = setSize(rng);
        while (static_cast<int>(X.size()) < n) X.insert(entity(rng));
        EntitySet Y;
        if (i % 3 == 0) Y.insert(entity(rng));
        for (EntityId e : X) Y.erase(e);
        burns.push_back(
            r.submit(r.attacker, r.src, encodeBurnPayload({r.attacker, r.dest, X, Y})));
    }
    AttackOutcome out = r.tally(burns);

    Transaction control =
        r.submit(r.sender, r.src, encodeBurnPayload({r.attacker, r.dest, {o1}, {}}));
    r.expectControlSuccess(control, r.src, "honest burn after the barrage");
    return out;
}

/** Claims a burn that was included but rejected on the source chain. */
inline AttackOutcome attackClaimFailedBurn(const ScenarioConfig& config)
{
    Rig r(config, "claim-failed-burn");
    // a burn of entities the attacker does not own: included, but rejected
    Transaction badBurn =
        r.submit(r.attacker, r.src, encodeBurnPayload({r.attacker, r.dest, {42424242}, {}}));
    uint64_t h = r.includedHeight(badBurn.id, r.src);
    if (r.receiptOf(badBurn.id, r.src).status) {
        throw std::logic_error("claim-failed-burn: staging burn unexpectedly succeeded");
    }
    r.advanceUntilRelayed(r.dest, r.src, h);

    Transaction claim = r.submit(r.attacker, r.dest, r.claimPayloadFor(badBurn, r.src));
    return r.tally({claim});
}

/**
 * Confirms a claim whose underlying burn lives at an attacker-run contract:
 * the claim is genuinely included (and was itself rejected), but the confirm
 * must fail the source-contract identity check before anything else.
 */
inline AttackOutcome attackConfirmWrongSource(const ScenarioConfig& config)
{
    Rig r(config, "confirm-wrong-source");
    auto mimic = r.deployMimic(r.src, r.sim.config().registry);
    mimic->ledger().grantGenesis(r.attacker, {9100001, 9100002});

    Bytes payload = encodeBurnPayload({r.attacker, r.dest, {9100001}, {9100002}});
    Transaction burnTx = r.submitTo(r.attacker, mimic->ledger().self, std::move(payload));
    uint64_t h = r.includedHeight(burnTx.id, r.src);
    r.advanceUntilRelayed(r.dest, r.src, h);

    Transaction claim = r.submit(r.attacker, r.dest, r.claimPayloadFor(burnTx, r.src));
    uint64_t claimH = r.includedHeight(claim.id, r.dest);
    r.advanceUntilRelayed(r.src, r.dest, claimH);

    Transaction confirm = r.submit(r.attacker, r.src, r.confirmPayloadFor(claim, r.dest));
    return r.tally({claim, confirm});
}

/**
 * The destination-side twin of the mimic attack: a claim accepted by an
 * attacker-run contract on the destination chain is presented to the real
 * source contract for confirmation (and a stake payout).
 */
inline AttackOutcome attackConfirmMimicClaim(const ScenarioConfig& config)
{
    Rig r(config, "confirm-mimic-claim");
    // the attacker's copy accepts claims of genuine burns: she points her
    // registry's source entry at the real contract and the dest entry at
    // her own
    std::map<ChainId, ContractAddress> registry = r.sim.config().registry;
    auto mimic = r.deployMimic(r.dest, registry);
    mimic->ledger().registry[r.dest] = mimic->ledger().self;
    mimic->setRelay(r.src, r.sim.relayContract(r.dest, r.src));

    EntitySet picked = r.pickOwned(r.sender, r.src, 2);
    auto it = picked.begin();
    EntitySet X{*it++};
    EntitySet Y{*it};
    uint64_t burnH = 0;
    Transaction burnTx = r.burnIncluded(r.sender, r.attacker, r.src, r.dest, X, Y, burnH);
    r.advanceUntilRelayed(r.dest, r.src, burnH);

    Transaction mimicClaim =
        r.submitTo(r.attacker, mimic->ledger().self, r.claimPayloadFor(burnTx, r.src));
    uint64_t claimH = r.includedHeight(mimicClaim.id, r.dest);
    if (!r.receiptOf(mimicClaim.id, r.dest).status) {
        throw std::logic_error("confirm-mimic-claim: staging claim failed");
    }
    r.advanceUntilRelayed(r.src, r.dest, claimH);

    Transaction confirm = r.submit(r.attacker, r.src, r.confirmPayloadFor(mimicClaim, r.dest));
    AttackOutcome out = r.tally({confirm});

    // the burn is still intact at the real contract — the recipient can
    // (and does) claim it there
    Transaction control = r.submit(r.attacker, r.dest, r.claimPayloadFor(burnTx, r.src));
    r.expectControlSuccess(control, r.dest, "claim at the authorized contract");
    return out;
}

/** Confirms a claim that was included but rejected on the destination. */
inline AttackOutcome attackConfirmFailedClaim(const ScenarioConfig& config)
{
    Rig r(config, "confirm-failed-claim");
    EntitySet picked = r.pickOwned(r.sender, r.src, 2);
    auto it = picked.begin();
    EntitySet X{*it++};
    EntitySet Y{*it};
    uint64_t burnH = 0;
    Transaction burnTx = r.burnIncluded(r.sender, r.attacker, r.src, r.dest, X, Y, burnH);

    // claim immediately: the relay cannot have synced yet, so the claim is
    // included and rejected
    Transaction earlyClaim = r.submit(r.attacker, r.dest, r.claimPayloadFor(burnTx, r.src));
    uint64_t claimH = r.includedHeight(earlyClaim.id, r.dest);
    if (r.receiptOf(earlyClaim.id, r.dest).status) {
        throw std::logic_error("confirm-failed-claim: staging claim unexpectedly succeeded");
    }
    r.advanceUntilRelayed(r.src, r.dest, claimH);

    Transaction confirm = r.submit(r.attacker, r.src, r.confirmPayloadFor(earlyClaim, r.dest));
    AttackOutcome out = r.tally({earlyClaim, confirm});

    r.advanceUntilRelayed(r.dest, r.src, burnH);
    Transaction control = r.submit(r.attacker, r.dest, r.claimPayloadFor(burnTx, r.src));
    r.expectControlSuccess(control, r.dest, "patient claim");
    return out;
}

/** Structurally broken payloads, crafted and fuzzed; all must bounce. */
inline AttackOutcome attackMalformedPayload(const ScenarioConfig& config)
{
    Rig r(config, "malformed-payload");
    std::vector<Transaction> sent;
    auto fire = [&](Bytes payload) { sent.push_back(r.submit(r.attacker, r.src, std::move(payload))); };

    fire({});                                             // empty
    fire({0x00});                                         // unknown tag
    fire({0x7f, 0x01, 0x02});                             // unassigned tag
    fire({static_cast<uint8_t>(MethodTag::Burn)});        // tag with no body
    fire({static_cast<uint8_t>(MethodTag::Claim), 0xde, 0xad}); // junk claim
    fire({static_cast<uint8_t>(MethodTag::Confirm), 0xbe});     // junk confirm
    fire({static_cast<uint8_t>(MethodTag::RelayHeader), 0x00}); // header tag at the asset contract
    {
        EntitySet owned = r.pickOwned(r.sender, r.src, 1);
        Bytes burn = encodeBurnPayload({r.attacker, r.dest, owned, {}});
        burn.resize(burn.size() - 3); // truncated burn
        fire(std::move(burn));
    }
    std::mt19937_64 rng(config.seed ^ 0x5ca1ab1eu);
    std::uniform_int_distribution<int> len(1, 64);
    std::uniform_int_distribution<int> byte(0, 255);
    for (int i = 0; i < 24; ++i) {
        Bytes blob(static_cast<size_t>(len(rng)));
        for (uint8_t& v : blob) v = static_cast<uint8_t>(byte(rng));
        fire(std::move(blob));
    }
    return r.tally(sent);
}

} // namespace attackdetail

/**
 * Stages the named attack against a fresh simulation of `config` and returns
 * what happened.  Throws UnknownAttack for names outside attackCatalogue(),
 * ConfigError when the config lacks the scaffolding the driver needs, and
 * std::logic_error when a control action fails (which would mean the attack
 * broke the protocol for honest users).
 */
inline AttackOutcome runAttack(const std::string& kind, const ScenarioConfig& config)
{
    using namespace attackdetail;
    if (kind == "mimic-contract") return attackMimicContract(config);
    if (kind == "fake-proof") return attackFakeProof(config);
    if (kind == "double-claim") return attackDoubleClaim(config);
    if (kind == "third-chain-claim") return attackThirdChainClaim(config);
    if (kind == "double-confirm") return attackDoubleConfirm(config);
    if (kind == "fork-relay") return attackForkRelay(config);
    if (kind == "invalid-burn") return attackInvalidBurn(config);
    if (kind == "claim-failed-burn") return attackClaimFailedBurn(config);
    if (kind == "confirm-wrong-source") return attackConfirmWrongSource(config);
    if (kind == "confirm-mimic-claim") return attackConfirmMimicClaim(config);
    if (kind == "confirm-failed-claim") return attackConfirmFailedClaim(config);
    if (kind == "malformed-payload") return attackMalformedPayload(config);
    throw UnknownAttack(kind);
}

} // namespace xchain
