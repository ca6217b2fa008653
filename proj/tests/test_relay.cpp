// Copyright (c) 2026 The xchain developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <gtest/gtest.h>

#include "xchain/relay.hpp"

using namespace xchain;

namespace {

// Toy contract that succeeds on every transaction.
class OkContract : public Contract {
public:
    Receipt execute(const Transaction& tx, const ExecContext&) override
    {
        Receipt rc;
        rc.txId = tx.id;
        rc.status = true;
        return rc;
    }
};

BlockHeader childOf(const BlockHeader& parent, uint64_t saltMs = 0)
{
    BlockHeader h;
    h.chain = parent.chain;
    h.number = parent.number + 1;
    h.parentHash = parent.selfHash;
    h.txRoot = sha256(std::string_view("tx"));
    h.receiptRoot = sha256(std::string_view("rc"));
    h.timestampMs = parent.timestampMs + 15000 + saltMs;
    h.selfHash = computeHeaderHash(h);
    return h;
}

// Two chains advanced in lockstep with a relayer wired remote -> host.
struct RelayRig {
    ChainSim remote;
    ChainSim host;
    std::shared_ptr<RelayContract> relay;
    RelayerClient relayer;
    uint64_t now = 0;

    RelayRig(uint32_t lagBlocks = 1, uint32_t holdback = 0)
        : remote(ChainConfig{.chain = 0}, 1),
          host(ChainConfig{.chain = 1}, 1),
          relay(std::make_shared<RelayContract>(
              RelayState(1, 0, remote.blockAt(0).header, lagBlocks))),
          relayer("relayer:1:0", &remote, &host, ContractAddress{1, "relay@1/0"}, lagBlocks, holdback)
    {
        host.registerContract(ContractAddress{1, "relay@1/0"}, relay);
        remote.registerContract(ContractAddress{0, "ok"}, std::make_shared<OkContract>());
    }

    // One 15 s tick: blocks in chain-id order, then the relayer reacts.
    void tick()
    {
        now += 15000;
        remote.produceBlock(now);
        host.produceBlock(now);
        relayer.step(now);
    }

    VerifyOutcome verify(const Transaction& tx, const InclusionProofBundle& bundle,
                         uint32_t k = 5) const
    {
        return relay->state().verifyInclusion(VerificationQuery{tx, bundle, 0, k});
    }
};

} // namespace

// ============================================================================
// submitHeader
// ============================================================================

TEST(SubmitHeader, ChildOfMainHeadAdvances)
{
    ChainSim remote(ChainConfig{.chain = 0}, 1);
    RelayState relay(1, 0, remote.blockAt(0).header);
    BlockHeader h1 = childOf(remote.blockAt(0).header);
    EXPECT_EQ(relay.submitHeader(h1), RelayState::SubmitResult::Accepted);
    EXPECT_EQ(relay.mainHead(), h1.selfHash);
    EXPECT_EQ(relay.mainHeadHeight(), 1u);

    // idempotent duplicate
    EXPECT_EQ(relay.submitHeader(h1), RelayState::SubmitResult::Duplicate);
    EXPECT_EQ(relay.storedHeaderCount(), 2u);
}

TEST(SubmitHeader, TamperedTxRootWithStaleSelfHashRejected)
{
    ChainSim remote(ChainConfig{.chain = 0}, 1);
    RelayState relay(1, 0, remote.blockAt(0).header);
    BlockHeader h = childOf(remote.blockAt(0).header);
    h.txRoot[0] ^= 0xff; // tamper after sealing; selfHash now stale
    EXPECT_EQ(relay.submitHeader(h), RelayState::SubmitResult::BadHash);
    EXPECT_FALSE(relay.hasHeader(h.selfHash));
}

TEST(SubmitHeader, UnknownParentAndBadLinkageRejected)
{
    ChainSim remote(ChainConfig{.chain = 0}, 1);
    RelayState relay(1, 0, remote.blockAt(0).header);

    BlockHeader orphan = childOf(remote.blockAt(0).header);
    orphan.parentHash = sha256(std::string_view("elsewhere"));
    orphan.selfHash = computeHeaderHash(orphan);
    EXPECT_EQ(relay.submitHeader(orphan), RelayState::SubmitResult::UnknownParent);

    BlockHeader skip = childOf(remote.blockAt(0).header);
    skip.number = 5; // parent is height 0
    skip.selfHash = computeHeaderHash(skip);
    EXPECT_EQ(relay.submitHeader(skip), RelayState::SubmitResult::BadLinkage);

    BlockHeader wrongChain = childOf(remote.blockAt(0).header);
    wrongChain.chain = 9;
    wrongChain.selfHash = computeHeaderHash(wrongChain);
    EXPECT_EQ(relay.submitHeader(wrongChain), RelayState::SubmitResult::BadLinkage);
}

TEST(SubmitHeader, CompetingChildrenFirstSeenWinsUntilLongerExtension)
{
    ChainSim remote(ChainConfig{.chain = 0}, 1);
    RelayState relay(1, 0, remote.blockAt(0).header);

    BlockHeader a = childOf(remote.blockAt(0).header);       // first child of genesis
    BlockHeader b = childOf(remote.blockAt(0).header, 7);     // competing child
    ASSERT_NE(a.selfHash, b.selfHash);
    EXPECT_EQ(relay.submitHeader(a), RelayState::SubmitResult::Accepted);
    EXPECT_EQ(relay.submitHeader(b), RelayState::SubmitResult::Accepted);
    EXPECT_EQ(relay.mainHead(), a.selfHash) << "first seen wins the height tie";

    BlockHeader c = childOf(b); // extends the second branch past the first
    EXPECT_EQ(relay.submitHeader(c), RelayState::SubmitResult::Accepted);
    EXPECT_EQ(relay.mainHead(), c.selfHash) << "longer branch flips mainHead";
    EXPECT_EQ(relay.mainHeadHeight(), 2u);
}

TEST(SubmitHeader, MainHeadHeightIsMonotone)
{
    ChainSim remote(ChainConfig{.chain = 0}, 1);
    RelayState relay(1, 0, remote.blockAt(0).header);
    BlockHeader a = childOf(remote.blockAt(0).header);
    BlockHeader b = childOf(a);
    relay.submitHeader(a);
    relay.submitHeader(b);
    uint64_t h1 = relay.mainHeadHeight();
    BlockHeader sibling = childOf(remote.blockAt(0).header, 3); // stale height
    relay.submitHeader(sibling);
    EXPECT_GE(relay.mainHeadHeight(), h1);
}

// ============================================================================
// verifyInclusion
// ============================================================================

TEST(VerifyInclusion, HonestTransactionWithEnoughConfirmations)
{
    RelayRig rig;
    Transaction tx = makeTransaction("alice", 1, ContractAddress{0, "ok"}, Bytes{0x01});
    rig.remote.submitTx(tx, 1000);
    rig.tick(); // remote block 1 includes tx
    InclusionProofBundle bundle = buildInclusionBundle(rig.remote.blockAt(1), 0);

    // not yet enough relayed confirmations
    EXPECT_FALSE(rig.verify(tx, bundle).ok);

    for (int i = 0; i < 6; ++i) rig.tick(); // relay catches up past height 6
    ASSERT_GE(rig.relay->state().mainHeadHeight(), 6u);
    VerifyOutcome out = rig.verify(tx, bundle);
    EXPECT_TRUE(out.ok);
    EXPECT_GT(out.hashOps, 0u);

    // same bundle, higher confirmation demand than the relay has seen
    EXPECT_FALSE(rig.verify(tx, bundle, 50).ok);
    // wrong remote chain id
    EXPECT_FALSE(rig.relay->state()
                     .verifyInclusion(VerificationQuery{tx, bundle, 3, 5})
                     .ok);
}

TEST(VerifyInclusion, FakeProofDataForUnincludedTransaction)
{
    RelayRig rig;
    Transaction real = makeTransaction("alice", 1, ContractAddress{0, "ok"}, Bytes{0x01});
    rig.remote.submitTx(real, 1000);
    rig.tick();
    for (int i = 0; i < 6; ++i) rig.tick();
    InclusionProofBundle bundle = buildInclusionBundle(rig.remote.blockAt(1), 0);
    ASSERT_TRUE(rig.verify(real, bundle).ok);

    // same proof data presented for a transaction that was never included
    Transaction fake = makeTransaction("mallory", 1, ContractAddress{0, "ok"}, Bytes{0x02});
    EXPECT_FALSE(rig.verify(fake, bundle).ok);

    // receipt forged to success without updating the proof
    InclusionProofBundle forged = bundle;
    forged.receipt.status = !forged.receipt.status;
    EXPECT_FALSE(rig.verify(real, forged).ok);

    // receipt belonging to a different transaction
    InclusionProofBundle crossed = bundle;
    crossed.receipt.txId = fake.id;
    EXPECT_FALSE(rig.verify(real, crossed).ok);
}

TEST(VerifyInclusion, SideBranchHeaderNeverVerifies)
{
    RelayRig rig;
    Transaction tx = makeTransaction("alice", 1, ContractAddress{0, "ok"}, Bytes{0x01});
    rig.remote.submitTx(tx, 1000);
    rig.tick();
    for (int i = 0; i < 3; ++i) rig.tick(); // main branch at height 4

    // craft a side branch carrying the same transaction with a success receipt
    Receipt fakeRc{tx.id, true, {}};
    std::vector<BlockHeader> fork = rig.remote.injectFork(1, 2, {tx}, {fakeRc});
    for (const BlockHeader& h : fork) {
        EXPECT_EQ(rig.relay->state().submitHeader(h), RelayState::SubmitResult::Accepted);
    }

    const Block* sideBlock = rig.remote.findBlock(fork[0].selfHash);
    ASSERT_NE(sideBlock, nullptr);
    InclusionProofBundle sideBundle = buildInclusionBundle(*sideBlock, 0);

    // proofs are internally valid for the side header, but the branch loses
    for (int i = 0; i < 8; ++i) rig.tick(); // main branch grows well past the fork
    EXPECT_TRUE(verifyMembership(sideBundle.txProof, fork[0].txRoot));
    EXPECT_FALSE(rig.verify(tx, sideBundle, 0).ok) << "side branch must not verify even with k=0";
    EXPECT_FALSE(rig.verify(tx, sideBundle).ok);

    // the genuine main-chain bundle still verifies
    EXPECT_TRUE(rig.verify(tx, buildInclusionBundle(rig.remote.blockAt(1), 0)).ok);
}

// ============================================================================
// relayerStep
// ============================================================================

TEST(RelayerStep, SyncedRelayLagsAtMostOneHostBlock)
{
    RelayRig rig;
    Transaction tx = makeTransaction("alice", 1, ContractAddress{0, "ok"}, Bytes{0x01});
    rig.remote.submitTx(tx, 1000);
    rig.tick(); // inclusion at height 1, t=15 s
    InclusionProofBundle bundle = buildInclusionBundle(rig.remote.blockAt(1), 0);

    const uint32_t k = 5;
    uint64_t remoteConfirmedAt = 0, verifiableAt = 0;
    for (int i = 0; i < 12 && verifiableAt == 0; ++i) {
        rig.tick();
        if (remoteConfirmedAt == 0 && rig.remote.confirmationsOf(rig.remote.blockAt(1).header.selfHash) >= k) {
            remoteConfirmedAt = rig.now;
        }
        if (remoteConfirmedAt != 0 && rig.verify(tx, bundle, k).ok) verifiableAt = rig.now;
    }
    ASSERT_NE(remoteConfirmedAt, 0u);
    ASSERT_NE(verifiableAt, 0u);
    EXPECT_LE(verifiableAt - remoteConfirmedAt, 15000u) << "Δ_relay ≤ one 15 s host block when synced";
}

TEST(RelayerStep, PausedRelayerFailsVerificationUntilCatchUp)
{
    RelayRig rig;
    Transaction tx = makeTransaction("alice", 1, ContractAddress{0, "ok"}, Bytes{0x01});
    rig.remote.submitTx(tx, 1000);
    rig.tick();
    InclusionProofBundle bundle = buildInclusionBundle(rig.remote.blockAt(1), 0);

    rig.relayer.pause();
    for (int i = 0; i < 8; ++i) rig.tick(); // remote confirms far past k; relay sees nothing
    EXPECT_GE(rig.remote.confirmationsOf(rig.remote.blockAt(1).header.selfHash), 5u);
    EXPECT_FALSE(rig.verify(tx, bundle).ok) << "claims made while the relay is stale must fail";

    rig.relayer.resume();
    rig.tick(); // relayer floods the backlog
    rig.tick(); // host block carries it; relay is now up to date
    EXPECT_TRUE(rig.verify(tx, bundle).ok) << "verification succeeds after catch-up";
}

TEST(RelayerStep, LagTwoDelaysVisibilityByOneExtraHostBlock)
{
    RelayRig lag1(1), lag2(2);
    for (auto* rig : {&lag1, &lag2}) {
        Transaction tx = makeTransaction("alice", 1, ContractAddress{0, "ok"}, Bytes{0x01});
        rig->remote.submitTx(tx, 1000);
    }
    // measure when header 1 first appears in each relay
    uint64_t seen1 = 0, seen2 = 0;
    for (int i = 0; i < 8; ++i) {
        lag1.tick();
        lag2.tick();
        if (seen1 == 0 && lag1.relay->state().mainHeadHeight() >= 1) seen1 = lag1.now;
        if (seen2 == 0 && lag2.relay->state().mainHeadHeight() >= 1) seen2 = lag2.now;
    }
    ASSERT_NE(seen1, 0u);
    ASSERT_NE(seen2, 0u);
    EXPECT_EQ(seen2 - seen1, 15000u);
}

TEST(RelayerStep, HoldbackForwardsOnlyConfirmedHeaders)
{
    RelayRig rig(1, 5);
    for (int i = 0; i < 10; ++i) {
        rig.tick();
        // relay never stores more than remoteHead − 5
        uint64_t remoteHead = rig.remote.headHeight();
        uint64_t relayHead = rig.relay->state().mainHeadHeight();
        EXPECT_LE(relayHead + 5, std::max<uint64_t>(remoteHead, 5));
    }
    EXPECT_GE(rig.relay->state().mainHeadHeight(), 4u); // still progressing
}

TEST(RelayerStep, HonestRelayerOutweighsForkFeeder)
{
    RelayRig rig;
    Transaction tx = makeTransaction("alice", 1, ContractAddress{0, "ok"}, Bytes{0x01});
    rig.remote.submitTx(tx, 1000);
    rig.tick();

    // byzantine relayer feeding a 3-block side branch
    RelayerClient feeder("mallory-relayer", &rig.remote, &rig.host, ContractAddress{1, "relay@1/0"});
    feeder.disableHonestForwarding();
    feeder.feedHeaders(rig.remote.injectFork(1, 3));

    for (int i = 0; i < 8; ++i) {
        rig.tick();
        feeder.step(rig.now);
    }
    // main-chain verification still answers true, side branch never towers
    EXPECT_TRUE(rig.verify(tx, buildInclusionBundle(rig.remote.blockAt(1), 0)).ok);
    const Block* mainAtHead = rig.remote.findBlock(rig.relay->state().mainHead());
    ASSERT_NE(mainAtHead, nullptr);
    EXPECT_NO_THROW(rig.remote.confirmationsOf(mainAtHead->header.selfHash))
        << "relay mainHead tracks the main chain";
}

// ============================================================================
// RelayContract transaction surface
// ============================================================================

TEST(RelayContract, HeaderTransactionsProduceReceipts)
{
    ChainSim remote(ChainConfig{.chain = 0}, 1);
    ChainSim host(ChainConfig{.chain = 1}, 1);
    auto relay = std::make_shared<RelayContract>(RelayState(1, 0, remote.blockAt(0).header));
    host.registerContract(ContractAddress{1, "relay@1/0"}, relay);

    remote.produceBlock(15000);
    Transaction good = makeTransaction("r", 1, ContractAddress{1, "relay@1/0"},
                                       encodeRelayHeaderPayload(remote.blockAt(1).header));
    BlockHeader bogus = remote.blockAt(1).header;
    bogus.parentHash = sha256(std::string_view("x"));
    bogus.selfHash = computeHeaderHash(bogus);
    Transaction orphan = makeTransaction("r", 2, ContractAddress{1, "relay@1/0"},
                                         encodeRelayHeaderPayload(bogus));
    Transaction garbage = makeTransaction("r", 3, ContractAddress{1, "relay@1/0"},
                                          Bytes{0x04, 0xde, 0xad});

    host.submitTx(good, 1000);
    host.submitTx(orphan, 1000);
    host.submitTx(garbage, 1000);
    const Block& b = host.produceBlock(15000);
    ASSERT_EQ(b.receipts.size(), 3u);
    EXPECT_TRUE(b.receipts[0].status);
    EXPECT_FALSE(b.receipts[1].status);
    EXPECT_EQ(receiptCode(b.receipts[1]), "UnknownParent");
    EXPECT_FALSE(b.receipts[2].status);
    EXPECT_EQ(receiptCode(b.receipts[2]), "MalformedPayload");
    EXPECT_EQ(relay->state().mainHeadHeight(), 1u);
}
