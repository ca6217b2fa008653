// Copyright (c) 2026 The xchain developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

//
// Deterministic discrete-event simulation of one blockchain.
//
// Each ChainSim owns a FIFO mempool, an append-only main chain, and a
// contract registry.  Block production drains the mempool, executes every
// transaction through its target contract (recording a receipt whether or
// not execution succeeded), and commits transaction/receipt Merkle roots
// into the header.  Forks exist only through explicit injection and never
// reorganize the main chain: the protocols under test assume k-confirmation
// finality, and injected side branches exist to exercise the relay's
// main-branch discipline.
//
// Time is integer milliseconds.  Inter-block spacing is fixed by default;
// an optional seeded exponential mode reproduces block-time variance
// qualitatively.  All randomness flows from the configured seed, so equal
// seeds give byte-identical chains.
//

#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <queue>
#include <random>
#include <set>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "xchain/core.hpp"
#include "xchain/merkle.hpp"

namespace xchain {

struct UnknownChainError : std::invalid_argument {
    UnknownChainError() : std::invalid_argument("unknown chain id") {}
};

struct DuplicateTxIdError : std::invalid_argument {
    DuplicateTxIdError() : std::invalid_argument("transaction id already seen on this chain") {}
};

struct UnknownBlockError : std::invalid_argument {
    UnknownBlockError() : std::invalid_argument("unknown block hash") {}
};

struct NotOnMainChainError : std::invalid_argument {
    NotOnMainChainError() : std::invalid_argument("block is not on the main chain") {}
};

struct InvalidHeightError : std::invalid_argument {
    InvalidHeightError() : std::invalid_argument("fork height exceeds chain head") {}
};

enum class BlockTiming {
    Fixed,       // every interBlockSeconds exactly
    Exponential, // seeded exponential gaps with mean interBlockSeconds
};

struct ChainConfig {
    ChainId chain = 0;
    double interBlockSeconds = 15.0; // simulated seconds per block
    uint32_t confirmations = 5;      // k: succeeding blocks required for finality
    BlockTiming timing = BlockTiming::Fixed;
    uint64_t maxTxPerBlock = 0;      // 0 = unlimited

    uint64_t interBlockMs() const { return static_cast<uint64_t>(std::llround(interBlockSeconds * 1000.0)); }
};

/** Execution context a contract sees while its transaction runs. */
struct ExecContext {
    ChainId chain = 0;
    uint64_t blockHeight = 0; // height of the block being produced
    uint64_t timeMs = 0;      // timestamp of the block being produced
};

/** On-chain contract: consumes a transaction, returns its receipt. */
class Contract {
public:
    virtual ~Contract() = default;
    virtual Receipt execute(const Transaction& tx, const ExecContext& ctx) = 0;
};

/** Observer hook for the event trace; all callbacks optional. */
class TraceSink {
public:
    virtual ~TraceSink() = default;
    virtual void onSubmit(uint64_t /*timeMs*/, ChainId /*chain*/, const Hash256& /*txId*/) {}
    virtual void onBlock(const BlockHeader& /*header*/, size_t /*txCount*/) {}
    virtual void onExec(uint64_t /*timeMs*/, ChainId /*chain*/, const Transaction& /*tx*/,
                        const Receipt& /*receipt*/) {}
};

class ChainSim {
public:
    ChainSim(ChainConfig cfg, uint64_t seed, TraceSink* trace = nullptr)
        : m_cfg(cfg),
          m_trace(trace),
          m_rng(seed ^ (0x9e3779b97f4a7c15ULL * (static_cast<uint64_t>(cfg.chain) + 1)))
    {
        Block genesis;
        genesis.header.chain = cfg.chain;
        genesis.header.number = 0;
        genesis.header.parentHash = ZERO_HASH;
        genesis.header.timestampMs = 0;
        sealRoots(genesis);
        genesis.header.selfHash = computeHeaderHash(genesis.header);
        m_heightByHash[genesis.header.selfHash] = 0;
        m_blocks.push_back(std::move(genesis));
    }

    const ChainConfig& config() const { return m_cfg; }
    ChainId id() const { return m_cfg.chain; }

    uint64_t headHeight() const { return m_blocks.back().header.number; }
    const Block& head() const { return m_blocks.back(); }
    const Block& blockAt(uint64_t height) const { return m_blocks.at(height); }
    size_t mempoolSize() const { return m_mempool.size(); }

    const Block* findBlock(const Hash256& blockHash) const
    {
        auto it = m_heightByHash.find(blockHash);
        if (it != m_heightByHash.end()) return &m_blocks[it->second];
        auto side = m_sideBlocks.find(blockHash);
        if (side != m_sideBlocks.end()) return &side->second;
        return nullptr;
    }

    /**
     * Locates an included transaction on the main chain; returns the block
     * and stores the intra-block index, or nullptr if never included.
     */
    const Block* findTransaction(const Hash256& txId, size_t& indexOut) const
    {
        auto it = m_txLocation.find(txId);
        if (it == m_txLocation.end()) return nullptr;
        indexOut = it->second.second;
        return &m_blocks[it->second.first];
    }

    void registerContract(const ContractAddress& addr, std::shared_ptr<Contract> contract)
    {
        m_contracts[addr.addr] = std::move(contract);
    }

    /**
     * Appends the transaction to the mempool; it will be included in the
     * next produced block.  Replays of an already-seen transaction id are
     * rejected at the mempool gate.
     */
    uint64_t submitTx(const Transaction& tx, uint64_t nowMs)
    {
        if (m_seenTxIds.count(tx.id)) throw DuplicateTxIdError();
        m_seenTxIds.insert(tx.id);
        m_mempool.push_back(tx);
        if (m_trace) m_trace->onSubmit(nowMs, m_cfg.chain, tx.id);
        return nowMs;
    }

    /**
     * Produces the next main-chain block at the given timestamp: drains the
     * mempool FIFO (up to maxTxPerBlock when configured), executes each
     * transaction through its target contract, and seals the Merkle roots.
     * Failed executions still ship in the block with a status-false receipt.
     */
    const Block& produceBlock(uint64_t timeMs)
    {
        Block block;
        block.header.chain = m_cfg.chain;
        block.header.number = headHeight() + 1;
        block.header.parentHash = head().header.selfHash;
        block.header.timestampMs = timeMs;

        size_t take = m_mempool.size();
        if (m_cfg.maxTxPerBlock > 0 && m_cfg.maxTxPerBlock < take) take = m_cfg.maxTxPerBlock;
        ExecContext ctx{m_cfg.chain, block.header.number, timeMs};
        for (size_t i = 0; i < take; ++i) {
            Transaction tx = std::move(m_mempool.front());
            m_mempool.pop_front();
            Receipt rc = executeTx(tx, ctx);
            block.transactions.push_back(std::move(tx));
            block.receipts.push_back(std::move(rc));
        }

        sealRoots(block);
        block.header.selfHash = computeHeaderHash(block.header);
        m_heightByHash[block.header.selfHash] = block.header.number;
        for (size_t i = 0; i < block.transactions.size(); ++i) {
            m_txLocation[block.transactions[i].id] = {block.header.number, i};
        }
        m_blocks.push_back(std::move(block));

        const Block& sealed = m_blocks.back();
        if (m_trace) {
            m_trace->onBlock(sealed.header, sealed.transactions.size());
            for (size_t i = 0; i < sealed.transactions.size(); ++i) {
                m_trace->onExec(timeMs, m_cfg.chain, sealed.transactions[i], sealed.receipts[i]);
            }
        }
        return sealed;
    }

    /** Main-chain confirmation count: head height minus the block's height. */
    uint64_t confirmationsOf(const Hash256& blockHash) const
    {
        auto it = m_heightByHash.find(blockHash);
        if (it == m_heightByHash.end()) {
            if (m_sideBlocks.count(blockHash)) throw NotOnMainChainError();
            throw UnknownBlockError();
        }
        return headHeight() - it->second;
    }

    /**
     * Builds `length` structurally valid blocks branching off the main chain
     * at `fromHeight`.  The caller supplies the first side block's contents
     * (trailing side blocks are empty); side contents are committed to the
     * roots but never executed, so the main ledger state is untouched.  The
     * side branch never becomes the main chain.
     */
    std::vector<BlockHeader> injectFork(uint64_t fromHeight, size_t length,
                                        std::vector<Transaction> firstBlockTxs = {},
                                        std::vector<Receipt> firstBlockReceipts = {})
    {
        if (fromHeight > headHeight()) throw InvalidHeightError();
        std::vector<BlockHeader> headers;
        Hash256 parent = m_blocks[fromHeight].header.selfHash;
        uint64_t parentTime = m_blocks[fromHeight].header.timestampMs;
        for (size_t i = 0; i < length; ++i) {
            Block side;
            side.header.chain = m_cfg.chain;
            side.header.number = fromHeight + 1 + i;
            side.header.parentHash = parent;
            // 1 ms skew keeps an empty side block from hashing identically
            // to its (equally empty) main-chain sibling
            side.header.timestampMs = parentTime + (i + 1) * m_cfg.interBlockMs() + 1;
            if (i == 0) {
                side.transactions = firstBlockTxs;
                side.receipts = firstBlockReceipts;
            }
            sealRoots(side);
            side.header.selfHash = computeHeaderHash(side.header);
            parent = side.header.selfHash;
            headers.push_back(side.header);
            m_sideBlocks[side.header.selfHash] = std::move(side);
        }
        return headers;
    }

    /** Milliseconds until the next block after the previous one. */
    uint64_t nextGapMs()
    {
        if (m_cfg.timing == BlockTiming::Fixed) return m_cfg.interBlockMs();
        // Inverse-CDF exponential draw, hand-rolled so the byte stream is
        // identical on every platform (std distributions are not pinned).
        double u = static_cast<double>(m_rng() >> 11) * 0x1.0p-53;
        double gap = -static_cast<double>(m_cfg.interBlockMs()) * std::log1p(-u);
        uint64_t ms = static_cast<uint64_t>(std::llround(gap));
        return ms == 0 ? 1 : ms;
    }

private:
    void sealRoots(Block& block)
    {
        std::vector<Bytes> txLeaves, rcLeaves;
        if (block.transactions.empty()) {
            // empty block: both trees commit to a single empty-string marker leaf
            txLeaves.push_back(Bytes{});
            rcLeaves.push_back(Bytes{});
        } else {
            for (const Transaction& tx : block.transactions) txLeaves.push_back(encodeTransaction(tx));
            for (const Receipt& rc : block.receipts) rcLeaves.push_back(encodeReceipt(rc));
        }
        block.header.txRoot = MerkleTree::build(txLeaves).root();
        block.header.receiptRoot = MerkleTree::build(rcLeaves).root();
    }

    Receipt executeTx(const Transaction& tx, const ExecContext& ctx)
    {
        Receipt rc;
        rc.txId = tx.id;
        auto it = m_contracts.find(tx.target.addr);
        if (tx.target.chain != m_cfg.chain || it == m_contracts.end()) {
            return rejectedReceipt(tx.id, "UnknownContract");
        }
        rc = it->second->execute(tx, ctx);
        rc.txId = tx.id; // contract cannot misattribute its receipt
        return rc;
    }

    ChainConfig m_cfg;
    TraceSink* m_trace;
    std::mt19937_64 m_rng;
    std::vector<Block> m_blocks; // main chain, index = height
    std::deque<Transaction> m_mempool;
    std::map<Hash256, uint64_t> m_heightByHash; // main chain only
    std::map<Hash256, Block> m_sideBlocks;      // injected fork blocks
    std::map<Hash256, std::pair<uint64_t, size_t>> m_txLocation; // tx id → (height, index)
    std::map<std::string, std::shared_ptr<Contract>> m_contracts;
    std::set<Hash256> m_seenTxIds;
};

// ============================================================================
// Scheduler
// ============================================================================

/**
 * Time-ordered event queue across all chains and agents.  Events at one
 * timestamp execute in a fixed tie-break order: scheduled submissions
 * (phase 0) before block productions (phase 1), block productions ordered
 * by chain id, and equal keys by insertion order.  This ordering, together
 * with seeded randomness, is the determinism contract of the simulation.
 */
class SimScheduler {
public:
    static constexpr int PHASE_SUBMIT = 0;
    static constexpr int PHASE_BLOCK = 1;

    using Callback = std::function<void(uint64_t timeMs)>;

    void at(uint64_t timeMs, int phase, uint64_t key, Callback cb)
    {
        m_queue.emplace(Entry{timeMs, phase, key, m_seq++, std::move(cb)});
    }

    bool empty() const { return m_queue.empty(); }
    uint64_t nextTime() const { return m_queue.top().timeMs; }

    /** Runs every event scheduled at the earliest pending timestamp. */
    uint64_t runNextBatch()
    {
        uint64_t t = nextTime();
        while (!m_queue.empty() && m_queue.top().timeMs == t) {
            Entry e = m_queue.top();
            m_queue.pop();
            e.cb(t);
        }
        return t;
    }

private:
    struct Entry {
        uint64_t timeMs;
        int phase;
        uint64_t key;
        uint64_t seq;
        Callback cb;
        bool operator>(const Entry& o) const
        {
            return std::tie(timeMs, phase, key, seq) > std::tie(o.timeMs, o.phase, o.key, o.seq);
        }
    };

    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> m_queue;
    uint64_t m_seq = 0;
};

} // namespace xchain
