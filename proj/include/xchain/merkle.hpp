// Copyright (c) 2026 The xchain developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

//
// Binary Merkle tree over transaction and receipt lists.
//
// Hashing is domain-separated to block second-preimage proof forgery:
//
//   leaf  = SHA-256(0x00 || leafBytes)
//   node  = SHA-256(0x01 || left || right)
//
// A level with an odd node count duplicates its last node.  Proofs carry the
// leaf hash, the leaf index (the search path), and the bottom-up sibling
// list.  An InclusionProofBundle pairs a transaction proof with the receipt
// proof at the same index — the same-path rule — and carries the receipt
// itself so a verifier can bind the proof to the receipt's content.
//

#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "xchain/core.hpp"
#include "xchain/hash.hpp"

namespace xchain {

struct EmptyLeavesError : std::invalid_argument {
    EmptyLeavesError() : std::invalid_argument("buildTree: leaves must be non-empty") {}
};

struct IndexOutOfRangeError : std::out_of_range {
    IndexOutOfRangeError() : std::out_of_range("proveMembership: index out of range") {}
};

struct PathMismatchError : std::invalid_argument {
    PathMismatchError() : std::invalid_argument("bundle: txProof.index != receiptProof.index") {}
};

inline Hash256 merkleLeafHash(const Bytes& bytes)
{
    Bytes buf;
    buf.reserve(1 + bytes.size());
    buf.push_back(0x00);
    buf.insert(buf.end(), bytes.begin(), bytes.end());
    return sha256(buf);
}

inline Hash256 merkleNodeHash(const Hash256& left, const Hash256& right)
{
    Bytes buf;
    buf.reserve(1 + 64);
    buf.push_back(0x01);
    buf.insert(buf.end(), left.begin(), left.end());
    buf.insert(buf.end(), right.begin(), right.end());
    return sha256(buf);
}

struct MerkleProof {
    Hash256 leafHash{};
    uint64_t index = 0;              // leaf position = the search path
    std::vector<Hash256> siblings;   // bottom-up sibling hashes

    bool operator==(const MerkleProof&) const = default;
};

/** Tree with all levels materialized; level 0 holds the leaf hashes. */
class MerkleTree {
public:
    /** Builds the tree over raw leaf byte-strings; throws EmptyLeavesError on []. */
    static MerkleTree build(const std::vector<Bytes>& leaves)
    {
        if (leaves.empty()) throw EmptyLeavesError();
        MerkleTree t;
        std::vector<Hash256> level;
        level.reserve(leaves.size());
        for (const Bytes& l : leaves) level.push_back(merkleLeafHash(l));
        t.m_levels.push_back(level);
        while (t.m_levels.back().size() > 1) {
            const std::vector<Hash256>& prev = t.m_levels.back();
            std::vector<Hash256> next;
            next.reserve((prev.size() + 1) / 2);
            for (size_t i = 0; i < prev.size(); i += 2) {
                const Hash256& left = prev[i];
                const Hash256& right = (i + 1 < prev.size()) ? prev[i + 1] : prev[i];
                next.push_back(merkleNodeHash(left, right));
            }
            t.m_levels.push_back(std::move(next));
        }
        return t;
    }

    const Hash256& root() const { return m_levels.back().front(); }
    size_t leafCount() const { return m_levels.front().size(); }
    size_t height() const { return m_levels.size() - 1; }

    /** Membership proof for the leaf at `index`; throws IndexOutOfRangeError. */
    MerkleProof proveMembership(uint64_t index) const
    {
        if (index >= leafCount()) throw IndexOutOfRangeError();
        MerkleProof proof;
        proof.leafHash = m_levels[0][index];
        proof.index = index;
        size_t pos = index;
        for (size_t lvl = 0; lvl + 1 < m_levels.size(); ++lvl) {
            const std::vector<Hash256>& nodes = m_levels[lvl];
            size_t sib = (pos % 2 == 0) ? pos + 1 : pos - 1;
            if (sib >= nodes.size()) sib = pos; // odd level: duplicated last node
            proof.siblings.push_back(nodes[sib]);
            pos /= 2;
        }
        return proof;
    }

private:
    std::vector<std::vector<Hash256>> m_levels;
};

/**
 * Folds the proof's leaf hash with its siblings along the index bits and
 * compares against the expected root.  Malformed proofs — wrong sibling
 * count for the index, index bits beyond the tree height — fold to a
 * different value or leave residual path bits, and simply return false.
 */
inline bool verifyMembership(const MerkleProof& proof, const Hash256& expectedRoot)
{
    Hash256 acc = proof.leafHash;
    uint64_t pos = proof.index;
    for (const Hash256& sib : proof.siblings) {
        acc = (pos % 2 == 0) ? merkleNodeHash(acc, sib) : merkleNodeHash(sib, acc);
        pos /= 2;
    }
    if (pos != 0) return false; // index addressed a node outside this tree
    return acc == expectedRoot;
}

/**
 * Proof material tying one transaction to one block: the transaction's
 * membership proof in the tx tree, the receipt's membership proof in the
 * receipt tree at the same position, the shared search path, the hash of
 * the containing header, and the receipt content the proof commits to.
 */
struct InclusionProofBundle {
    MerkleProof txProof;
    MerkleProof receiptProof;
    uint64_t path = 0;    // shared index of both proofs
    Hash256 blockHash{};  // selfHash of the containing header
    Receipt receipt;      // receipt content; its canonical bytes hash to receiptProof.leafHash

    bool operator==(const InclusionProofBundle&) const = default;
};

/** Constructs a bundle, enforcing the same-path rule. */
inline InclusionProofBundle makeBundle(MerkleProof txProof, MerkleProof receiptProof,
                                       Hash256 blockHash, Receipt receipt)
{
    if (txProof.index != receiptProof.index) throw PathMismatchError();
    InclusionProofBundle b;
    b.path = txProof.index;
    b.txProof = std::move(txProof);
    b.receiptProof = std::move(receiptProof);
    b.blockHash = blockHash;
    b.receipt = std::move(receipt);
    return b;
}

inline void encodeProofInto(ByteWriter& w, const MerkleProof& p)
{
    w.field(p.leafHash);
    w.fieldU64(p.index);
    w.putRawU32(static_cast<uint32_t>(p.siblings.size()));
    for (const Hash256& s : p.siblings) w.field(s);
}

inline MerkleProof decodeProofFrom(ByteReader& r)
{
    MerkleProof p;
    p.leafHash = r.fieldHash();
    p.index = r.fieldU64();
    uint32_t count = r.rawU32();
    for (uint32_t i = 0; i < count; ++i) p.siblings.push_back(r.fieldHash());
    return p;
}

inline Bytes encodeBundle(const InclusionProofBundle& b)
{
    ByteWriter w;
    encodeProofInto(w, b.txProof);
    encodeProofInto(w, b.receiptProof);
    w.fieldU64(b.path);
    w.field(b.blockHash);
    w.field(encodeReceipt(b.receipt));
    return w.take();
}

/** Decodes a bundle; the same-path rule is re-checked (DecodeError on violation). */
inline InclusionProofBundle decodeBundle(const Bytes& bytes)
{
    ByteReader r(bytes);
    InclusionProofBundle b;
    b.txProof = decodeProofFrom(r);
    b.receiptProof = decodeProofFrom(r);
    b.path = r.fieldU64();
    b.blockHash = r.fieldHash();
    b.receipt = decodeReceipt(r.field());
    r.expectEnd();
    if (b.txProof.index != b.receiptProof.index || b.path != b.txProof.index) {
        throw DecodeError("bundle: mismatched proof indices");
    }
    return b;
}

} // namespace xchain
