// Copyright (c) 2026 The xchain developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

//
// Scenario harness: JSON configuration, deterministic end-to-end simulation,
// per-transfer duration decomposition, supply auditing, and report output.
//
// A scenario wires up N chains, the authorized asset contract on each, the
// configured relays with their honest relayer clients, a population of
// agents, and a scripted list of transfers.  The simulation advances an
// integer-millisecond clock through a priority queue of events; within one
// timestamp batch the order is: scheduled submissions, block production in
// chain-id order, relayer forwarding in configuration order (only for hosts
// that produced a block), agent steps in configuration order, and finally
// metric sweeps plus the supply census.  Every run with the same config and
// seed replays the same byte stream.
//

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "xchain/agents.hpp"
#include "xchain/asset.hpp"
#include "xchain/chain.hpp"
#include "xchain/core.hpp"
#include "xchain/jsonio.hpp"
#include "xchain/relay.hpp"

namespace xchain {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ============================================================================
// Scenario configuration
// ============================================================================

struct RelaySpec {
    ChainId host = 0;
    ChainId remote = 0;
    uint32_t lagBlocks = 1;
    uint32_t holdbackBlocks = 0; // headers the relayer keeps back from the remote tip
    uint32_t feePerVerification = 0;
};

struct GenesisGrant {
    ChainId chain = 0;
    UserId user;
    uint64_t entities = 0;
};

struct AgentSpec {
    UserId user;
    std::string behavior;
    uint64_t costThreshold = 0; // RationalFinalizer only
    uint64_t activateAtMs = 0;
    ChainId remote = 0; // ForkFeedingRelayer only
    ChainId host = 0;   // ForkFeedingRelayer only
};

struct TransferSpec {
    UserId sender;
    UserId recipient;
    ChainId src = 0;
    ChainId dest = 0;
    uint32_t x = 1; // |X|
    uint32_t y = 0; // |Y|
    uint64_t submitTimeMs = 0;
};

struct ScenarioConfig {
    std::string name = "scenario";
    uint64_t seed = 0;
    int protocol = 2;
    uint64_t maxSimMs = 7200000; // safety cap; runs auto-stop when all transfers settle
    ProtocolParams params;
    std::vector<ChainConfig> chains;
    std::map<ChainId, ContractAddress> registry;
    std::vector<RelaySpec> relays;
    std::vector<GenesisGrant> genesis;
    std::vector<AgentSpec> agents;
    std::vector<TransferSpec> transfers;
};

namespace cfgdetail {

inline std::string joinPath(const std::string& base, const std::string& key)
{
    return base.empty() ? key : base + "." + key;
}

inline const nlohmann::json& require(const nlohmann::json& j, const char* key,
                                     const std::string& path)
{
    if (!j.is_object() || !j.contains(key)) {
        throw ConfigError(joinPath(path, key) + ": missing required field");
    }
    return j.at(key);
}

inline uint64_t asU64(const nlohmann::json& j, const std::string& path)
{
    if (!j.is_number_unsigned()) throw ConfigError(path + ": expected a non-negative integer");
    return j.get<uint64_t>();
}

inline double asNumber(const nlohmann::json& j, const std::string& path)
{
    if (!j.is_number()) throw ConfigError(path + ": expected a number");
    return j.get<double>();
}

inline std::string asString(const nlohmann::json& j, const std::string& path)
{
    if (!j.is_string()) throw ConfigError(path + ": expected a string");
    return j.get<std::string>();
}

inline uint64_t optU64(const nlohmann::json& j, const char* key, const std::string& path,
                       uint64_t fallback)
{
    if (!j.is_object() || !j.contains(key)) return fallback;
    return asU64(j.at(key), joinPath(path, key));
}

inline double optNumber(const nlohmann::json& j, const char* key, const std::string& path,
                        double fallback)
{
    if (!j.is_object() || !j.contains(key)) return fallback;
    return asNumber(j.at(key), joinPath(path, key));
}

inline std::string optString(const nlohmann::json& j, const char* key, const std::string& path,
                             std::string fallback)
{
    if (!j.is_object() || !j.contains(key)) return fallback;
    return asString(j.at(key), joinPath(path, key));
}

inline uint64_t secondsToMs(double seconds, const std::string& path)
{
    if (seconds < 0) throw ConfigError(path + ": must not be negative");
    return static_cast<uint64_t>(std::llround(seconds * 1000.0));
}

inline const nlohmann::json& requireArray(const nlohmann::json& j, const char* key,
                                          const std::string& path)
{
    const nlohmann::json& a = require(j, key, path);
    if (!a.is_array()) throw ConfigError(joinPath(path, key) + ": expected an array");
    return a;
}

} // namespace cfgdetail

inline ScenarioConfig parseScenario(const nlohmann::json& j)
{
    using namespace cfgdetail;
    if (!j.is_object()) throw ConfigError("scenario: expected a JSON object");
    ScenarioConfig cfg;
    cfg.name = optString(j, "name", "", "scenario");
    cfg.seed = asU64(require(j, "seed", ""), "seed");
    cfg.protocol = static_cast<int>(asU64(require(j, "protocol", ""), "protocol"));
    if (cfg.protocol != 1 && cfg.protocol != 2) throw ConfigError("protocol: must be 1 or 2");
    cfg.maxSimMs = secondsToMs(optNumber(j, "maxSimSeconds", "", 7200.0), "maxSimSeconds");

    if (j.contains("params")) {
        const nlohmann::json& p = j.at("params");
        cfg.params.claimTimeoutBlocks = optU64(p, "claimTimeoutBlocks", "params", 10);
        cfg.params.confirmTimeoutBlocks = optU64(p, "confirmTimeoutBlocks", "params", 30);
        cfg.params.feeEntityCount =
            static_cast<uint32_t>(optU64(p, "feeEntityCount", "params", 1));
        cfg.params.minConfirmations =
            static_cast<uint32_t>(optU64(p, "minConfirmations", "params", 5));
    }

    std::set<ChainId> declared;
    const nlohmann::json& chains = requireArray(j, "chains", "");
    if (chains.empty()) throw ConfigError("chains: at least one chain is required");
    for (size_t i = 0; i < chains.size(); ++i) {
        std::string path = "chains[" + std::to_string(i) + "]";
        const nlohmann::json& c = chains.at(i);
        ChainConfig cc;
        cc.chain = static_cast<ChainId>(asU64(require(c, "chain", path), path + ".chain"));
        cc.interBlockSeconds = optNumber(c, "interBlockSeconds", path, 15.0);
        if (cc.interBlockSeconds <= 0) {
            throw ConfigError(path + ".interBlockSeconds: must be positive");
        }
        cc.confirmations = static_cast<uint32_t>(
            optU64(c, "confirmations", path, cfg.params.minConfirmations));
        std::string timing = optString(c, "timing", path, "fixed");
        if (timing == "fixed") {
            cc.timing = BlockTiming::Fixed;
        } else if (timing == "exponential") {
            cc.timing = BlockTiming::Exponential;
        } else {
            throw ConfigError(path + ".timing: unknown timing mode " + timing);
        }
        cc.maxTxPerBlock = optU64(c, "maxTxPerBlock", path, 0);
        if (!declared.insert(cc.chain).second) {
            throw ConfigError(path + ".chain: duplicate chain " + std::to_string(cc.chain));
        }
        cfg.chains.push_back(cc);
    }
    auto knownChain = [&](ChainId c) { return declared.count(c) > 0; };

    const nlohmann::json& registry = requireArray(j, "registry", "");
    for (size_t i = 0; i < registry.size(); ++i) {
        std::string path = "registry[" + std::to_string(i) + "]";
        const nlohmann::json& r = registry.at(i);
        ChainId chain = static_cast<ChainId>(asU64(require(r, "chain", path), path + ".chain"));
        std::string addr = asString(require(r, "address", path), path + ".address");
        if (!knownChain(chain)) {
            throw ConfigError(path + ".chain: unknown chain " + std::to_string(chain));
        }
        if (cfg.registry.count(chain)) {
            throw ConfigError(path + ".chain: duplicate registry entry for chain " +
                              std::to_string(chain));
        }
        cfg.registry[chain] = ContractAddress{chain, addr};
    }
    for (ChainId c : declared) {
        if (!cfg.registry.count(c)) {
            throw ConfigError("registry: no asset contract declared for chain " +
                              std::to_string(c));
        }
    }

    if (j.contains("relays")) {
        const nlohmann::json& relays = j.at("relays");
        if (!relays.is_array()) throw ConfigError("relays: expected an array");
        for (size_t i = 0; i < relays.size(); ++i) {
            std::string path = "relays[" + std::to_string(i) + "]";
            const nlohmann::json& r = relays.at(i);
            RelaySpec rs;
            rs.host = static_cast<ChainId>(asU64(require(r, "host", path), path + ".host"));
            rs.remote = static_cast<ChainId>(asU64(require(r, "remote", path), path + ".remote"));
            rs.lagBlocks = static_cast<uint32_t>(optU64(r, "lagBlocks", path, 1));
            rs.holdbackBlocks = static_cast<uint32_t>(optU64(r, "holdbackBlocks", path, 0));
            rs.feePerVerification =
                static_cast<uint32_t>(optU64(r, "feePerVerification", path, 0));
            if (!knownChain(rs.host)) {
                throw ConfigError(path + ".host: unknown chain " + std::to_string(rs.host));
            }
            if (!knownChain(rs.remote)) {
                throw ConfigError(path + ".remote: unknown chain " + std::to_string(rs.remote));
            }
            if (rs.host == rs.remote) {
                throw ConfigError(path + ": a chain cannot relay itself");
            }
            cfg.relays.push_back(rs);
        }
    }

    if (j.contains("genesisOwnership")) {
        const nlohmann::json& genesis = j.at("genesisOwnership");
        if (!genesis.is_array()) throw ConfigError("genesisOwnership: expected an array");
        for (size_t i = 0; i < genesis.size(); ++i) {
            std::string path = "genesisOwnership[" + std::to_string(i) + "]";
            const nlohmann::json& g = genesis.at(i);
            GenesisGrant gg;
            gg.chain = static_cast<ChainId>(asU64(require(g, "chain", path), path + ".chain"));
            gg.user = asString(require(g, "user", path), path + ".user");
            gg.entities = asU64(require(g, "entities", path), path + ".entities");
            if (!knownChain(gg.chain)) {
                throw ConfigError(path + ".chain: unknown chain " + std::to_string(gg.chain));
            }
            cfg.genesis.push_back(std::move(gg));
        }
    }

    static const std::set<std::string> knownBehaviors = {
        "HonestSender",        "HonestRecipient",        "AltruisticFinalizer",
        "RationalFinalizer",   "ByzantineWithholder",    "ByzantineForger",
        "ByzantineDoubleClaimer", "ForkFeedingRelayer"};
    if (j.contains("agents")) {
        const nlohmann::json& agents = j.at("agents");
        if (!agents.is_array()) throw ConfigError("agents: expected an array");
        for (size_t i = 0; i < agents.size(); ++i) {
            std::string path = "agents[" + std::to_string(i) + "]";
            const nlohmann::json& a = agents.at(i);
            AgentSpec as;
            as.user = asString(require(a, "user", path), path + ".user");
            as.behavior = asString(require(a, "behavior", path), path + ".behavior");
            if (!knownBehaviors.count(as.behavior)) {
                throw ConfigError(path + ".behavior: unknown behavior " + as.behavior);
            }
            as.costThreshold = optU64(a, "costThreshold", path, 0);
            as.activateAtMs =
                secondsToMs(optNumber(a, "activateAtSeconds", path, 0.0), path + ".activateAtSeconds");
            if (as.behavior == "ForkFeedingRelayer") {
                as.remote =
                    static_cast<ChainId>(asU64(require(a, "remote", path), path + ".remote"));
                as.host = static_cast<ChainId>(asU64(require(a, "host", path), path + ".host"));
                if (!knownChain(as.remote)) {
                    throw ConfigError(path + ".remote: unknown chain " + std::to_string(as.remote));
                }
                if (!knownChain(as.host)) {
                    throw ConfigError(path + ".host: unknown chain " + std::to_string(as.host));
                }
            }
            cfg.agents.push_back(std::move(as));
        }
    }

    std::map<std::pair<ChainId, UserId>, uint64_t> budget;
    for (const GenesisGrant& g : cfg.genesis) budget[{g.chain, g.user}] += g.entities;
    if (j.contains("transfers")) {
        const nlohmann::json& transfers = j.at("transfers");
        if (!transfers.is_array()) throw ConfigError("transfers: expected an array");
        for (size_t i = 0; i < transfers.size(); ++i) {
            std::string path = "transfers[" + std::to_string(i) + "]";
            const nlohmann::json& t = transfers.at(i);
            TransferSpec ts;
            ts.sender = asString(require(t, "sender", path), path + ".sender");
            ts.recipient = asString(require(t, "recipient", path), path + ".recipient");
            ts.src = static_cast<ChainId>(asU64(require(t, "src", path), path + ".src"));
            ts.dest = static_cast<ChainId>(asU64(require(t, "dest", path), path + ".dest"));
            ts.x = static_cast<uint32_t>(optU64(t, "x", path, 1));
            ts.y = static_cast<uint32_t>(optU64(t, "y", path, 0));
            ts.submitTimeMs = secondsToMs(
                asNumber(require(t, "submitTimeSeconds", path), path + ".submitTimeSeconds"),
                path + ".submitTimeSeconds");
            if (!knownChain(ts.src)) {
                throw ConfigError(path + ".src: unknown chain " + std::to_string(ts.src));
            }
            if (!knownChain(ts.dest)) {
                throw ConfigError(path + ".dest: unknown chain " + std::to_string(ts.dest));
            }
            if (ts.src == ts.dest) throw ConfigError(path + ": src and dest must differ");
            if (ts.x == 0) throw ConfigError(path + ".x: a transfer must move at least one entity");
            auto b = budget.find({ts.src, ts.sender});
            uint64_t needed = static_cast<uint64_t>(ts.x) + ts.y;
            if (b == budget.end() || b->second < needed) {
                throw ConfigError(path + ": sender " + ts.sender +
                                  " exceeds genesis entities on chain " + std::to_string(ts.src));
            }
            b->second -= needed;
            cfg.transfers.push_back(std::move(ts));
        }
    }
    return cfg;
}

inline ScenarioConfig loadScenario(const std::string& filePath)
{
    std::ifstream in(filePath);
    if (!in) throw IoError("cannot open scenario file: " + filePath);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(filePath + ": " + e.what());
    }
    ScenarioConfig cfg = parseScenario(j);
    if (!j.contains("name")) {
        cfg.name = std::filesystem::path(filePath).stem().string();
    }
    return cfg;
}

// ============================================================================
// Transfer records and the run report
// ============================================================================

enum class TransferPhase { Pending, Burned, Claimed, Confirmed, Rejected };

inline const char* transferPhaseName(TransferPhase p)
{
    switch (p) {
    case TransferPhase::Pending: return "Pending";
    case TransferPhase::Burned: return "Burned";
    case TransferPhase::Claimed: return "Claimed";
    case TransferPhase::Confirmed: return "Confirmed";
    case TransferPhase::Rejected: return "Rejected";
    }
    return "?";
}

struct TransferRecord {
    size_t index = 0;
    TransferSpec spec;
    EntitySet X;
    EntitySet Y;
    TransferPhase phase = TransferPhase::Pending;
    std::string rejectReason;

    Hash256 burnTxId{};
    Hash256 claimTxId{};
    Hash256 confirmTxId{};

    std::optional<uint64_t> submitMs;
    std::optional<uint64_t> burnIncludedMs;
    std::optional<uint64_t> burnKConfMs;
    std::optional<uint64_t> burnRelayedMs;
    std::optional<uint64_t> claimSubmitMs;
    std::optional<uint64_t> claimIncludedMs;
    std::optional<uint64_t> claimKConfMs;
    std::optional<uint64_t> claimRelayedMs;
    std::optional<uint64_t> confirmSubmitMs;
    std::optional<uint64_t> confirmIncludedMs;
    std::optional<uint64_t> confirmKConfMs;

    uint64_t burnHeight = 0;
    uint64_t claimHeight = 0;
    uint64_t confirmHeight = 0;
    uint32_t feePaidCount = 0;
    std::string stakeOutcome = "None"; // None | Pending | ReturnedToSender | PaidToSubmitter
    std::optional<uint64_t> totalMs;
};

struct PhaseStats {
    uint64_t count = 0;
    double meanSeconds = 0.0;
    double stddevSeconds = 0.0; // population standard deviation
};

inline PhaseStats statsOf(const std::vector<double>& samplesSeconds)
{
    PhaseStats st;
    st.count = samplesSeconds.size();
    if (st.count == 0) return st;
    double sum = 0;
    for (double s : samplesSeconds) sum += s;
    st.meanSeconds = sum / static_cast<double>(st.count);
    double var = 0;
    for (double s : samplesSeconds) var += (s - st.meanSeconds) * (s - st.meanSeconds);
    st.stddevSeconds = std::sqrt(var / static_cast<double>(st.count));
    return st;
}

struct RunReport {
    std::string scenario;
    uint64_t seed = 0;
    int protocol = 2;
    uint64_t totalEntities = 0;
    uint64_t blocksProduced = 0;
    uint64_t endTimeMs = 0;
    std::vector<TransferRecord> transfers;
    // phase ("burn"/"claim"/"confirm"/"transfer") → metric → stats
    std::map<std::string, std::map<std::string, PhaseStats>> durationStats;
    std::map<std::string, OpStats> opCounts; // "burn"/"claim"/"confirm"
    std::vector<AttackOutcome> attackOutcomes;
    std::vector<std::string> invariantViolations;
    std::vector<std::string> warnings;
    std::vector<std::string> traceLines;

    nlohmann::ordered_json toJson() const;
};

namespace reportdetail {

inline nlohmann::ordered_json optMs(const std::optional<uint64_t>& v)
{
    if (!v) return nullptr;
    return *v;
}

inline nlohmann::ordered_json txIdJson(const Hash256& id)
{
    if (id == Hash256{}) return nullptr;
    return toHex(id);
}

} // namespace reportdetail

inline nlohmann::ordered_json RunReport::toJson() const
{
    using reportdetail::optMs;
    using reportdetail::txIdJson;
    nlohmann::ordered_json j;
    j["scenario"] = scenario;
    j["seed"] = seed;
    j["protocol"] = protocol;
    j["totalEntities"] = totalEntities;
    j["blocksProduced"] = blocksProduced;
    j["endTimeMs"] = endTimeMs;

    uint64_t claimed = 0, confirmed = 0, rejected = 0, pending = 0;
    for (const TransferRecord& r : transfers) {
        switch (r.phase) {
        case TransferPhase::Claimed: ++claimed; break;
        case TransferPhase::Confirmed: ++confirmed; break;
        case TransferPhase::Rejected: ++rejected; break;
        default: ++pending; break;
        }
    }
    j["summary"] = {{"transfers", transfers.size()},
                    {"claimed", claimed},
                    {"confirmed", confirmed},
                    {"rejected", rejected},
                    {"unfinished", pending}};

    nlohmann::ordered_json stats;
    for (const auto& [phase, metrics] : durationStats) {
        nlohmann::ordered_json m;
        for (const auto& [metric, st] : metrics) {
            m[metric] = {{"count", st.count},
                         {"meanSeconds", st.meanSeconds},
                         {"stddevSeconds", st.stddevSeconds}};
        }
        stats[phase] = std::move(m);
    }
    j["durationStats"] = std::move(stats);

    nlohmann::ordered_json ops;
    for (const auto& [method, st] : opCounts) {
        ops[method] = {{"count", st.count}, {"totalOps", st.totalOps}, {"meanOps", st.meanOps()}};
    }
    j["opCounts"] = std::move(ops);

    nlohmann::ordered_json attacks = nlohmann::ordered_json::array();
    for (const AttackOutcome& a : attackOutcomes) {
        nlohmann::ordered_json codes;
        for (const auto& [code, n] : a.rejectionCodes) codes[code] = n;
        attacks.push_back({{"attack", a.attack},
                           {"attempted", a.attempted},
                           {"succeeded", a.succeeded},
                           {"rejectionCodes", std::move(codes)}});
    }
    j["attackOutcomes"] = std::move(attacks);
    j["invariantViolations"] = invariantViolations;
    j["warnings"] = warnings;

    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const TransferRecord& r : transfers) {
        nlohmann::ordered_json row;
        row["index"] = r.index;
        row["sender"] = r.spec.sender;
        row["recipient"] = r.spec.recipient;
        row["src"] = r.spec.src;
        row["dest"] = r.spec.dest;
        row["xCount"] = r.spec.x;
        row["yCount"] = r.spec.y;
        row["phase"] = transferPhaseName(r.phase);
        row["rejectReason"] = r.rejectReason;
        row["burnTx"] = txIdJson(r.burnTxId);
        row["claimTx"] = txIdJson(r.claimTxId);
        row["confirmTx"] = txIdJson(r.confirmTxId);
        row["submitMs"] = optMs(r.submitMs);
        row["burnIncludedMs"] = optMs(r.burnIncludedMs);
        row["burnKConfMs"] = optMs(r.burnKConfMs);
        row["burnRelayedMs"] = optMs(r.burnRelayedMs);
        row["claimSubmitMs"] = optMs(r.claimSubmitMs);
        row["claimIncludedMs"] = optMs(r.claimIncludedMs);
        row["claimKConfMs"] = optMs(r.claimKConfMs);
        row["claimRelayedMs"] = optMs(r.claimRelayedMs);
        row["confirmSubmitMs"] = optMs(r.confirmSubmitMs);
        row["confirmIncludedMs"] = optMs(r.confirmIncludedMs);
        row["confirmKConfMs"] = optMs(r.confirmKConfMs);
        row["feeEntityCount"] = r.feePaidCount;
        row["stakeOutcome"] = r.stakeOutcome;
        row["totalMs"] = optMs(r.totalMs);
        rows.push_back(std::move(row));
    }
    j["transfers"] = std::move(rows);
    return j;
}

// ============================================================================
// Simulation
// ============================================================================

class Simulation : public TraceSink {
public:
    explicit Simulation(ScenarioConfig config) : m_config(std::move(config))
    {
        for (const ChainConfig& cc : m_config.chains) {
            m_sims[cc.chain] = std::make_unique<ChainSim>(cc, m_config.seed, this);
        }
        for (const auto& [chainId, addr] : m_config.registry) {
            AssetLedger ledger;
            ledger.chain = chainId;
            ledger.self = addr;
            ledger.registry = m_config.registry;
            ledger.params = m_config.params;
            auto contract = std::make_shared<AssetContract>(std::move(ledger));
            m_assets[chainId] = contract;
            m_sims.at(chainId)->registerContract(addr, contract);
        }
        for (const RelaySpec& rs : m_config.relays) {
            ContractAddress addr{rs.host, "relay@" + std::to_string(rs.host) + "/" +
                                              std::to_string(rs.remote)};
            auto contract = std::make_shared<RelayContract>(
                RelayState(rs.host, rs.remote, m_sims.at(rs.remote)->blockAt(0).header,
                           rs.lagBlocks, rs.feePerVerification));
            contract->setSyncHook(
                [this](uint64_t timeMs, ChainId host, ChainId remote, uint64_t mainHead) {
                    onRelaySync(timeMs, host, remote, mainHead);
                });
            m_relayContracts[{rs.host, rs.remote}] = contract;
            m_sims.at(rs.host)->registerContract(addr, contract);
            m_assets.at(rs.host)->setRelay(rs.remote, contract);
            m_view.addRelay(rs.host, rs.remote, contract.get(), addr);
            m_relayers.push_back(std::make_unique<RelayerClient>(
                "relayer:" + std::to_string(rs.host) + "/" + std::to_string(rs.remote),
                m_sims.at(rs.remote).get(), m_sims.at(rs.host).get(), addr, rs.lagBlocks,
                rs.holdbackBlocks));
            m_relayerHosts.push_back(rs.host);
        }

        EntityId next = 0;
        for (const GenesisGrant& g : m_config.genesis) {
            EntitySet s;
            for (uint64_t i = 0; i < g.entities; ++i) s.insert(next++);
            m_assets.at(g.chain)->ledger().grantGenesis(g.user, s);
        }
        m_expectedSupply = next;

        nlohmann::ordered_json meta;
        meta["kind"] = "meta";
        meta["scenario"] = m_config.name;
        meta["seed"] = m_config.seed;
        meta["protocol"] = m_config.protocol;
        meta["expectedSupply"] = m_expectedSupply;
        nlohmann::ordered_json reg = nlohmann::ordered_json::array();
        for (const auto& [chainId, addr] : m_config.registry) {
            reg.push_back({{"chain", chainId}, {"address", addr.addr}});
        }
        meta["registry"] = std::move(reg);
        m_traceLines.push_back(meta.dump());

        for (auto& [c, sim] : m_sims) m_view.addChain(sim.get());
        m_view.setRegistry(m_config.registry);
        m_view.setProtocol(m_config.params, m_config.protocol);

        std::map<ChainId, ChainSim*> mutableChains;
        for (auto& [c, sim] : m_sims) mutableChains[c] = sim.get();
        m_wallet = std::make_unique<Wallet>(std::move(mutableChains));

        for (const AgentSpec& a : m_config.agents) m_agents.push_back(makeAgent(a));

        for (size_t i = 0; i < m_config.transfers.size(); ++i) {
            TransferRecord rec;
            rec.index = i;
            rec.spec = m_config.transfers[i];
            m_records.push_back(std::move(rec));
        }

        for (auto& [c, sim] : m_sims) scheduleNextBlock(c, 0);
        for (size_t i = 0; i < m_records.size(); ++i) {
            m_scheduler.at(m_records[i].spec.submitTimeMs, SimScheduler::PHASE_SUBMIT, i,
                           [this, i](uint64_t t) { submitTransfer(i, t); });
        }
    }

    // ---- manual stepping (attack harness / tests) --------------------------

    ChainSim& chain(ChainId c) { return *m_sims.at(c); }
    AssetContract& asset(ChainId c) { return *m_assets.at(c); }

    std::shared_ptr<RelayContract> relayContract(ChainId host, ChainId remote) const
    {
        auto it = m_relayContracts.find({host, remote});
        return it == m_relayContracts.end() ? nullptr : it->second;
    }
    Wallet& wallet() { return *m_wallet; }
    const PublicView& view() const { return m_view; }
    const ScenarioConfig& config() const { return m_config; }
    const std::vector<TransferRecord>& records() const { return m_records; }
    const std::vector<std::string>& violations() const { return m_violations; }
    uint64_t nowMs() const { return m_nowMs; }

    void deployContract(ChainId c, const ContractAddress& addr, std::shared_ptr<Contract> contract)
    {
        m_sims.at(c)->registerContract(addr, contract);
    }

    void addAgent(std::unique_ptr<Agent> agent) { m_agents.push_back(std::move(agent)); }

    void addAttackOutcome(AttackOutcome outcome) { m_attackOutcomes.push_back(std::move(outcome)); }

    /** Runs one timestamp batch (all due events) plus the post-batch hooks. */
    uint64_t advanceBatch()
    {
        uint64_t t = m_scheduler.runNextBatch();
        m_nowMs = t;
        afterBatch(t);
        return t;
    }

    void advanceUntilMs(uint64_t untilMs)
    {
        while (!m_scheduler.empty() && m_scheduler.nextTime() <= untilMs) advanceBatch();
    }

    /** Advances until `c` has grown by `blocks` more blocks. */
    void advanceBlocks(ChainId c, uint64_t blocks)
    {
        uint64_t target = m_sims.at(c)->headHeight() + blocks;
        while (!m_scheduler.empty() && m_sims.at(c)->headHeight() < target) advanceBatch();
    }

    // ---- full run -----------------------------------------------------------

    RunReport run()
    {
        while (!m_scheduler.empty()) {
            if (allTerminal()) break;
            if (m_scheduler.nextTime() > m_config.maxSimMs) break;
            advanceBatch();
        }
        return finalize();
    }

    RunReport finalize()
    {
        RunReport rep;
        rep.scenario = m_config.name;
        rep.seed = m_config.seed;
        rep.protocol = m_config.protocol;
        rep.totalEntities = m_expectedSupply;
        rep.blocksProduced = m_blocksProduced;
        rep.endTimeMs = m_nowMs;

        for (TransferRecord& rec : m_records) {
            if (rec.phase == TransferPhase::Rejected) continue;
            if (m_config.protocol == 1) {
                if (rec.phase == TransferPhase::Claimed && rec.claimKConfMs) {
                    rec.totalMs = *rec.claimKConfMs - *rec.submitMs;
                }
            } else {
                if (rec.phase == TransferPhase::Confirmed && rec.confirmKConfMs) {
                    rec.totalMs = *rec.confirmKConfMs - *rec.submitMs;
                }
            }
            if (!recordTerminal(rec)) {
                m_warnings.push_back("transfer " + std::to_string(rec.index) +
                                     " did not finish (phase " + transferPhaseName(rec.phase) +
                                     ")");
            }
            if (m_config.protocol == 1 && !rec.Y.empty()) {
                m_warnings.push_back("transfer " + std::to_string(rec.index) +
                                     ": stake stays locked (no confirm step in the base protocol)");
            }
        }

        auto sample = [](std::vector<double>& v, const std::optional<uint64_t>& from,
                         const std::optional<uint64_t>& to) {
            if (from && to) v.push_back(static_cast<double>(*to - *from) / 1000.0);
        };
        std::vector<double> bi, bc, br, ci, cc, cr, fi, fc, total;
        for (const TransferRecord& r : m_records) {
            sample(bi, r.submitMs, r.burnIncludedMs);
            sample(bc, r.burnIncludedMs, r.burnKConfMs);
            sample(br, r.burnKConfMs, r.burnRelayedMs);
            sample(ci, r.claimSubmitMs, r.claimIncludedMs);
            sample(cc, r.claimIncludedMs, r.claimKConfMs);
            sample(cr, r.claimKConfMs, r.claimRelayedMs);
            sample(fi, r.confirmSubmitMs, r.confirmIncludedMs);
            sample(fc, r.confirmIncludedMs, r.confirmKConfMs);
            if (r.totalMs) total.push_back(static_cast<double>(*r.totalMs) / 1000.0);
        }
        rep.durationStats["burn"]["inclusion"] = statsOf(bi);
        rep.durationStats["burn"]["confirmation"] = statsOf(bc);
        rep.durationStats["burn"]["relay"] = statsOf(br);
        rep.durationStats["claim"]["inclusion"] = statsOf(ci);
        rep.durationStats["claim"]["confirmation"] = statsOf(cc);
        rep.durationStats["claim"]["relay"] = statsOf(cr);
        rep.durationStats["confirm"]["inclusion"] = statsOf(fi);
        rep.durationStats["confirm"]["confirmation"] = statsOf(fc);
        rep.durationStats["transfer"]["total"] = statsOf(total);

        static const std::map<uint8_t, std::string> methodNames = {
            {0x01, "burn"}, {0x02, "claim"}, {0x03, "confirm"}};
        for (const auto& [tag, name] : methodNames) {
            OpStats agg;
            for (const auto& [chainId, asset] : m_assets) {
                auto it = asset->opStats().find(tag);
                if (it == asset->opStats().end()) continue;
                agg.count += it->second.count;
                agg.totalOps += it->second.totalOps;
            }
            rep.opCounts[name] = agg;
        }

        rep.attackOutcomes = m_attackOutcomes;
        rep.invariantViolations = m_violations;
        rep.warnings = m_warnings;
        rep.transfers = m_records;
        rep.traceLines = m_traceLines;
        return rep;
    }

    // ---- trace sink ---------------------------------------------------------

    void onSubmit(uint64_t timeMs, ChainId chainId, const Hash256& txId) override
    {
        m_submitTimes[txId] = timeMs;
        nlohmann::ordered_json e;
        e["time"] = timeMs;
        e["kind"] = "submit";
        e["chain"] = chainId;
        e["tx"] = toHex(txId);
        m_traceLines.push_back(e.dump());
    }

    void onBlock(const BlockHeader& header, size_t txCount) override
    {
        ++m_blocksProduced;
        nlohmann::ordered_json e;
        e["time"] = header.timestampMs;
        e["kind"] = "block";
        e["chain"] = header.chain;
        e["height"] = header.number;
        e["hash"] = toHex(header.selfHash);
        e["txCount"] = txCount;
        m_traceLines.push_back(e.dump());
    }

    void onExec(uint64_t timeMs, ChainId chainId, const Transaction& tx,
                const Receipt& rc) override
    {
        uint8_t tag = tx.payload.empty() ? 0 : tx.payload[0];
        std::string method = "other";
        std::string ref;
        switch (static_cast<MethodTag>(tag)) {
        case MethodTag::Burn: method = "burn"; break;
        case MethodTag::Claim:
            method = "claim";
            try {
                ref = toHex(decodeClaimPayload(tx.payload).burnTx.id);
            } catch (const DecodeError&) {
            }
            break;
        case MethodTag::Confirm:
            method = "confirm";
            try {
                ref = toHex(decodeConfirmPayload(tx.payload).claimTx.id);
            } catch (const DecodeError&) {
            }
            break;
        case MethodTag::RelayHeader: method = "relay-header"; break;
        default: break;
        }

        nlohmann::ordered_json e;
        e["time"] = timeMs;
        e["kind"] = "exec";
        e["chain"] = chainId;
        e["tx"] = toHex(tx.id);
        e["target"] = tx.target.addr;
        e["method"] = method;
        e["status"] = rc.status;
        e["code"] = rc.status ? "" : receiptCode(rc);
        if (!ref.empty()) e["ref"] = ref;
        m_traceLines.push_back(e.dump());

        bool authorized = false;
        auto reg = m_config.registry.find(chainId);
        if (reg != m_config.registry.end()) authorized = (tx.target == reg->second);
        if (!authorized) return;

        switch (static_cast<MethodTag>(tag)) {
        case MethodTag::Burn: onBurnExec(timeMs, chainId, tx, rc); break;
        case MethodTag::Claim: onClaimExec(timeMs, chainId, tx, rc); break;
        case MethodTag::Confirm: onConfirmExec(timeMs, chainId, tx, rc); break;
        default: break;
        }
    }

private:
    // ---- wiring helpers ------------------------------------------------------

    std::unique_ptr<Agent> makeAgent(const AgentSpec& s)
    {
        if (s.behavior == "HonestSender") return std::make_unique<HonestSender>(s.user, s.activateAtMs);
        if (s.behavior == "HonestRecipient") {
            return std::make_unique<HonestRecipient>(s.user, s.activateAtMs);
        }
        if (s.behavior == "AltruisticFinalizer") {
            return std::make_unique<AltruisticFinalizer>(s.user, s.activateAtMs);
        }
        if (s.behavior == "RationalFinalizer") {
            return std::make_unique<RationalFinalizer>(s.user, s.costThreshold, s.activateAtMs);
        }
        if (s.behavior == "ByzantineWithholder") {
            return std::make_unique<ByzantineWithholder>(s.user, s.activateAtMs);
        }
        if (s.behavior == "ByzantineForger") {
            return std::make_unique<ByzantineForger>(s.user, s.activateAtMs);
        }
        if (s.behavior == "ByzantineDoubleClaimer") {
            return std::make_unique<ByzantineDoubleClaimer>(s.user, s.activateAtMs);
        }
        if (s.behavior == "ForkFeedingRelayer") {
            return std::make_unique<ForkFeedingRelayer>(s.user, m_sims.at(s.remote).get(), s.host,
                                                        s.activateAtMs);
        }
        throw ConfigError("agents: unknown behavior " + s.behavior);
    }

    void scheduleNextBlock(ChainId c, uint64_t fromMs)
    {
        m_scheduler.at(fromMs + m_sims.at(c)->nextGapMs(), SimScheduler::PHASE_BLOCK, c,
                       [this, c](uint64_t t) {
                           m_sims.at(c)->produceBlock(t);
                           m_producedThisBatch.insert(c);
                           scheduleNextBlock(c, t);
                       });
    }

    // ---- the transfer driver -------------------------------------------------

    void submitTransfer(size_t index, uint64_t t)
    {
        TransferRecord& rec = m_records[index];
        const TransferSpec& spec = rec.spec;
        AssetLedger& ledger = m_assets.at(spec.src)->ledger();
        EntitySet& earmarked = m_earmarked[{spec.src, spec.sender}];

        uint64_t needed = static_cast<uint64_t>(spec.x) + spec.y;
        EntitySet chosen;
        auto ownedIt = ledger.owned.find(spec.sender);
        if (ownedIt != ledger.owned.end()) {
            for (EntityId e : ownedIt->second) {
                if (earmarked.count(e)) continue;
                chosen.insert(e);
                if (chosen.size() == needed) break;
            }
        }
        if (chosen.size() < needed) {
            rec.phase = TransferPhase::Rejected;
            rec.rejectReason = "InsufficientEntities";
            m_warnings.push_back("transfer " + std::to_string(index) + ": sender " + spec.sender +
                                 " lacks free entities on chain " + std::to_string(spec.src));
            return;
        }

        auto it = chosen.begin();
        for (uint32_t i = 0; i < spec.x; ++i) rec.X.insert(*it++);
        for (uint32_t i = 0; i < spec.y; ++i) rec.Y.insert(*it++);
        earmarked.insert(chosen.begin(), chosen.end());

        BurnPayload payload{spec.recipient, spec.dest, rec.X, rec.Y};
        Transaction tx = m_wallet->submit(spec.sender, m_config.registry.at(spec.src),
                                          encodeBurnPayload(payload), t);
        rec.burnTxId = tx.id;
        rec.submitMs = t;
        m_recordByBurnId[tx.id] = index;
    }

    void unearmark(const TransferRecord& rec)
    {
        EntitySet& earmarked = m_earmarked[{rec.spec.src, rec.spec.sender}];
        for (EntityId e : rec.X) earmarked.erase(e);
        for (EntityId e : rec.Y) earmarked.erase(e);
    }

    // ---- per-execution bookkeeping --------------------------------------------

    void onBurnExec(uint64_t timeMs, ChainId chainId, const Transaction& tx, const Receipt& rc)
    {
        // supply accounting covers every burn at an authorized contract, not
        // just the scripted ones, so manually driven runs stay auditable
        if (rc.status) {
            try {
                const BurnPayload p = decodeBurnPayload(tx.payload);
                m_inTransit.insert(p.X.begin(), p.X.end());
            } catch (const DecodeError&) {
            }
        }
        auto it = m_recordByBurnId.find(tx.id);
        if (it == m_recordByBurnId.end()) return;
        TransferRecord& rec = m_records[it->second];
        unearmark(rec);
        if (!rc.status) {
            rec.phase = TransferPhase::Rejected;
            rec.rejectReason = receiptCode(rc);
            return;
        }
        rec.phase = TransferPhase::Burned;
        rec.burnIncludedMs = timeMs;
        rec.burnHeight = m_sims.at(chainId)->headHeight();
        m_kconfWatches.push_back({chainId, rec.burnHeight, it->second, Slot::BurnKConf});
        m_relayWatches.push_back(
            {rec.spec.dest, chainId, rec.burnHeight, it->second, Slot::BurnRelayed});
    }

    void onClaimExec(uint64_t timeMs, ChainId chainId, const Transaction& tx, const Receipt& rc)
    {
        if (!rc.status) return;
        Hash256 burnId;
        try {
            const ClaimPayload cp = decodeClaimPayload(tx.payload);
            burnId = cp.burnTx.id;
            // a successful claim at the authorized contract consumes the burn
            const BurnPayload bp = decodeBurnPayload(cp.burnTx.payload);
            for (EntityId e : bp.X) m_inTransit.erase(e);
        } catch (const DecodeError&) {
            return;
        }
        auto it = m_recordByBurnId.find(burnId);
        if (it == m_recordByBurnId.end()) return;
        TransferRecord& rec = m_records[it->second];
        rec.phase = TransferPhase::Claimed;
        rec.claimTxId = tx.id;
        rec.claimSubmitMs = m_submitTimes.at(tx.id);
        rec.claimIncludedMs = timeMs;
        rec.claimHeight = m_sims.at(chainId)->headHeight();
        std::string code = receiptCode(rc);
        if (code.rfind("FeePaid:", 0) == 0) {
            rec.feePaidCount = static_cast<uint32_t>(
                1 + std::count(code.begin(), code.end(), ','));
        }
        if (m_config.protocol == 2 && !rec.Y.empty()) rec.stakeOutcome = "Pending";
        m_recordByClaimId[tx.id] = it->second;
        m_kconfWatches.push_back({chainId, rec.claimHeight, it->second, Slot::ClaimKConf});
        if (m_config.protocol == 2) {
            m_relayWatches.push_back(
                {rec.spec.src, chainId, rec.claimHeight, it->second, Slot::ClaimRelayed});
        }
    }

    void onConfirmExec(uint64_t timeMs, ChainId chainId, const Transaction& tx, const Receipt& rc)
    {
        if (!rc.status) return;
        Hash256 claimId;
        try {
            claimId = decodeConfirmPayload(tx.payload).claimTx.id;
        } catch (const DecodeError&) {
            return;
        }
        auto it = m_recordByClaimId.find(claimId);
        if (it == m_recordByClaimId.end()) return;
        TransferRecord& rec = m_records[it->second];
        rec.phase = TransferPhase::Confirmed;
        rec.confirmTxId = tx.id;
        rec.confirmSubmitMs = m_submitTimes.at(tx.id);
        rec.confirmIncludedMs = timeMs;
        rec.confirmHeight = m_sims.at(chainId)->headHeight();
        std::string code = receiptCode(rc);
        if (rec.Y.empty()) {
            rec.stakeOutcome = "None";
        } else if (code.rfind("StakeToSubmitter:", 0) == 0) {
            rec.stakeOutcome = "PaidToSubmitter";
        } else {
            rec.stakeOutcome = "ReturnedToSender";
        }
        m_kconfWatches.push_back({chainId, rec.confirmHeight, it->second, Slot::ConfirmKConf});
    }

    // ---- post-batch hooks ------------------------------------------------------

    void onRelaySync(uint64_t timeMs, ChainId host, ChainId remote, uint64_t mainHead)
    {
        nlohmann::ordered_json e;
        e["time"] = timeMs;
        e["kind"] = "relay";
        e["host"] = host;
        e["remote"] = remote;
        e["mainHead"] = mainHead;
        m_traceLines.push_back(e.dump());

        uint32_t k = m_config.params.minConfirmations;
        for (auto it = m_relayWatches.begin(); it != m_relayWatches.end();) {
            if (it->host == host && it->remote == remote && mainHead >= it->remoteHeight + k) {
                setSlot(m_records[it->record], it->slot, timeMs);
                it = m_relayWatches.erase(it);
            } else {
                ++it;
            }
        }
    }

    void afterBatch(uint64_t t)
    {
        if (m_producedThisBatch.empty()) return;
        for (size_t i = 0; i < m_relayers.size(); ++i) {
            if (m_producedThisBatch.count(m_relayerHosts[i])) m_relayers[i]->step(t);
        }
        for (auto& agent : m_agents) agent->step(m_view, *m_wallet, t);
        sweepKConf();
        census(t);
        m_producedThisBatch.clear();
    }

    void sweepKConf()
    {
        uint32_t k = m_config.params.minConfirmations;
        for (auto it = m_kconfWatches.begin(); it != m_kconfWatches.end();) {
            const ChainSim& sim = *m_sims.at(it->chain);
            if (sim.headHeight() >= it->height + k) {
                uint64_t at = sim.blockAt(it->height + k).header.timestampMs;
                setSlot(m_records[it->record], it->slot, at);
                it = m_kconfWatches.erase(it);
            } else {
                ++it;
            }
        }
    }

    void census(uint64_t t)
    {
        std::vector<const AssetLedger*> ledgers;
        for (const auto& [chainId, asset] : m_assets) ledgers.push_back(&asset->ledger());
        SupplyCensus c = censusSupply(ledgers, m_inTransit);
        bool ok = c.total() == m_expectedSupply && c.violations.empty();

        nlohmann::ordered_json e;
        e["time"] = t;
        e["kind"] = "supply";
        e["owned"] = c.ownedCount;
        e["locked"] = c.lockedCount;
        e["inTransit"] = c.inTransitCount;
        e["total"] = c.total();
        e["expected"] = m_expectedSupply;
        e["ok"] = ok;
        m_traceLines.push_back(e.dump());

        if (!ok) {
            if (c.total() != m_expectedSupply) {
                m_violations.push_back("t=" + std::to_string(t) + "ms: accounted supply " +
                                       std::to_string(c.total()) + " != expected " +
                                       std::to_string(m_expectedSupply));
            }
            for (const std::string& v : c.violations) {
                m_violations.push_back("t=" + std::to_string(t) + "ms: " + v);
            }
        }
    }

    // ---- completion ------------------------------------------------------------

    enum class Slot { BurnKConf, BurnRelayed, ClaimKConf, ClaimRelayed, ConfirmKConf };

    struct KConfWatch {
        ChainId chain;
        uint64_t height;
        size_t record;
        Slot slot;
    };

    struct RelayWatch {
        ChainId host;
        ChainId remote;
        uint64_t remoteHeight;
        size_t record;
        Slot slot;
    };

    static void setSlot(TransferRecord& rec, Slot slot, uint64_t timeMs)
    {
        switch (slot) {
        case Slot::BurnKConf: rec.burnKConfMs = timeMs; break;
        case Slot::BurnRelayed: rec.burnRelayedMs = timeMs; break;
        case Slot::ClaimKConf: rec.claimKConfMs = timeMs; break;
        case Slot::ClaimRelayed: rec.claimRelayedMs = timeMs; break;
        case Slot::ConfirmKConf: rec.confirmKConfMs = timeMs; break;
        }
    }

    bool recordTerminal(const TransferRecord& rec) const
    {
        switch (rec.phase) {
        case TransferPhase::Rejected: return true;
        case TransferPhase::Claimed:
            return m_config.protocol == 1 && rec.claimKConfMs.has_value();
        case TransferPhase::Confirmed: return rec.confirmKConfMs.has_value();
        default: return false;
        }
    }

    bool allTerminal() const
    {
        for (const TransferRecord& rec : m_records) {
            if (!recordTerminal(rec)) return false;
        }
        return true;
    }

    // ---- state -----------------------------------------------------------------

    ScenarioConfig m_config;
    std::map<ChainId, std::unique_ptr<ChainSim>> m_sims;
    std::map<ChainId, std::shared_ptr<AssetContract>> m_assets;
    std::map<std::pair<ChainId, ChainId>, std::shared_ptr<RelayContract>> m_relayContracts;
    std::vector<std::unique_ptr<RelayerClient>> m_relayers;
    std::vector<ChainId> m_relayerHosts;
    std::vector<std::unique_ptr<Agent>> m_agents;
    std::unique_ptr<Wallet> m_wallet;
    PublicView m_view;
    SimScheduler m_scheduler;

    std::vector<TransferRecord> m_records;
    std::map<Hash256, size_t> m_recordByBurnId;
    std::map<Hash256, size_t> m_recordByClaimId;
    std::map<Hash256, uint64_t> m_submitTimes;
    std::map<std::pair<ChainId, UserId>, EntitySet> m_earmarked;
    EntitySet m_inTransit;
    uint64_t m_expectedSupply = 0;
    uint64_t m_blocksProduced = 0;
    uint64_t m_nowMs = 0;

    std::set<ChainId> m_producedThisBatch;
    std::vector<KConfWatch> m_kconfWatches;
    std::vector<RelayWatch> m_relayWatches;

    std::vector<std::string> m_traceLines;
    std::vector<std::string> m_violations;
    std::vector<std::string> m_warnings;
    std::vector<AttackOutcome> m_attackOutcomes;
};

inline RunReport runScenario(const ScenarioConfig& config)
{
    Simulation sim(config);
    return sim.run();
}

// ============================================================================
// Report emission
// ============================================================================

namespace reportdetail {

inline void writeFile(const std::filesystem::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << content;
    if (!out) throw IoError("write failed: " + path.string());
}

inline std::string csvOpt(const std::optional<uint64_t>& v)
{
    return v ? std::to_string(*v) : std::string{};
}

inline std::string csvTx(const Hash256& id)
{
    return id == Hash256{} ? std::string{} : toHex(id);
}

} // namespace reportdetail

inline constexpr const char* TRANSFERS_CSV_HEADER =
    "index,sender,recipient,src,dest,xCount,yCount,phase,rejectReason,"
    "burnTx,claimTx,confirmTx,"
    "submitMs,burnIncludedMs,burnKConfMs,burnRelayedMs,"
    "claimSubmitMs,claimIncludedMs,claimKConfMs,claimRelayedMs,"
    "confirmSubmitMs,confirmIncludedMs,confirmKConfMs,"
    "feeEntityCount,stakeOutcome,totalMs";

inline std::string transfersCsv(const RunReport& report)
{
    using reportdetail::csvOpt;
    using reportdetail::csvTx;
    std::string out = TRANSFERS_CSV_HEADER;
    out.push_back('\n');
    for (const TransferRecord& r : report.transfers) {
        std::ostringstream row;
        row << r.index << ',' << r.spec.sender << ',' << r.spec.recipient << ',' << r.spec.src
            << ',' << r.spec.dest << ',' << r.spec.x << ',' << r.spec.y << ','
            << transferPhaseName(r.phase) << ',' << r.rejectReason << ',' << csvTx(r.burnTxId)
            << ',' << csvTx(r.claimTxId) << ',' << csvTx(r.confirmTxId) << ','
            << csvOpt(r.submitMs) << ',' << csvOpt(r.burnIncludedMs) << ','
            << csvOpt(r.burnKConfMs) << ',' << csvOpt(r.burnRelayedMs) << ','
            << csvOpt(r.claimSubmitMs) << ',' << csvOpt(r.claimIncludedMs) << ','
            << csvOpt(r.claimKConfMs) << ',' << csvOpt(r.claimRelayedMs) << ','
            << csvOpt(r.confirmSubmitMs) << ',' << csvOpt(r.confirmIncludedMs) << ','
            << csvOpt(r.confirmKConfMs) << ',' << r.feePaidCount << ',' << r.stakeOutcome << ','
            << csvOpt(r.totalMs) << '\n';
        out += row.str();
    }
    return out;
}

// ============================================================================
// Trace replay
// ============================================================================

struct ReplaySummary {
    uint64_t lines = 0;
    uint64_t blocks = 0;
    uint64_t executions = 0;
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
};

/**
 * Re-checks a recorded trace against the protocol's ground rules without any
 * access to the simulation that produced it: per-chain block heights must be
 * contiguous, time must not run backwards, every executed transaction must
 * have been submitted, every successful claim must reference a previously
 * successful burn (and each burn may be claimed once), every successful
 * confirm must reference a previously successful claim (each claim confirmed
 * once), and every recorded supply audit must hold.
 */
inline ReplaySummary replayTrace(std::istream& in)
{
    ReplaySummary out;
    std::string line;
    uint64_t lineNo = 0;
    bool sawMeta = false;
    uint64_t expectedSupply = 0;
    std::map<ChainId, std::string> registry;
    std::map<ChainId, uint64_t> lastHeight;
    uint64_t lastTime = 0;
    std::set<std::string> submitted;
    std::set<std::string> burnedOk;
    std::set<std::string> claimedBurns;
    std::set<std::string> claimOkIds;
    std::set<std::string> confirmedClaims;

    auto complain = [&](const std::string& msg) {
        out.violations.push_back("line " + std::to_string(lineNo) + ": " + msg);
    };

    while (std::getline(in, line)) {
        ++lineNo;
        if (line.empty()) continue;
        nlohmann::json e;
        try {
            e = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error&) {
            complain("not valid JSON");
            continue;
        }
        ++out.lines;
        std::string kind = e.value("kind", "");

        if (kind == "meta") {
            if (lineNo != 1) {
                complain("metadata must be the first record");
                continue;
            }
            sawMeta = true;
            expectedSupply = e.value("expectedSupply", uint64_t{0});
            if (e.contains("registry")) {
                for (const auto& r : e.at("registry")) {
                    registry[r.value("chain", ChainId{0})] = r.value("address", "");
                }
            }
            continue;
        }
        if (lineNo == 1) complain("first record must be the run metadata");

        uint64_t t = e.value("time", uint64_t{0});
        if (t < lastTime) complain("time went backwards");
        lastTime = t;

        if (kind == "submit") {
            submitted.insert(e.value("tx", ""));
        } else if (kind == "block") {
            ++out.blocks;
            ChainId c = e.value("chain", ChainId{0});
            uint64_t h = e.value("height", uint64_t{0});
            auto it = lastHeight.find(c);
            uint64_t expect = it == lastHeight.end() ? 1 : it->second + 1;
            if (h != expect) {
                complain("chain " + std::to_string(c) + " height " + std::to_string(h) +
                         " is not contiguous (expected " + std::to_string(expect) + ")");
            }
            lastHeight[c] = h;
        } else if (kind == "exec") {
            ++out.executions;
            std::string tx = e.value("tx", "");
            if (!submitted.count(tx)) complain("executed transaction was never submitted: " + tx);
            bool ok = e.value("status", false);
            ChainId c = e.value("chain", ChainId{0});
            bool authorized = registry.count(c) && registry.at(c) == e.value("target", "");
            std::string method = e.value("method", "");
            std::string ref = e.value("ref", "");
            if (!ok || !authorized) continue;
            if (method == "burn") {
                burnedOk.insert(tx);
            } else if (method == "claim") {
                if (ref.empty()) {
                    complain("successful claim carries no burn reference");
                } else {
                    if (!burnedOk.count(ref)) complain("claim of a burn that never succeeded: " + ref);
                    if (!claimedBurns.insert(ref).second) complain("burn claimed twice: " + ref);
                }
                claimOkIds.insert(tx);
            } else if (method == "confirm") {
                if (ref.empty()) {
                    complain("successful confirm carries no claim reference");
                } else {
                    if (!claimOkIds.count(ref)) {
                        complain("confirm of a claim that never succeeded: " + ref);
                    }
                    if (!confirmedClaims.insert(ref).second) complain("claim confirmed twice: " + ref);
                }
            }
        } else if (kind == "supply") {
            if (!e.value("ok", false)) complain("supply audit failed in the recorded run");
            if (e.value("total", uint64_t{0}) != expectedSupply) {
                complain("accounted supply " + std::to_string(e.value("total", uint64_t{0})) +
                         " != expected " + std::to_string(expectedSupply));
            }
        } else if (kind == "relay") {
            // nothing replayable: relay progress is re-derived from blocks
        } else {
            complain("unknown record kind: " + kind);
        }
    }
    if (!sawMeta) out.violations.push_back("trace has no metadata record");
    return out;
}

/** Writes report.json, transfers.csv, and trace.jsonl into `dir`. */
inline void emitReport(const RunReport& report, const std::string& dir)
{
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());

    reportdetail::writeFile(fs::path(dir) / "report.json", report.toJson().dump(2) + "\n");
    reportdetail::writeFile(fs::path(dir) / "transfers.csv", transfersCsv(report));

    std::string trace;
    for (const std::string& line : report.traceLines) {
        trace += line;
        trace.push_back('\n');
    }
    reportdetail::writeFile(fs::path(dir) / "trace.jsonl", trace);
}

} // namespace xchain
