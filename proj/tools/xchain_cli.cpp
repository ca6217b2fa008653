// Copyright (c) 2026 The xchain developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

//
// xchain — command-line front end for the cross-chain transfer simulator.
//
//   xchain run --config FILE [--seed N] [--out DIR]   execute a scenario
//   xchain attack --kind NAME --config FILE           stage a catalogued attack
//   xchain verify-proof --bundle FILE --header FILE   offline proof check
//   xchain check-invariants --trace FILE              replay a recorded trace
//
// Exit codes: 0 success, 1 failed checks / config errors, 2 usage errors.
// The XCHAIN_SEED environment variable overrides the config seed; an explicit
// --seed flag overrides both.
//

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "xchain/attack.hpp"
#include "xchain/jsonio.hpp"
#include "xchain/scenario.hpp"

namespace {

using namespace xchain;

uint64_t resolveSeed(uint64_t configSeed, bool seedFlagSet, uint64_t seedFlag)
{
    if (seedFlagSet) return seedFlag;
    if (const char* env = std::getenv("XCHAIN_SEED")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0') {
            throw ConfigError("XCHAIN_SEED: expected an unsigned integer, got \"" +
                              std::string(env) + "\"");
        }
        return static_cast<uint64_t>(v);
    }
    return configSeed;
}

int cmdRun(const std::string& configPath, bool seedSet, uint64_t seed, const std::string& outDir)
{
    ScenarioConfig cfg = loadScenario(configPath);
    cfg.seed = resolveSeed(cfg.seed, seedSet, seed);
    RunReport rep = runScenario(cfg);

    uint64_t confirmed = 0, claimed = 0, rejected = 0, unfinished = 0;
    for (const TransferRecord& r : rep.transfers) {
        switch (r.phase) {
        case TransferPhase::Confirmed: ++confirmed; break;
        case TransferPhase::Claimed: ++claimed; break;
        case TransferPhase::Rejected: ++rejected; break;
        default: ++unfinished; break;
        }
    }
    std::cout << rep.scenario << " (seed " << rep.seed << ", protocol " << rep.protocol
              << "): " << rep.transfers.size() << " transfers — " << confirmed << " confirmed, "
              << claimed << " claimed, " << rejected << " rejected, " << unfinished
              << " unfinished\n";
    std::cout << "blocks " << rep.blocksProduced << ", simulated "
              << rep.endTimeMs / 1000.0 << " s\n";
    std::cout << std::fixed << std::setprecision(3);
    for (const auto& [phase, metrics] : rep.durationStats) {
        for (const auto& [metric, st] : metrics) {
            if (st.count == 0) continue;
            std::cout << "  " << phase << "." << metric << ": mean " << st.meanSeconds
                      << " s, stddev " << st.stddevSeconds << " s (n=" << st.count << ")\n";
        }
    }
    for (const auto& [method, st] : rep.opCounts) {
        if (st.count == 0) continue;
        std::cout << "  ops." << method << ": mean " << st.meanOps() << " over " << st.count
                  << " calls\n";
    }
    for (const std::string& w : rep.warnings) std::cout << "warning: " << w << "\n";
    for (const std::string& v : rep.invariantViolations) {
        std::cout << "invariant violation: " << v << "\n";
    }
    if (!outDir.empty()) {
        emitReport(rep, outDir);
        std::cout << "reports written to " << outDir << "\n";
    }
    return rep.invariantViolations.empty() ? 0 : 1;
}

int cmdAttack(const std::string& kind, const std::string& configPath, bool seedSet, uint64_t seed)
{
    ScenarioConfig cfg = loadScenario(configPath);
    cfg.seed = resolveSeed(cfg.seed, seedSet, seed);
    AttackOutcome out = runAttack(kind, cfg);

    nlohmann::ordered_json j;
    j["attack"] = out.attack;
    j["attempted"] = out.attempted;
    j["succeeded"] = out.succeeded;
    nlohmann::ordered_json codes;
    for (const auto& [code, n] : out.rejectionCodes) codes[code] = n;
    j["rejectionCodes"] = std::move(codes);
    std::cout << j.dump(2) << "\n";
    return out.succeeded == 0 ? 0 : 1;
}

nlohmann::json loadJsonFile(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    nlohmann::json j;
    in >> j;
    return j;
}

int cmdVerifyProof(const std::string& bundlePath, const std::string& headerPath)
{
    InclusionProofBundle bundle = bundleFromJson(loadJsonFile(bundlePath));
    BlockHeader header = headerFromJson(loadJsonFile(headerPath));

    bool allOk = true;
    auto check = [&](const char* what, bool ok) {
        std::cout << (ok ? "ok   " : "FAIL ") << what << "\n";
        if (!ok) allOk = false;
    };
    check("header hash matches its content", computeHeaderHash(header) == header.selfHash);
    check("bundle names this block", bundle.blockHash == header.selfHash);
    check("transaction and receipt proofs share one path",
          bundle.txProof.index == bundle.path && bundle.receiptProof.index == bundle.path);
    check("receipt content matches its leaf",
          merkleLeafHash(encodeReceipt(bundle.receipt)) == bundle.receiptProof.leafHash);
    check("transaction proof folds to the header's transaction root",
          verifyMembership(bundle.txProof, header.txRoot));
    check("receipt proof folds to the header's receipt root",
          verifyMembership(bundle.receiptProof, header.receiptRoot));
    std::cout << (allOk ? "proof bundle verified" : "proof bundle REJECTED") << "\n";
    return allOk ? 0 : 1;
}

int cmdCheckInvariants(const std::string& tracePath)
{
    std::ifstream in(tracePath);
    if (!in) throw IoError("cannot open " + tracePath);
    ReplaySummary sum = replayTrace(in);
    std::cout << sum.lines << " records replayed (" << sum.blocks << " blocks, "
              << sum.executions << " executions)\n";
    for (const std::string& v : sum.violations) std::cout << "violation: " << v << "\n";
    std::cout << (sum.ok() ? "trace is consistent" : "trace VIOLATES protocol invariants") << "\n";
    return sum.ok() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"cross-chain asset transfer simulator"};
    app.require_subcommand(1);

    std::string configPath, outDir, kind, bundlePath, headerPath, tracePath;
    uint64_t seed = 0;

    CLI::App* run = app.add_subcommand("run", "execute a scenario");
    run->add_option("--config", configPath, "scenario JSON file")->required();
    CLI::Option* runSeed = run->add_option("--seed", seed, "override the config seed");
    run->add_option("--out", outDir, "directory for report.json, transfers.csv, trace.jsonl");

    CLI::App* attack = app.add_subcommand("attack", "stage a catalogued attack");
    std::string kinds;
    for (const std::string& k : attackCatalogue()) {
        if (!kinds.empty()) kinds += ", ";
        kinds += k;
    }
    attack->add_option("--kind", kind, "one of: " + kinds)->required();
    attack->add_option("--config", configPath, "scenario JSON file")->required();
    CLI::Option* attackSeed = attack->add_option("--seed", seed, "override the config seed");

    CLI::App* verify = app.add_subcommand("verify-proof", "check a proof bundle offline");
    verify->add_option("--bundle", bundlePath, "inclusion proof bundle JSON")->required();
    verify->add_option("--header", headerPath, "block header JSON")->required();

    CLI::App* invariants = app.add_subcommand("check-invariants", "replay a recorded trace");
    invariants->add_option("--trace", tracePath, "trace.jsonl from a run")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (run->parsed()) {
            return cmdRun(configPath, runSeed->count() > 0, seed, outDir);
        }
        if (attack->parsed()) {
            return cmdAttack(kind, configPath, attackSeed->count() > 0, seed);
        }
        if (verify->parsed()) {
            return cmdVerifyProof(bundlePath, headerPath);
        }
        if (invariants->parsed()) {
            return cmdCheckInvariants(tracePath);
        }
    } catch (const UnknownAttack& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
