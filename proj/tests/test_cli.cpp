// Copyright (c) 2026 The xchain developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

//
// End-to-end tests of the command-line tool: argument validation, scenario
// runs with report emission, attack drivers, offline proof verification,
// trace invariant checking, and seed overrides.  Each test spawns the real
// binary and checks its exit code and output.
//

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "xchain/chain.hpp"
#include "xchain/jsonio.hpp"
#include "xchain/relay.hpp"

using namespace xchain;
using nlohmann::json;

namespace {

std::string scenarioPath(const std::string& name)
{
    return std::string(XCHAIN_SCENARIO_DIR) + "/" + name;
}

std::filesystem::path freshTempDir(const std::string& tag)
{
    std::filesystem::path dir = std::filesystem::temp_directory_path() / ("xchain-cli-" + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

/** Runs the tool with `args`, captures combined output, returns exit code. */
int runCli(const std::string& args, std::string* output = nullptr,
           const std::string& envPrefix = "")
{
    static int counter = 0;
    std::filesystem::path cap = std::filesystem::temp_directory_path() /
                                ("xchain-cli-out-" + std::to_string(++counter) + ".txt");
    std::string cmd =
        envPrefix + std::string(XCHAIN_CLI_PATH) + " " + args + " > " + cap.string() + " 2>&1";
    int rc = std::system(cmd.c_str());
    if (output) *output = slurp(cap);
    std::filesystem::remove(cap);
    EXPECT_TRUE(WIFEXITED(rc));
    return WEXITSTATUS(rc);
}

// ============================================================================
// Argument handling
// ============================================================================

TEST(CliTool, RequiresASubcommand)
{
    std::string out;
    EXPECT_EQ(runCli("", &out), 2);

    EXPECT_EQ(runCli("--help", &out), 0);
    EXPECT_NE(out.find("run"), std::string::npos);
    EXPECT_NE(out.find("attack"), std::string::npos);
    EXPECT_NE(out.find("verify-proof"), std::string::npos);
    EXPECT_NE(out.find("check-invariants"), std::string::npos);
}

TEST(CliTool, RunRequiresAConfig)
{
    EXPECT_EQ(runCli("run"), 2);
}

TEST(CliTool, RunReportsMissingAndBrokenConfigs)
{
    EXPECT_EQ(runCli("run --config /nonexistent/nowhere.json"), 1);

    std::filesystem::path dir = freshTempDir("badcfg");
    std::ofstream(dir / "broken.json") << "{ not json";
    std::string out;
    EXPECT_EQ(runCli("run --config " + (dir / "broken.json").string(), &out), 1);
    EXPECT_NE(out.find("error"), std::string::npos);
}

// ============================================================================
// Scenario runs
// ============================================================================

TEST(CliTool, RunEmitsReportArtifacts)
{
    std::filesystem::path dir = freshTempDir("run");
    std::string out;
    int rc = runCli("run --config " + scenarioPath("fee-race.json") + " --out " + dir.string(),
                    &out);
    EXPECT_EQ(rc, 0);
    EXPECT_NE(out.find("fee-race"), std::string::npos);
    EXPECT_NE(out.find("transfer"), std::string::npos);

    ASSERT_TRUE(std::filesystem::exists(dir / "report.json"));
    ASSERT_TRUE(std::filesystem::exists(dir / "transfers.csv"));
    ASSERT_TRUE(std::filesystem::exists(dir / "trace.jsonl"));

    json rep = json::parse(slurp(dir / "report.json"));
    EXPECT_EQ(rep.at("scenario"), "fee-race");
    EXPECT_EQ(rep.at("summary").at("transfers"), 3);
    EXPECT_EQ(rep.at("summary").at("claimed"), 3);
    EXPECT_TRUE(rep.at("invariantViolations").empty());
}

TEST(CliTool, SeedFlagAndEnvironmentAgree)
{
    std::filesystem::path a = freshTempDir("seed-flag");
    std::filesystem::path b = freshTempDir("seed-env");
    std::string cfg = scenarioPath("exponential.json");

    EXPECT_EQ(runCli("run --config " + cfg + " --seed 777 --out " + a.string()), 0);
    EXPECT_EQ(runCli("run --config " + cfg + " --out " + b.string(), nullptr,
                     "XCHAIN_SEED=777 "),
              0);
    std::string repA = slurp(a / "report.json");
    EXPECT_EQ(repA, slurp(b / "report.json"));

    // and both actually differ from the seed baked into the file
    std::filesystem::path c = freshTempDir("seed-file");
    EXPECT_EQ(runCli("run --config " + cfg + " --out " + c.string()), 0);
    EXPECT_NE(repA, slurp(c / "report.json"));
}

// ============================================================================
// Attack drivers
// ============================================================================

TEST(CliTool, AttackPrintsOutcomeJson)
{
    std::string out;
    int rc = runCli("attack --kind double-claim --config " + scenarioPath("attack-base.json"),
                    &out);
    EXPECT_EQ(rc, 0);

    json outcome = json::parse(out);
    EXPECT_EQ(outcome.at("attack"), "double-claim");
    EXPECT_EQ(outcome.at("succeeded"), 0);
    EXPECT_GT(outcome.at("attempted").get<uint64_t>(), 0u);
    EXPECT_EQ(outcome.at("rejectionCodes").at("AlreadyClaimed"), 1);
}

TEST(CliTool, AttackRejectsUnknownKinds)
{
    std::string out;
    EXPECT_EQ(runCli("attack --kind nonsense --config " + scenarioPath("attack-base.json"), &out),
              2);
    EXPECT_NE(out.find("unknown attack kind"), std::string::npos);
}

// ============================================================================
// Offline proof verification
// ============================================================================

class CliProofFixture : public ::testing::Test {
protected:
    void SetUp() override
    {
        m_dir = freshTempDir("proof");

        ChainConfig cfg;
        cfg.chain = 0;
        ChainSim sim(cfg, /*seed=*/1);
        sim.submitTx(makeTransaction("alice", 1, {0, "x"}, {0x01, 0xaa}), 0);
        sim.submitTx(makeTransaction("alice", 2, {0, "x"}, {0x01, 0xbb}), 0);
        sim.produceBlock(15000);
        const Block& b = sim.blockAt(1);

        InclusionProofBundle bundle = buildInclusionBundle(b, 1);
        std::ofstream(m_dir / "bundle.json") << bundleToJson(bundle).dump(2) << "\n";
        std::ofstream(m_dir / "header.json") << headerToJson(b.header).dump(2) << "\n";

        InclusionProofBundle bad = bundle;
        bad.txProof.leafHash[0] ^= 0x01;
        std::ofstream(m_dir / "bundle_bad.json") << bundleToJson(bad).dump(2) << "\n";
    }

    std::filesystem::path m_dir;
};

TEST_F(CliProofFixture, VerifyProofAcceptsAnHonestBundle)
{
    std::string out;
    int rc = runCli("verify-proof --bundle " + (m_dir / "bundle.json").string() + " --header " +
                        (m_dir / "header.json").string(),
                    &out);
    EXPECT_EQ(rc, 0);
    EXPECT_NE(out.find("proof bundle verified"), std::string::npos);
    EXPECT_EQ(out.find("FAIL"), std::string::npos);
}

TEST_F(CliProofFixture, VerifyProofRejectsATamperedBundle)
{
    std::string out;
    int rc = runCli("verify-proof --bundle " + (m_dir / "bundle_bad.json").string() +
                        " --header " + (m_dir / "header.json").string(),
                    &out);
    EXPECT_EQ(rc, 1);
    EXPECT_NE(out.find("REJECTED"), std::string::npos);
    EXPECT_NE(out.find("FAIL"), std::string::npos);
}

// ============================================================================
// Trace invariant checking
// ============================================================================

TEST(CliTool, CheckInvariantsPassesHonestAndFlagsTamperedTraces)
{
    std::filesystem::path dir = freshTempDir("invariants");
    ASSERT_EQ(runCli("run --config " + scenarioPath("fee-race.json") + " --out " + dir.string()),
              0);

    std::string out;
    EXPECT_EQ(runCli("check-invariants --trace " + (dir / "trace.jsonl").string(), &out), 0);
    EXPECT_NE(out.find("trace is consistent"), std::string::npos);

    // splice in the execution of a transaction nobody ever submitted
    std::filesystem::path tampered = dir / "tampered.jsonl";
    std::filesystem::copy_file(dir / "trace.jsonl", tampered);
    {
        std::ofstream app(tampered, std::ios::app);
        app << json{{"time", 9999999999}, {"kind", "exec"},  {"chain", 0},
                    {"tx", std::string(64, 'f')}, {"target", "asset@0"}, {"method", "burn"},
                    {"status", true},             {"code", ""}}
                   .dump()
            << "\n";
    }
    EXPECT_EQ(runCli("check-invariants --trace " + tampered.string(), &out), 1);
    EXPECT_NE(out.find("VIOLATES"), std::string::npos);
    EXPECT_NE(out.find("never submitted"), std::string::npos);

    EXPECT_EQ(runCli("check-invariants --trace /nonexistent/trace.jsonl"), 1);
}

} // namespace
