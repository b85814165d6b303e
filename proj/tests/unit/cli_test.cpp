#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "support.hpp"

namespace fs = std::filesystem;
using testing_support::config_path;
using testing_support::scratch_dir;
using testing_support::slurp;

namespace {

int cli(const std::string& args, const fs::path& log) {
    const std::string cmd = std::string("\"") + OLDROYD_CLI + "\" " + args + " > \"" + log.string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

} // namespace

TEST(Cli, ZeroConfigRunsAndWritesOutputs) {
    const auto dir = scratch_dir("cli_zero");
    ASSERT_EQ(cli("run --config " + q(config_path("zero.ini")) + " --out " + q(dir / "out"), dir / "log"), 0)
        << slurp(dir / "log");
    for (const char* f : {"ledger.csv", "tail.csv", "run_summary.txt"}) EXPECT_TRUE(fs::exists(dir / "out" / f)) << f;
    EXPECT_TRUE(fs::exists(dir / "out" / "snapshots" / "snap_00000.bin"));
    const auto summary = slurp(dir / "out" / "run_summary.txt");
    EXPECT_NE(summary.find("gamma"), std::string::npos);
    EXPECT_NE(summary.find("verdict: pass"), std::string::npos);
    const auto snap = oldroyd::read_snapshot((dir / "out" / "snapshots" / "snap_00001.bin").string());
    EXPECT_EQ(oldroyd::max_abs(snap.v), 0.0);
    EXPECT_EQ(oldroyd::max_abs(snap.tau), 0.0);
}

TEST(Cli, RerunsAreByteIdentical) {
    const auto dir = scratch_dir("cli_rerun");
    for (const char* out : {"a", "b"})
        ASSERT_EQ(cli("run --config " + q(config_path("relaxation.ini")) + " --out " + q(dir / out), dir / "log"), 0)
            << slurp(dir / "log");
    for (const char* f : {"ledger.csv", "tail.csv", "decomposition.csv", "snapshots/snap_00004.bin"}) {
        const auto a = slurp(dir / "a" / f);
        EXPECT_FALSE(a.empty()) << f;
        EXPECT_EQ(a, slurp(dir / "b" / f)) << f;
    }
}

TEST(Cli, TEndOverride) {
    const auto dir = scratch_dir("cli_tend");
    ASSERT_EQ(cli("run --config " + q(config_path("relaxation.ini")) + " --out " + q(dir / "out") + " --t-end 0.1",
                  dir / "log"),
              0);
    EXPECT_NE(slurp(dir / "out" / "run_summary.txt").find("t_final = 0.10000000000000001"), std::string::npos);
    EXPECT_EQ(cli("run --config " + q(config_path("relaxation.ini")) + " --out " + q(dir / "x") + " --t-end -1",
                  dir / "log"),
              1);
}

TEST(Cli, UsageErrors) {
    const auto dir = scratch_dir("cli_usage");
    EXPECT_EQ(cli("", dir / "log"), 1);
    EXPECT_EQ(cli("frobnicate", dir / "log"), 1);
    EXPECT_EQ(cli("run --config " + q(dir / "missing.ini") + " --out " + q(dir / "o"), dir / "log"), 1);
    EXPECT_NE(slurp(dir / "log").find("cannot open"), std::string::npos);
    EXPECT_EQ(cli("run --config " + q(config_path("inadmissible.ini")) + " --out " + q(dir / "o"), dir / "log"), 1);
    EXPECT_NE(slurp(dir / "log").find("case ii"), std::string::npos);
    EXPECT_EQ(cli("converge --config " + q(config_path("tg_s2.ini")) + " --levels 8", dir / "log"), 1);
    EXPECT_EQ(cli("converge --config " + q(config_path("tg_s2.ini")) + " --levels 16,8", dir / "log"), 1);
    EXPECT_EQ(cli("verify-hypotheses --config " + q(config_path("tg_s2.ini")) + " --samples 0", dir / "log"), 1);
    EXPECT_EQ(cli("decompose --config " + q(config_path("relaxation.ini")) + " --R-split -1 --out " + q(dir / "d"),
                  dir / "log"),
              1);
}

TEST(Cli, BlowUpExitCode) {
    const auto dir = scratch_dir("cli_blowup");
    auto text = slurp(config_path("tg_s2.ini"));
    const auto pos = text.find("[run]");
    ASSERT_NE(pos, std::string::npos);
    text.insert(pos + 5, "\nblowup_threshold = 1e-6");
    {
        std::ofstream f(dir / "c.ini", std::ios::trunc);
        f << text;
    }
    EXPECT_EQ(cli("run --config " + q(dir / "c.ini") + " --out " + q(dir / "o"), dir / "log"), 3) << slurp(dir / "log");
    EXPECT_NE(slurp(dir / "o" / "run_summary.txt").find("verdict: blow-up"), std::string::npos);
}

TEST(Cli, VerifyHypotheses) {
    const auto dir = scratch_dir("cli_hyp");
    EXPECT_EQ(cli("verify-hypotheses --config " + q(config_path("tg_s2.ini")) + " --samples 2000", dir / "log"), 0)
        << slurp(dir / "log");
    EXPECT_EQ(cli("verify-hypotheses --config " + q(config_path("linear.ini")) + " --samples 2000", dir / "log"), 0)
        << slurp(dir / "log");
    EXPECT_EQ(cli("verify-hypotheses --config " + q(config_path("nonmonotone_table.ini")) + " --samples 2000",
                  dir / "log"),
              2);
    EXPECT_NE(slurp(dir / "log").find("monotonicity violations"), std::string::npos);
}

TEST(Cli, ConvergeOnZeroData) {
    const auto dir = scratch_dir("cli_conv");
    // identically zero differences count as converged
    const int rc = cli("converge --config " + q(config_path("zero.ini")) + " --levels 8,16,32", dir / "log");
    EXPECT_EQ(rc, 0) << slurp(dir / "log");
    EXPECT_NE(slurp(dir / "log").find("8-16,0,0"), std::string::npos);
}

TEST(Cli, Decompose) {
    const auto dir = scratch_dir("cli_decomp");
    EXPECT_EQ(cli("decompose --config " + q(config_path("relaxation.ini")) + " --out " + q(dir / "a"), dir / "log"), 0)
        << slurp(dir / "log");
    EXPECT_TRUE(fs::exists(dir / "a" / "decomposition.csv"));
    EXPECT_EQ(cli("decompose --config " + q(config_path("relaxation.ini")) + " --R-split 1e6 --out " + q(dir / "b"),
                  dir / "log"),
              0)
        << slurp(dir / "log");
}
