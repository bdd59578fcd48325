#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <didq/serialize.hpp>

#include "commands.hpp"

namespace fs = std::filesystem;
using namespace didq;

namespace {

class CliTest : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir_ = fs::temp_directory_path() /
               ("didq_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path write_config(const std::string& name, const std::string& text)
    {
        const fs::path p = dir_ / name;
        write_atomic(p, text);
        return p;
    }

    int invoke(std::vector<std::string> args)
    {
        args.insert(args.begin(), "didq");
        std::vector<char*> argv;
        for (auto& a : args) argv.push_back(a.data());
        out_.str("");
        err_.str("");
        return cli::run(static_cast<int>(argv.size()), argv.data(), out_, err_);
    }

    fs::path dir_;
    std::ostringstream out_, err_;
};

} // namespace

TEST_F(CliTest, UnknownKeyIsValidationError)
{
    const auto cfg = write_config("c.json", R"({"experiment": "x", "seed": 1, "colour": "red"})");
    EXPECT_EQ(invoke({"dimension", "--config", cfg.string()}), cli::kExitValidation);
    EXPECT_NE(err_.str().find("colour"), std::string::npos);
}

TEST_F(CliTest, AlphaAboveQuarterIsRejected)
{
    const auto cfg = write_config("c.json", R"({"seed": 1, "channel": {"family": "mixed_segment"},
        "pipeline": {"kind": "typical", "n": [3], "alpha": 0.3, "t": 0.5, "delta": 1.0}})");
    EXPECT_EQ(invoke({"build", "--config", cfg.string(), "--out", (dir_ / "o").string()}), cli::kExitValidation);
}

TEST_F(CliTest, MissingConfigAndBadArguments)
{
    EXPECT_EQ(invoke({"build", "--config", (dir_ / "nope.json").string()}), cli::kExitValidation);
    EXPECT_EQ(invoke({"build"}), cli::kExitValidation);
    EXPECT_EQ(invoke({"frobnicate"}), cli::kExitValidation);
}

TEST_F(CliTest, UncertifiedTypicalBuildReportsInfeasible)
{
    const auto cfg = write_config("c.json", R"({"seed": 3, "channel": {"family": "bloch_circle"},
        "pipeline": {"kind": "typical", "n": [4], "alpha": 0.25, "t": 0.5, "delta": 1.0}})");
    const fs::path out = dir_ / "o";
    EXPECT_EQ(invoke({"build", "--config", cfg.string(), "--out", out.string()}), cli::kExitInfeasible);
    EXPECT_TRUE(fs::exists(out / "infeasibility_n4.json"));
    EXPECT_NE(read_file(out / "infeasibility_n4.json").find("margin_bits"), std::string::npos);
}

TEST_F(CliTest, BuildThenVerifyPureCode)
{
    const auto build = write_config("b.json", R"({"seed": 7, "channel": {"family": "bloch_circle"},
        "pipeline": {"kind": "pure", "n": [4], "gamma": 0.5, "t": 0.5}})");
    EXPECT_EQ(invoke({"build", "--config", build.string(), "--out", (dir_ / "o").string()}), cli::kExitOk);
    ASSERT_TRUE(fs::exists(dir_ / "o" / "code_n4.json"));
    const auto verify = write_config("v.json", R"({"seed": 7, "verify": {"code": "o/code_n4.json"}})");
    EXPECT_EQ(invoke({"verify", "--config", verify.string(), "--out", (dir_ / "v").string()}), cli::kExitOk);
    const std::string report = read_file(dir_ / "v" / "verify.json");
    EXPECT_NE(report.find("\"passed\": true"), std::string::npos) << report;
}

TEST_F(CliTest, OutputsAreByteIdenticalAcrossRunsAndDirectories)
{
    const auto cfg = write_config("d.json", R"({"experiment": "det", "seed": 5, "channel": {"family": "mixed_segment"},
        "geometry": {"schedule": {"delta0": 0.5, "ratio": 0.5, "steps": 4, "tail_fraction": 0.5}},
        "lemma2": {"pairs": 20, "n": [2, 3], "deltas": [0.5, 1.0], "dim": 2}})");
    for (const std::string cmd : {"dimension", "check-lemma2"}) {
        ASSERT_EQ(invoke({cmd, "--config", cfg.string(), "--out", (dir_ / "a").string()}), cli::kExitOk) << err_.str();
        ASSERT_EQ(invoke({cmd, "--config", cfg.string(), "--out", (dir_ / "b").string()}), cli::kExitOk);
    }
    for (const char* f : {"dimension.csv", "dimension.json", "lemma2.csv"})
        EXPECT_EQ(read_file(dir_ / "a" / f), read_file(dir_ / "b" / f)) << f;
}

TEST_F(CliTest, SeedOverrideChangesHashAndOutput)
{
    const auto cfg = write_config("l.json", R"({"seed": 5, "lemma2": {"pairs": 10, "n": [2], "deltas": [0.5], "dim": 2}})");
    ASSERT_EQ(invoke({"check-lemma2", "--config", cfg.string(), "--out", (dir_ / "a").string()}), cli::kExitOk);
    ASSERT_EQ(invoke({"check-lemma2", "--config", cfg.string(), "--seed", "6", "--out", (dir_ / "b").string()}),
              cli::kExitOk);
    const std::string a = read_file(dir_ / "a" / "lemma2.csv"), b = read_file(dir_ / "b" / "lemma2.csv");
    EXPECT_NE(a, b);
    EXPECT_NE(a.substr(0, a.find('\n')), b.substr(0, b.find('\n')));
}
