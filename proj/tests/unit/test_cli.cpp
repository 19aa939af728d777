#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "cli/cli.hpp"

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(std::initializer_list<std::string> args) {
    std::vector<std::string> storage{"adjrisk"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (std::string& s : storage) {
        argv.push_back(s.data());
    }
    argv.push_back(nullptr);
    std::ostringstream out;
    std::ostringstream err;
    const int code = adjrisk::cli::run(static_cast<int>(storage.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(ADJRISK_DATA_DIR) + "/" + name; }

std::string temp_file(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << content;
    return path.string();
}

}  // namespace

TEST(Cli, NoSubcommandIsUsageError) {
    EXPECT_EQ(invoke({}).code, adjrisk::cli::kExitUsage);
    EXPECT_EQ(invoke({"estimate", "--bogus"}).code, adjrisk::cli::kExitUsage);
}

TEST(Cli, EstimateEsOnWindow) {
    const Outcome o = invoke({"estimate", "--window-file", data("window_1_60.txt"), "--family",
                              "es", "--level", "0.95"});
    ASSERT_EQ(o.code, 0) << o.err;
    EXPECT_NE(o.out.find("es,59,0.95"), std::string::npos) << o.out;
}

TEST(Cli, EstimateAdjustedExpectileFixture) {
    const Outcome o = invoke({"estimate", "--dist-file", data("ph_fixture_law.txt"), "--family",
                              "expectile", "--profile", data("ph_fixture_profile.txt")});
    ASSERT_EQ(o.code, 0) << o.err;
    EXPECT_NE(o.out.find(",0.01,"), std::string::npos) << o.out;
}

TEST(Cli, MissingFileIsUsageError) {
    const Outcome o = invoke({"estimate", "--window-file", "/nonexistent/window.txt", "--level",
                              "0.5"});
    EXPECT_EQ(o.code, adjrisk::cli::kExitUsage);
    EXPECT_FALSE(o.err.empty());
}

TEST(Cli, ProfileReportsFiniteness) {
    const Outcome o = invoke({"profile", "--step", "0.95:0,0.99:0.01"});
    ASSERT_EQ(o.code, 0) << o.err;
    EXPECT_NE(o.out.find("finiteness assumption holds"), std::string::npos) << o.out;
}

TEST(Cli, VerifyPassesAndIsSeedDeterministic) {
    const Outcome a = invoke({"--seed", "5", "verify"});
    ASSERT_EQ(a.code, 0) << a.out << a.err;
    EXPECT_NE(a.out.find("all checks passed"), std::string::npos);
    const Outcome b = invoke({"--seed", "5", "verify"});
    EXPECT_EQ(a.out, b.out);
}

TEST(Cli, BadConfigListsEveryError) {
    const std::string path = temp_file("adjrisk_bad_config.json", R"({
  "window": 1,
  "colour": "red",
  "measures": [{"name": "x", "family": "nope", "profile": {"step": "0.9:0"}}]
})");
    const Outcome o = invoke({"--config", path, "backtest"});
    std::filesystem::remove(path);
    EXPECT_EQ(o.code, adjrisk::cli::kExitUsage);
    EXPECT_NE(o.err.find("colour"), std::string::npos) << o.err;
    EXPECT_NE(o.err.find("nope"), std::string::npos) << o.err;
    EXPECT_NE(o.err.find("window"), std::string::npos) << o.err;
}

TEST(Cli, BacktestIsDeterministic) {
    const Outcome a = invoke({"--config", data("backtest_synthetic.json"), "backtest"});
    ASSERT_EQ(a.code, 0) << a.err;
    const Outcome b = invoke({"--config", data("backtest_synthetic.json"), "backtest"});
    EXPECT_EQ(a.out, b.out);
    std::istringstream lines(a.out);
    std::string line;
    std::size_t n = 0;
    while (std::getline(lines, line)) {
        ++n;
    }
    EXPECT_EQ(n, 1500U - 1 - 60 + 1 + 1);
}

TEST(Cli, WindowLargerThanSeriesIsUsageError) {
    const Outcome o =
        invoke({"--config", data("backtest_synthetic.json"), "--window", "5000", "backtest"});
    EXPECT_EQ(o.code, adjrisk::cli::kExitUsage);
}
