#include "run.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

using namespace fel::cli;
using fel::io::json;

namespace {

RunConfig make(const std::string& command, std::vector<json> inputs, std::map<std::string, double> params) {
    RunConfig c;
    c.command = command;
    c.inputs = std::move(inputs);
    c.params = std::move(params);
    return c;
}

bool has_message(const std::vector<std::string>& errs, const std::string& m) {
    for (const auto& e : errs)
        if (e == m) return true;
    return false;
}

}  // namespace

TEST(CliValidate, CommandAndInputs) {
    EXPECT_TRUE(has_message(validate(RunConfig{}), "missing command"));
    EXPECT_TRUE(has_message(validate(make("frobnicate", {}, {})), "unknown command: frobnicate"));
    EXPECT_TRUE(has_message(validate(make("delta", {}, {{"n", 3}})), "expected 1 input(s)"));
    EXPECT_TRUE(has_message(validate(make("kv-check", {"a", "b"}, {{"n", 3}})), "missing parameter: k"));
    EXPECT_TRUE(validate(make("delta", {"cantor3"}, {{"n", 3}})).empty());
}

TEST(CliValidate, CrossFieldRules) {
    const json u = {{"type", "uniform"}, {"d", 1}, {"L", 8}};
    EXPECT_TRUE(has_message(validate(make("diagnostics", {"cantor3"}, {{"n", 4}, {"q", 1.0}})), "q must exceed 1"));
    EXPECT_TRUE(has_message(validate(make("inverse-verdict", {u, u}, {{"n", 4}, {"m", 5}, {"eps", 0.2}})),
                            "m must not exceed n"));
    EXPECT_TRUE(has_message(validate(make("inverse-verdict", {u, u}, {{"n", 4}, {"m", 2}, {"eps", 1.5}})),
                            "eps must lie in (0,1)"));
    EXPECT_TRUE(has_message(validate(make("delta", {"cantor3"}, {{"n", 2.5}})), "n must be a positive integer"));
    RunConfig c = make("delta", {"cantor3"}, {{"n", 3}});
    c.format = "xml";
    c.threads = 0;
    const auto errs = validate(c);
    EXPECT_TRUE(has_message(errs, "format must be csv or json"));
    EXPECT_TRUE(has_message(errs, "threads must be positive"));
}

TEST(CliRun, DeltaCsv) {
    const auto r = run(make("delta", {"cantor3"}, {{"n", 2}}));
    ASSERT_EQ(r.status, kExitOk) << r.message;
    std::istringstream in(r.body);
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    EXPECT_EQ(header, "n,delta,log2_delta_over_n,i,j,error");
    EXPECT_EQ(row.substr(0, 2), "2,");
    EXPECT_NE(row.find("\"(1,1)\",\"(1,2)\""), std::string::npos);
    EXPECT_EQ(r.manifest["tool"], "fel");
    EXPECT_EQ(r.manifest["config"]["command"], "delta");
}

TEST(CliRun, OverlapsJson) {
    RunConfig c = make("overlaps",
                       {json::parse(R"({"maps":[{"r":"1/2","a":["0"]},{"r":"1/2","a":["1/2"]},{"r":"1/2","a":["1"]}]})")},
                       {{"n_max", 3}});
    c.format = "json";
    const auto r = run(c);
    ASSERT_EQ(r.status, kExitOk) << r.message;
    const json doc = json::parse(r.body);
    EXPECT_EQ(doc["n"], 2);
    EXPECT_EQ(doc["words"], json::parse("[[1,3],[2,1]]"));
    EXPECT_EQ(doc["exact"], true);
}

TEST(CliRun, ErrorsMapToExitCodes) {
    EXPECT_EQ(run(make("delta", {"no-such-system"}, {{"n", 2}})).status, kExitValidation);
    RunConfig c = make("delta", {"garsia-product"}, {{"n", 8}});
    c.budget = 1000;
    EXPECT_EQ(run(c).status, kExitBudget);
}

TEST(CliRun, ThreadCountDoesNotChangeOutput) {
    const json mu = {{"type", "random"}, {"d", 2}, {"L", 10}, {"atoms", 300}, {"seed", 5}};
    RunConfig c = make("inverse-verdict", {mu, mu}, {{"n", 4}, {"m", 3}, {"eps", 0.2}});
    c.format = "json";
    const auto a = run(c);
    c.threads = 4;
    const auto b = run(c);
    ASSERT_EQ(a.status, kExitOk) << a.message;
    EXPECT_EQ(a.body, b.body);
    EXPECT_EQ(a.manifest.dump(), b.manifest.dump());
}

TEST(CliRun, ExampleConfigsLoadAndValidate) {
    int seen = 0;
    for (const auto& e : std::filesystem::directory_iterator(FEL_EXAMPLES_DIR)) {
        if (e.path().extension() != ".json") continue;
        const auto cfg = load_config(e.path().string());
        EXPECT_TRUE(validate(cfg).empty()) << e.path();
        ++seen;
    }
    EXPECT_GE(seen, static_cast<int>(commands().size()));
}
