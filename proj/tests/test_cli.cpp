#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sepk/cli.hpp"

using namespace sepk;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "sepk");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
    const auto path = std::filesystem::temp_directory_path() / ("sepk_test_" + name);
    std::ofstream(path) << text;
    return path.string();
}

} // namespace

TEST(Cli, KtheoryE33) {
    const auto r = run({"ktheory", "--builtin", "E(3,3)"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "K0 = Z, K1 = Z, K1 basis: X - Y\n");
}

TEST(Cli, KtheoryE23) {
    const auto r = run({"ktheory", "--builtin", "E(2,3)"});
    EXPECT_EQ(r.out, "K0 = 0, K1 = 0\n");
}

TEST(Cli, KtheoryJson) {
    const auto r = run({"ktheory", "--builtin", "lamplighter(2)", "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["K0"]["rank"], 2);
    EXPECT_EQ(j["K1"]["basis"][0]["X"], 1);
    EXPECT_EQ(j["K1"]["basis"][0]["Y"], -1);
}

TEST(Cli, K0Tame) {
    const auto r = run({"k0-tame", "--builtin", "E(2,2)", "--depth", "2"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("Z ⊕ Z^1 ⊕ Z^11 (truncated)"), std::string::npos) << r.out;
}

TEST(Cli, K1Tame) {
    const auto r = run({"k1-tame", "--builtin", "E(4,4)"});
    EXPECT_EQ(r.out, "K1 = Z, basis: X - Y\n");
}

TEST(Cli, ValidateBrokenFile) {
    const auto path = write_temp("broken.graph", R"({
      "vertices": ["v", "w"],
      "edges": [{"id": "a", "src": "w", "dst": "v"}, {"id": "b", "src": "w", "dst": "v"}],
      "separation": {"v": [["a"], []]}
    })");
    const auto r = run({"validate", path});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("partition not covering"), std::string::npos) << r.out;
}

TEST(Cli, ValidateGood) {
    const auto r = run({"validate", "--builtin", "E(2,2)"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "ok\n");
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run({}).code, 1);
    EXPECT_EQ(run({"frobnicate"}).code, 1);
    EXPECT_EQ(run({"ktheory", "--builtin", "E(2,2)", "--bogus"}).code, 1);
    EXPECT_EQ(run({"ktheory"}).code, 1);
    EXPECT_EQ(run({"ktheory", "--builtin", "E(2,2)", "--format", "xml"}).code, 1);
    EXPECT_EQ(run({"phi", "--builtin", "E(2,2)"}).code, 1);
}

TEST(Cli, InvalidInputs) {
    EXPECT_EQ(run({"ktheory", "--builtin", "E(1,1)"}).code, 2);
    EXPECT_EQ(run({"ktheory", "/nonexistent/graph.json"}).code, 2);
    EXPECT_EQ(run({"delta", "--builtin", "E(2,2)", "--element", "Q:1"}).code, 2);
}

TEST(Cli, PreconditionRejections) {
    const auto r = run({"delta", "--builtin", "E(2,3)", "--element", "X:1,Y:-1"});
    EXPECT_EQ(r.code, 4);
    EXPECT_NE(r.err.find("not in kernel"), std::string::npos) << r.err;
    EXPECT_EQ(run({"multires", "--builtin", "E(2,2)", "--at", "w"}).code, 4);
}

TEST(Cli, BudgetExceeded) {
    const auto r = run({"sequence", "--builtin", "E(3,3)", "--depth", "3", "--budget", "1000"});
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.err.find("last completed layer 2"), std::string::npos) << r.err;
}

TEST(Cli, BudgetFromEnvironment) {
    ::setenv("SEPK_BUDGET", "3", 1);
    const auto r = run({"multires", "--builtin", "E(2,2)", "--at", "v"});
    const auto flag = run({"multires", "--builtin", "E(2,2)", "--at", "v", "--budget", "10"});
    ::unsetenv("SEPK_BUDGET");
    EXPECT_EQ(r.code, 3);
    EXPECT_EQ(flag.code, 0);
}

TEST(Cli, MultiresOutputParses) {
    const auto r = run({"multires", "--builtin", "E(2,2)", "--at", "v"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto g = parse(r.out);
    EXPECT_EQ(g.vertices.size(), 6u);
    EXPECT_TRUE(validate(g).ok());
}

TEST(Cli, CompanionRoundTrips) {
    const auto r = run({"companion", "--builtin", "E(2,3)"});
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(parse(r.out), bipartite_companion(make_emn(2, 3)));
}

TEST(Cli, SequenceJson) {
    const auto r = run({"sequence", "--builtin", "E(2,2)", "--depth", "2", "--format", "json"});
    ASSERT_EQ(r.code, 0);
    const auto j = ordered_json::parse(r.out);
    EXPECT_EQ(j["metadata"]["W"]["3"].size(), 11u);
    for (const auto& g : j["graphs"]) EXPECT_TRUE(validate(from_json(g)).ok());
}

TEST(Cli, GeneratorAndVerify) {
    const auto gen = run({"k1-generator", "--builtin", "E(3,3)", "--element", "X:+1,Y:-1"});
    ASSERT_EQ(gen.code, 0) << gen.err;
    EXPECT_NE(gen.out.find("a1 b1* + a2 b2* + a3 b3*"), std::string::npos) << gen.out;
    const auto ver = run({"verify-generator", "--builtin", "E(3,3)"});
    EXPECT_EQ(ver.code, 0) << ver.out;
    EXPECT_EQ(ver.out.find("FAIL"), std::string::npos);
    EXPECT_NE(ver.out.find("[Z*Z] = 3 w"), std::string::npos);
}

TEST(Cli, PhiAndDelta) {
    const auto phi = run({"phi", "--builtin", "E(2,2)", "--element", "X:1,Y:-1"});
    EXPECT_EQ(phi.out, "Φ(x) = -w.1 - w.2 + w.3 + w.4\n");
    const auto delta = run({"delta", "--builtin", "E(3,3)", "--element", "X:1,Y:-1"});
    EXPECT_EQ(delta.out, "Δ(λ(x)) = -v + 3 w\n");
}

TEST(Cli, Character) {
    const auto base = write_temp("base.json", R"({"v": [-1, 0], "w": [0, 1]})");
    const auto free = write_temp("free.json", R"({"v|a2,b2": [0.5, 0.8660254037844386]})");
    const auto r = run({"character", "--builtin", "E(2,2)", "--base", base, "--free", free, "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["character"].size(), 6u);
    EXPECT_LT(j["max_residual"].get<double>(), 1e-12);

    const auto bad = write_temp("bad.json", R"({"v": [1, 0], "w": [-1, 0]})");
    const auto rb = run({"character", "--builtin", "E(2,2)", "--base", bad, "--free", free});
    EXPECT_EQ(rb.code, 0) << "lambda(w)^2 = 1 = lambda(v) is a valid base";
    const auto worse = write_temp("worse.json", R"({"v": [-1, 0], "w": [1, 0]})");
    EXPECT_EQ(run({"character", "--builtin", "E(2,2)", "--base", worse, "--free", free}).code, 4);
}

TEST(Cli, Deterministic) {
    const std::vector<std::string> args{"sequence", "--builtin", "lamplighter(2)", "--depth", "2", "--format", "json"};
    EXPECT_EQ(run(args).out, run(args).out);
}
