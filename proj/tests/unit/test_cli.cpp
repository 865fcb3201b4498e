#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "lambdag/lambdag.hpp"

using namespace lambdag;
namespace fs = std::filesystem;

namespace {

struct LgRun {
    int code;
    std::string out;
};

LgRun lg(const std::string& args) {
    std::string cmd = std::string(LG_BINARY) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {-1, ""};
    std::string out;
    char buf[4096];
    while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
    int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string corpus(const std::string& name) { return std::string(CORPUS_DIR) + "/" + name; }

std::string scratch(const std::string& name, const std::string& text) {
    fs::path p = fs::temp_directory_path() / ("lg_cli_" + std::to_string(::getpid()) + "_" + name);
    std::ofstream(p) << text;
    return p.string();
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

}  // namespace

TEST(Cli, CheckPrintsTheType) {
    LgRun r = lg("check " + corpus("parallel_or.lg"));
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "Bool -> Bool -> Bool\n");
}

TEST(Cli, NormalizePrintsTheNormalForm) {
    LgRun r = lg("normalize " + corpus("code_mobility.lg"));
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "h <9, 7>\n");
    EXPECT_EQ(lg("normalize " + corpus("parallel_or_FF.lg")).out, "false\n");
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(lg("check /nonexistent/file.lg").code, 2);
    EXPECT_EQ(lg("check " + scratch("syntax.lg", "main = (;")).code, 2);
    EXPECT_EQ(lg("check " + scratch("type.lg", "const f : Nat -> Nat;\nmain = f true;")).code, 3);
    EXPECT_EQ(lg("normalize --max-steps 2 " + corpus("buyer_vendor.lg")).code, 4);
    EXPECT_NE(lg("frobnicate").code, 0);
}

TEST(Cli, AnalyzeReportsEveryCheck) {
    LgRun r = lg("analyze " + corpus("linearity.lg"));
    EXPECT_EQ(r.code, 0) << r.out;
    auto ls = lines(r.out);
    ASSERT_FALSE(ls.empty());
    EXPECT_EQ(ls[0].rfind("normal form: ", 0), 0u);
    for (std::size_t i = 1; i < ls.size(); ++i) EXPECT_EQ(ls[i].rfind("PASS ", 0), 0u) << ls[i];
}

TEST(Cli, AnalyzeJsonSelectsChecks) {
    LgRun r = lg("analyze --json --checks parallel,normal " + corpus("loop_guard.lg"));
    EXPECT_EQ(r.code, 0);
    auto j = nlohmann::json::parse(r.out);
    ASSERT_EQ(j["checks"].size(), 2u);
    EXPECT_EQ(j["checks"][0]["check"], "parallel");
    EXPECT_TRUE(j["checks"][0]["pass"].get<bool>());
    EXPECT_TRUE(j["checks"][0]["witness"].is_null());
    EXPECT_EQ(j["steps"].get<int>(), 0);
    EXPECT_NE(lg("analyze --checks bogus " + corpus("loop_guard.lg")).code, 0);
}

TEST(Cli, ConditionalOverParIsAnInternalFailure) {
    std::string file = scratch("ite.lg", "main = if true then (1 ||[a : Nat ~ Nat] 2) else 3;");
    EXPECT_EQ(lg("normalize " + file).code, 1);
}

TEST(Cli, JsonlTraceReplays) {
    std::string file = corpus("data_passing.lg");
    LgRun r = lg("normalize --trace jsonl " + file);
    ASSERT_EQ(r.code, 0);
    auto ls = lines(r.out);
    ASSERT_GE(ls.size(), 2u);
    std::ifstream in(file);
    std::stringstream ss;
    ss << in.rdbuf();
    Program prog = parse_program(ss.str());
    Term cur = prog.main;
    for (std::size_t i = 0; i + 1 < ls.size(); ++i) {
        auto j = nlohmann::json::parse(ls[i]);
        EXPECT_EQ(j["step"].get<std::size_t>(), i + 1);
        auto rule = rule_from_name(j["rule"].get<std::string>());
        ASSERT_TRUE(rule.has_value());
        Path p = j["path"].get<std::vector<int>>();
        cur = apply_rule(cur, p, *rule, prog.rules);
        Term printed = parse_term(j["term"].get<std::string>(), prog);
        ASSERT_TRUE(alpha_equal(cur, printed)) << ls[i];
        cur = printed;
    }
    EXPECT_EQ(ls.back(), "f m");
}

TEST(Cli, ParallelFlagGivesIdenticalOutput) {
    for (const char* name : {"buyer_vendor.lg", "code_mobility.lg", "parallel_or_uT.lg", "data_passing.lg"}) {
        LgRun a = lg("normalize --trace text " + corpus(name));
        LgRun b = lg("normalize --parallel --trace text " + corpus(name));
        EXPECT_EQ(a.code, 0);
        EXPECT_EQ(a.out, b.out) << name;
    }
}

TEST(Cli, FmtToStdoutIsStable) {
    std::string src = "atom p;\nconst c : p;\nmain = ((\\x:p. x)) (c);\n";
    std::string file = scratch("fmt.lg", src);
    LgRun once = lg("fmt --stdout " + file);
    EXPECT_EQ(once.code, 0);
    EXPECT_EQ(once.out, "atom p;\nconst c : p;\nmain = (\\x:p. x) c;\n");
    LgRun inplace = lg("fmt " + file);
    EXPECT_EQ(inplace.code, 0);
    EXPECT_EQ(lg("fmt --stdout " + file).out, once.out);
}
