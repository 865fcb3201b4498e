#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "lambdag/analyze.hpp"
#include "lambdag/frontend.hpp"
#include "lambdag/strategy.hpp"
#include "support/gen.hpp"

using namespace lambdag;

namespace {

Formula P() { return Formula::atom("p"); }
Formula Q() { return Formula::atom("q"); }
Formula I(Formula a, Formula b) { return Formula::impl(std::move(a), std::move(b)); }

const char* kDecls =
    "atom p, q, r;\n"
    "const cp : p;\n"
    "const cq : q;\n"
    "const f : p -> q;\n"
    "const k : (p -> q) -> r;\n"
    "main = cp;";

Program decls() { return parse_program(kDecls); }
Term T(const std::string& src) { return parse_term(src, decls()); }

Program corpus(const std::string& name) {
    std::ifstream in(std::string(CORPUS_DIR) + "/" + name);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_program(ss.str());
}

const CheckResult& named(const AnalysisReport& rep, const std::string& name) {
    for (const auto& c : rep.checks)
        if (c.name == name) return c;
    throw std::runtime_error("no check named " + name);
}

}  // namespace

TEST(Analyze, SubformulaPropertyHoldsForNormalLinearity) {
    Program prog = corpus("linearity.lg");
    auto r = normalize_master(prog.main, {}, prog.rules);
    auto rep = check_subformula_property(r.term, prog.env());
    EXPECT_TRUE(rep.ok()) << rep.checks.front().detail;
}

TEST(Analyze, SubformulaPropertyFailsBeforeNormalization) {
    // the applied parallel-or function has a type larger than Bool
    Program prog = corpus("parallel_or_FF.lg");
    auto rep = check_subformula_property(prog.main, prog.env());
    ASSERT_FALSE(rep.ok());
    const auto& c = rep.checks.front();
    ASSERT_TRUE(c.witness.has_value());
    EXPECT_EQ(*c.witness, (Path{0}));
}

TEST(Analyze, ChannelKindOutsideSubformulasIsReported) {
    // kind r ~ r at type q with no hypothesis mentioning r
    Term t = T("cq ||[a : r ~ r] cq");
    auto rep = check_subformula_property(t, decls().env());
    ASSERT_FALSE(rep.ok());
    EXPECT_EQ(*rep.checks.front().witness, Path{});
}

TEST(Analyze, ParallelFormCheck) {
    EXPECT_TRUE(check_parallel_form(T("(cq ||[a : p ~ p] cq) ||[b : q ~ q] cq")));
    EXPECT_FALSE(check_parallel_form(T("\\x:p. (cq ||[a : p ~ p] cq)")));
}

TEST(Analyze, BoundHypothesisOnNormalTerm) {
    auto rep = check_bound_hypothesis(T("k (\\x:p. f x)"), decls().env());
    EXPECT_TRUE(rep.ok()) << rep.checks.front().detail;
}

TEST(Analyze, BoundHypothesisNeedsANormalParFreeTerm) {
    EXPECT_THROW(check_bound_hypothesis(T("(\\x:p. x) cp"), decls().env()), PreconditionError);
    EXPECT_THROW(check_bound_hypothesis(T("cq ||[a : p ~ p] cq"), decls().env()), PreconditionError);
}

TEST(Analyze, BoundHypothesisOnRandomNormalForms) {
    lambdag::testing::TermGen gen(5);
    TypeEnv env = lambdag::testing::TermGen::constants();
    int checked = 0;
    for (int i = 0; i < 300; ++i) {
        Term t = gen.term();
        auto r = normalize_master(t);
        if (r.term.par_count() != 0) continue;
        ++checked;
        auto rep = check_bound_hypothesis(r.term, env);
        EXPECT_TRUE(rep.ok()) << pretty(r.term) << ": " << rep.checks.front().detail;
    }
    EXPECT_GT(checked, 100);
}

TEST(Analyze, AppliedOccurrencesOfAnImplication) {
    Term t = Term::app(Term::var("z", I(P(), Q())), Term::var("cp", P()));
    auto rep = check_applied_occurrences(t, "z", {});
    EXPECT_TRUE(named(rep, "applied-occurrences").pass);
    EXPECT_NE(named(rep, "applied-occurrences").detail.find("every occurrence"), std::string::npos);
}

TEST(Analyze, AppliedOccurrencesExemptWhenBelowAnotherHypothesis) {
    // z : p -> q is a proper subformula of k's type, so a bare use is allowed
    Term t = Term::app(Term::var("k", I(I(P(), Q()), Formula::atom("r"))), Term::var("z", I(P(), Q())));
    auto rep = check_applied_occurrences(t, "z", {});
    EXPECT_TRUE(rep.ok());
    EXPECT_NE(rep.checks.front().detail.find("exempt"), std::string::npos);
}

TEST(Analyze, AppliedOccurrencesNeedAFreeVariable) {
    EXPECT_THROW(check_applied_occurrences(T("cp"), "zz", decls().env()), PreconditionError);
}

TEST(Analyze, SubjectReductionOnARealTrace) {
    Program prog = corpus("buyer_vendor.lg");
    auto r = normalize_master(prog.main, {}, prog.rules);
    auto rep = check_subject_reduction(r.trace, prog.env(), prog.rules);
    for (const auto& c : rep.checks) EXPECT_TRUE(c.pass) << c.name << ": " << c.detail;
    EXPECT_EQ(rep.checks.size(), 3u);
}

TEST(Analyze, CorruptedTraceIsCaughtWithItsStep) {
    Program prog = corpus("data_passing.lg");
    auto r = normalize_master(prog.main, {}, prog.rules);
    ASSERT_GE(r.trace.size(), 2u);
    auto trace = r.trace;
    // step 1 now claims to produce a term of another type
    trace[1].after = Term::var("m", Formula::atom("B"));
    auto rep = check_subject_reduction(trace, prog.env(), prog.rules);
    const auto& typed = named(rep, "type-preserved");
    EXPECT_FALSE(typed.pass);
    EXPECT_EQ(*typed.witness, trace[1].path);
    EXPECT_NE(typed.detail.find("step 1"), std::string::npos);
    EXPECT_FALSE(named(rep, "replay").pass);
}

TEST(Analyze, NewFreeVariableIsCaught) {
    Term before = T("(\\x:p. x) cp");
    ReductionStep s{RuleTag::Beta, {}, before, Term::var("stray", P())};
    auto rep = check_subject_reduction({s}, {{"cp", P()}, {"stray", P()}});
    EXPECT_FALSE(named(rep, "free-vars-kept").pass);
    EXPECT_TRUE(named(rep, "type-preserved").pass);
}

TEST(Analyze, FailuresAlwaysCarryAWitness) {
    AnalysisReport rep;
    rep.add({"x", false, std::nullopt, "broken"});
    ASSERT_TRUE(rep.checks.front().witness.has_value());
    EXPECT_FALSE(rep.ok());
}
