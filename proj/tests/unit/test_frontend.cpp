#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lambdag/frontend.hpp"
#include "support/gen.hpp"

using namespace lambdag;

namespace {

Formula P() { return Formula::atom("p"); }
Formula Q() { return Formula::atom("q"); }
Formula I(Formula a, Formula b) { return Formula::impl(std::move(a), std::move(b)); }

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ParseError parse_error(const std::string& src) {
    try {
        parse_program(src);
    } catch (const ParseError& e) {
        return e;
    }
    ADD_FAILURE() << "accepted: " << src;
    return ParseError(0, 0, "");
}

}  // namespace

TEST(Frontend, FormulaPrecedence) {
    EXPECT_EQ(parse_formula("p -> q -> p"), I(P(), I(Q(), P())));
    EXPECT_EQ(parse_formula("p /\\ q -> p"), I(Formula::conj(P(), Q()), P()));
    EXPECT_EQ(parse_formula("~p"), Formula::neg(P()));
    EXPECT_EQ(parse_formula("top"), Formula::top());
    EXPECT_EQ(pretty_formula(I(I(P(), Q()), P())), "(p -> q) -> p");
    EXPECT_EQ(pretty_formula(Formula::conj(Formula::conj(P(), Q()), P())), "(p /\\ q) /\\ p");
}

TEST(Frontend, ChannelTypesFollowTheBranch) {
    Program prog = parse_program("atom p, q;\nconst c : p;\nconst d : q;\nmain = a c ||[a : p ~ q] a d;");
    const Term& m = prog.main;
    ASSERT_TRUE(m.is(TermKind::Par));
    EXPECT_EQ(subterm_at(m, {0, 0}).type(), I(P(), Q()));
    EXPECT_EQ(subterm_at(m, {1, 0}).type(), I(Q(), P()));
}

TEST(Frontend, BuiltinsAreAlwaysDeclared) {
    Program prog = parse_program("main = if true then 1 else 2;");
    EXPECT_EQ(infer(prog.env(), prog.main), nat_type());
    Program s = parse_program("main = \"a\\\"b\";");
    EXPECT_EQ(s.main.name(), "a\"b");
}

TEST(Frontend, RulesAreParsedAndChecked) {
    Program prog = parse_program("const g : Nat -> Nat;\nrule g 5 => 9;\nmain = g 5;");
    ASSERT_EQ(prog.rules.size(), 1u);
    EXPECT_EQ(prog.rules[0].head, "g");
    EXPECT_EQ(prog.rules[0].args[0], Term::nat(5));
    EXPECT_THROW(parse_program("const g : Nat -> Nat;\nrule g true => 9;\nmain = 1;"), TypeError);
    EXPECT_THROW(parse_program("const g : Nat -> Nat;\nrule g 5 => true;\nmain = 1;"), TypeError);
}

TEST(Frontend, ErrorsCarryPositions) {
    ParseError e = parse_error("atom p;\nmain = \\x:p. ;");
    EXPECT_EQ(e.line, 2);
    EXPECT_EQ(e.col, 14);
    EXPECT_EQ(parse_error("main = 1").line, 1);  // missing ';'
    EXPECT_NE(std::string(parse_error("atom p;\nmain = \\x:zz. x;").what()).find("undeclared atom"),
              std::string::npos);
}

TEST(Frontend, ScopeErrorsAreReported) {
    EXPECT_THROW(parse_program("main = y;"), ParseError);
    // binders may not shadow constants
    EXPECT_THROW(parse_program("atom p;\nconst c : p;\nmain = \\c:p. c;"), ParseError);
    EXPECT_THROW(parse_program("const c : Nat;\nconst c : Nat;\nmain = c;"), ParseError);
    EXPECT_THROW(parse_program("main = 1;\nmain = 2;"), ParseError);
    EXPECT_THROW(parse_program("atom p;"), ParseError);
}

TEST(Frontend, ChannelWithoutAnnotationIsRejected) {
    // `a` is used outside any parallel composition that binds it
    EXPECT_THROW(parse_program("atom p;\nconst c : p;\nmain = a c;"), ParseError);
}

TEST(Frontend, PrettyUsesMinimalParentheses) {
    Program prog = parse_program("atom p, q;\nconst f : p -> q;\nconst c : p;\nmain = ((\\x:p. (f x))) (c);");
    EXPECT_EQ(pretty(prog.main), "(\\x:p. f x) c");
    Program par = parse_program("atom p;\nconst c : p;\nmain = (c ||[a : p ~ p] c) ||[b : p ~ p] c;");
    EXPECT_EQ(pretty(par.main), "(c ||[a : p ~ p] c) ||[b : p ~ p] c");
}

TEST(Frontend, CanonicalFreshNamesNumberPerBase) {
    Term t = Term::par("b#17", P(), P(), Term::var("x#4", P()), Term::lam("x#9", P(), Term::var("x#9", P())));
    Term c = canonical_fresh_names(t);
    EXPECT_EQ(c.name(), "b#1");
    EXPECT_EQ(c.child(0).name(), "x#1");
    EXPECT_EQ(c.child(1).name(), "x#2");
    EXPECT_TRUE(alpha_equal(canonical_fresh_names(Term::lam("y#3", P(), Term::var("y#3", P()))),
                            Term::lam("y#1", P(), Term::var("y#1", P()))));
}

TEST(Frontend, ProgramPrintingRoundTrips) {
    for (const auto& entry : std::filesystem::directory_iterator(CORPUS_DIR)) {
        if (entry.path().extension() != ".lg") continue;
        Program a = parse_program(slurp(entry.path()));
        std::string text = pretty_program(a);
        Program b = parse_program(text);
        EXPECT_TRUE(alpha_equal(a.main, b.main)) << entry.path();
        EXPECT_EQ(a.rules.size(), b.rules.size());
        EXPECT_EQ(pretty_program(b), text) << "not a fixed point: " << entry.path();
    }
}

TEST(Frontend, RandomTermsRoundTrip) {
    lambdag::testing::TermGen gen(17);
    Program ctx = parse_program(lambdag::testing::TermGen::prelude() + "main = cp;");
    for (int i = 0; i < 1000; ++i) {
        Term t = gen.term();
        std::string text = pretty(t);
        Term back = parse_term(text, ctx);
        ASSERT_TRUE(alpha_equal(t, back)) << text << "\n  reparsed as " << pretty(back);
    }
}
