#include <gtest/gtest.h>

#include "lambdag/formula.hpp"
#include "lambdag/frontend.hpp"

using namespace lambdag;

namespace {

Formula P() { return Formula::atom("p"); }
Formula Q() { return Formula::atom("q"); }
Formula R() { return Formula::atom("r"); }
Formula I(Formula a, Formula b) { return Formula::impl(std::move(a), std::move(b)); }
Formula C(Formula a, Formula b) { return Formula::conj(std::move(a), std::move(b)); }

// Strong subformulas straight from the definition: proper subformulas of the
// prime proper subformulas.
FormulaSet strong_oracle(const Formula& a) {
    FormulaSet out;
    for (const auto& b : proper_subformulas(a)) {
        if (!b.is_prime()) continue;
        auto s = proper_subformulas(b);
        out.insert(s.begin(), s.end());
    }
    return out;
}

}  // namespace

TEST(Formula, SizeCountsNodes) {
    EXPECT_EQ(formula_size(P()), 1u);
    EXPECT_EQ(formula_size(Formula::bot()), 1u);
    EXPECT_EQ(formula_size(I(C(P(), Q()), Formula::bot())), 5u);
    EXPECT_EQ(formula_size(Formula::top()), 3u);
}

TEST(Formula, EqualityIsStructural) {
    EXPECT_EQ(I(P(), Q()), I(P(), Q()));
    EXPECT_NE(I(P(), Q()), I(Q(), P()));
    EXPECT_NE(I(P(), Q()), C(P(), Q()));
    EXPECT_EQ(Formula::neg(P()), I(P(), Formula::bot()));
}

TEST(Formula, PrimeFactorsFlattenNestedConjunctions) {
    auto f = prime_factors(C(C(P(), Q()), C(R(), I(P(), Q()))));
    std::vector<Formula> want{P(), Q(), R(), I(P(), Q())};
    EXPECT_EQ(f, want);
    EXPECT_EQ(prime_factors(I(P(), Q())), std::vector<Formula>{I(P(), Q())});
}

TEST(Formula, ConjunctionOfEmptyIsTop) {
    EXPECT_EQ(conjunction_of({}), Formula::top());
    EXPECT_EQ(conjunction_of({P()}), P());
    EXPECT_EQ(conjunction_of({P(), Q(), R()}), C(P(), C(Q(), R())));
}

TEST(Formula, SubformulasIncludeSelf) {
    Formula f = I(C(P(), Q()), P());
    FormulaSet want{f, C(P(), Q()), P(), Q()};
    EXPECT_EQ(subformulas(f), want);
    FormulaSet proper{C(P(), Q()), P(), Q()};
    EXPECT_EQ(proper_subformulas(f), proper);
    EXPECT_TRUE(is_subformula(f, f));
    EXPECT_FALSE(is_proper_subformula(f, f));
    EXPECT_TRUE(is_proper_subformula(Q(), f));
    EXPECT_FALSE(is_subformula(R(), f));
}

TEST(Formula, StrongSubformulasOfNestedImplication) {
    FormulaSet want{P(), Q()};
    EXPECT_EQ(strong_subformulas(I(I(P(), Q()), R())), want);
    EXPECT_EQ(strong_subformulas_by_shape(I(I(P(), Q()), R())), want);
}

TEST(Formula, StrongSubformulasOfConjunction) {
    FormulaSet want{Q(), R()};
    EXPECT_EQ(strong_subformulas(C(P(), I(Q(), R()))), want);
    EXPECT_EQ(strong_subformulas_by_shape(C(P(), I(Q(), R()))), want);
}

TEST(Formula, AtomsHaveNoStrongSubformulas) {
    EXPECT_TRUE(strong_subformulas(P()).empty());
    EXPECT_TRUE(strong_subformulas(I(P(), Q())).empty());
    EXPECT_FALSE(is_strong_subformula(P(), I(P(), Q())));
    EXPECT_TRUE(is_strong_subformula(P(), I(I(P(), Q()), R())));
}

TEST(Formula, StrongSubformulasAgreeWithOracleOnSamples) {
    std::vector<Formula> samples{
        I(I(I(P(), Q()), R()), P()),
        C(C(I(P(), Q()), R()), I(R(), C(P(), Q()))),
        I(C(P(), I(Q(), R())), Formula::bot()),
        Formula::neg(Formula::neg(P())),
    };
    for (const auto& f : samples) {
        EXPECT_EQ(strong_subformulas(f), strong_oracle(f)) << pretty_formula(f);
        EXPECT_EQ(strong_subformulas_by_shape(f), strong_oracle(f)) << pretty_formula(f);
    }
}

TEST(Formula, OrderingIsTotalAndConsistent) {
    std::vector<Formula> fs{P(), Q(), Formula::bot(), I(P(), Q()), C(P(), Q()), I(Q(), P())};
    for (const auto& a : fs)
        for (const auto& b : fs) {
            bool eq = a == b;
            EXPECT_EQ(eq, (a <=> b) == std::strong_ordering::equal);
            if (!eq) EXPECT_NE((a <=> b) == std::strong_ordering::less, (b <=> a) == std::strong_ordering::less);
        }
    EXPECT_EQ(std::hash<Formula>{}(I(P(), Q())), std::hash<Formula>{}(I(P(), Q())));
}
