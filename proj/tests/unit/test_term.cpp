#include <gtest/gtest.h>

#include "lambdag/frontend.hpp"
#include "lambdag/term.hpp"
#include "support/gen.hpp"

using namespace lambdag;

namespace {

Formula P() { return Formula::atom("p"); }
Formula Q() { return Formula::atom("q"); }
Term V(const std::string& n, Formula f) { return Term::var(n, std::move(f)); }

}  // namespace

TEST(Term, SizeAndParCount) {
    Term t = Term::par("a", P(), Q(), Term::app(V("a", Formula::impl(P(), Q())), V("x", P())),
                       Term::lam("y", Q(), V("z", Q())));
    EXPECT_EQ(t.size(), 6u);
    EXPECT_EQ(t.par_count(), 1u);
    EXPECT_EQ(t.hole_count(), 0u);
}

TEST(Term, PathsAddressChildren) {
    Term inner = Term::app(V("f", Formula::impl(P(), Q())), V("x", P()));
    Term t = Term::lam("x", P(), inner);
    EXPECT_EQ(subterm_at(t, {0, 1}), V("x", P()));
    Term r = replace_at(t, {0, 1}, V("y", P()));
    EXPECT_EQ(subterm_at(r, {0, 1}), V("y", P()));
    EXPECT_EQ(subterm_at(t, {0, 1}), V("x", P()));  // original untouched
    EXPECT_TRUE(is_prefix({0}, {0, 1}));
    EXPECT_FALSE(is_prefix({1}, {0, 1}));
    EXPECT_EQ(extend({0}, 1), (Path{0, 1}));
}

TEST(Term, FreeVarsRespectBinders) {
    Term t = Term::lam("x", P(), Term::app(V("f", Formula::impl(P(), Q())), V("x", P())));
    auto fv = free_vars(t);
    ASSERT_EQ(fv.size(), 1u);
    EXPECT_EQ(fv.begin()->first, "f");
    EXPECT_FALSE(occurs_free(t, "x"));
}

TEST(Term, ChannelIsBoundInBothBranches) {
    Term t = Term::par("a", P(), Q(), Term::app(V("a", Formula::impl(P(), Q())), V("u", P())),
                       Term::app(V("a", Formula::impl(Q(), P())), V("v", Q())));
    auto fv = free_vars(t);
    EXPECT_EQ(fv.size(), 2u);
    EXPECT_EQ(fv.count("a"), 0u);
}

TEST(Term, FreeVarAtTwoTypesIsAScopeError) {
    Term t = Term::pair(V("x", P()), V("x", Q()));
    EXPECT_THROW(free_vars(t), ScopeError);
}

TEST(Term, OccurrencesInTextualOrder) {
    Term x = V("x", P());
    Term t = Term::pair(Term::pair(x, V("y", P())), Term::lam("x", P(), x));
    auto occ = occurrences_of(t, "x");
    ASSERT_EQ(occ.size(), 1u);
    EXPECT_EQ(occ[0].path, (Path{0, 0}));
    Term u = Term::pair(x, Term::pair(V("y", P()), x));
    auto o2 = occurrences_of(u, "x");
    ASSERT_EQ(o2.size(), 2u);
    EXPECT_LT(o2[0].rank, o2[1].rank);
    EXPECT_EQ(count_free(u, "x"), 2u);
}

TEST(Term, FreshNamesAreSequentialAfterReset) {
    reset_fresh_names();
    EXPECT_EQ(fresh_name("b"), "b#1");
    EXPECT_EQ(fresh_name("b#1"), "b#2");
    EXPECT_EQ(fresh_name("a"), "a#3");
    EXPECT_EQ(base_name("a#3"), "a");
    EXPECT_EQ(base_name("plain"), "plain");
}

TEST(Term, SubstitutionAvoidsCapture) {
    // (\y. x y)[y/x] must not capture the substituted y.
    Formula pq = Formula::impl(P(), Q());
    Term body = Term::lam("y", P(), Term::app(V("x", pq), V("y", P())));
    Term r = subst(body, V("y", pq), "x");
    Term want = Term::lam("w", P(), Term::app(V("y", pq), V("w", P())));
    EXPECT_TRUE(alpha_equal(r, want)) << pretty(r);
    EXPECT_FALSE(alpha_equal(r, Term::lam("y", P(), Term::app(V("y", pq), V("y", P())))));
}

TEST(Term, SubstitutionStopsAtShadowingBinder) {
    Term t = Term::pair(V("x", P()), Term::lam("x", P(), V("x", P())));
    Term r = subst(t, V("c", P()), "x");
    EXPECT_EQ(r, Term::pair(V("c", P()), Term::lam("x", P(), V("x", P()))));
}

TEST(Term, SubstitutionOfAbsentVariableIsIdentity) {
    lambdag::testing::TermGen g(7);
    for (int i = 0; i < 200; ++i) {
        Term t = g.term();
        EXPECT_EQ(subst(t, V("zz", P()), "nowhere"), t);
    }
}

TEST(Term, FillContextCapturesDeliberately) {
    SimpleContext c{Term::lam("x", P(), Term::hole(P())), P()};
    EXPECT_TRUE(is_simple_context(c));
    Term filled = fill_context(c, V("x", P()));
    EXPECT_EQ(filled, Term::lam("x", P(), V("x", P())));
    EXPECT_FALSE(occurs_free(filled, "x"));
}

TEST(Term, ApplyStackBuildsEliminations) {
    Formula pq = Formula::conj(P(), Q());
    Stack s{{false, 0, V("u", P())}, {true, 1, Term()}};
    Term head = V("f", Formula::impl(P(), pq));
    EXPECT_EQ(apply_stack(head, s), Term::proj(Term::app(head, V("u", P())), 1));
}

TEST(Term, TupleAndSelectors) {
    std::vector<TypedVar> ys{{"y1", P()}, {"y2", Q()}, {"y3", P()}};
    Term tup = tuple_of(ys);
    EXPECT_EQ(tup, Term::pair(V("y1", P()), Term::pair(V("y2", Q()), V("y3", P()))));
    Term v = V("v", Formula::conj(P(), Formula::conj(Q(), P())));
    EXPECT_EQ(select_component(v, 0, 3), Term::proj(v, 0));
    EXPECT_EQ(select_component(v, 1, 3), Term::proj(Term::proj(v, 1), 0));
    EXPECT_EQ(select_component(v, 2, 3), Term::proj(Term::proj(v, 1), 1));
    EXPECT_EQ(tuple_of({}).size(), 2u);
}

TEST(Term, MultiSubstForOneTwoThreeVariables) {
    for (std::size_t n = 1; n <= 3; ++n) {
        std::vector<TypedVar> ys;
        std::vector<Term> comps;
        for (std::size_t i = 0; i < n; ++i) {
            ys.push_back({"y" + std::to_string(i), P()});
            comps.push_back(V("y" + std::to_string(i), P()));
        }
        Formula tt = P();
        for (std::size_t i = 1; i < n; ++i) tt = Formula::conj(P(), tt);
        Term u = comps.size() == 1 ? comps[0] : Term::pair(comps.front(), comps.back());
        Term v = V("v", tt);
        Term r = multi_subst(u, v, ys);
        Term want = n == 1 ? v : Term::pair(select_component(v, 0, n), select_component(v, n - 1, n));
        EXPECT_EQ(r, want) << n;
        EXPECT_FALSE(occurs_free(r, "y0"));
    }
}

TEST(Term, RenameBinderKeepsMeaning) {
    Term t = Term::lam("x", P(), Term::pair(V("x", P()), V("y", P())));
    Term r = rename_binder(t, {}, "x#9");
    EXPECT_EQ(r.name(), "x#9");
    EXPECT_TRUE(alpha_equal(t, r));
}

TEST(Term, AlphaEqualityDistinguishesFreeNames) {
    Term a = Term::lam("x", P(), V("x", P()));
    Term b = Term::lam("y", P(), V("y", P()));
    Term c = Term::lam("y", P(), V("x", P()));
    EXPECT_TRUE(alpha_equal(a, b));
    EXPECT_FALSE(alpha_equal(a, c));
    EXPECT_FALSE(alpha_equal(V("x", P()), V("x", Q())));
    // a bound name on one side may not match a free name on the other
    Term d = Term::lam("x", P(), Term::pair(V("x", P()), V("y", P())));
    Term e = Term::lam("y", P(), Term::pair(V("y", P()), V("y", P())));
    EXPECT_FALSE(alpha_equal(d, e));
}

TEST(Term, AlphaEqualityIsReflexiveOnRandomTerms) {
    lambdag::testing::TermGen g(11);
    for (int i = 0; i < 300; ++i) {
        Term t = g.term();
        EXPECT_TRUE(alpha_equal(t, t));
        EXPECT_LE(t.size(), 60u);
    }
}
