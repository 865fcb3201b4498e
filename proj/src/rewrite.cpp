#include "lambdag/rewrite.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <set>
#include <tuple>

namespace lambdag {

namespace {

constexpr std::array<std::pair<RuleTag, std::string_view>, 15> kRuleNames{{
    {RuleTag::Beta, "Beta"},
    {RuleTag::ProjPair, "ProjPair"},
    {RuleTag::PermAppL, "PermAppL"},
    {RuleTag::PermAppR, "PermAppR"},
    {RuleTag::PermEfq, "PermEfq"},
    {RuleTag::PermProj, "PermProj"},
    {RuleTag::PermLam, "PermLam"},
    {RuleTag::PermPairL, "PermPairL"},
    {RuleTag::PermPairR, "PermPairR"},
    {RuleTag::PermParPar_L, "PermParPar_L"},
    {RuleTag::PermParPar_R, "PermParPar_R"},
    {RuleTag::CrossDropL, "CrossDropL"},
    {RuleTag::CrossDropR, "CrossDropR"},
    {RuleTag::CrossFull, "CrossFull"},
    {RuleTag::DeltaIte, "DeltaIte"},
}};

[[noreturn]] void mismatch(RuleTag tag, const std::string& detail) {
    throw RewriteError(RewriteFailure::PatternMismatch, std::string(rule_name(tag)) + ": " + detail);
}

const DeltaRule* match_delta(const Term& node, const DeltaRules& rules) {
    if (rules.empty()) return nullptr;
    std::vector<const Term*> args;
    const Term* head = &node;
    while (head->is(TermKind::App)) {
        args.push_back(&head->child(1));
        head = &head->child(0);
    }
    if (!head->is(TermKind::Var)) return nullptr;
    std::reverse(args.begin(), args.end());
    for (const auto& r : rules) {
        if (r.head != head->name() || !(r.head_type == head->type()) || r.args.size() != args.size()) continue;
        bool ok = true;
        for (std::size_t i = 0; i < args.size() && ok; ++i) ok = *args[i] == r.args[i];
        if (ok) return &r;
    }
    return nullptr;
}

// Context with a hole where `a` is applied at its rightmost occurrence.
struct Split {
    Term context;
    Formula hole_type;
    Term arg;
    Path app_path;
    std::vector<TypedVar> captured;  // binders on the hole path free in arg, outermost first
};

std::optional<Path> rightmost_applied(const Term& branch, const std::string& a) {
    auto occ = occurrences_of(branch, a);
    if (occ.empty()) return std::nullopt;
    Path p = occ.back().path;
    if (p.empty() || p.back() != 0) return std::nullopt;
    p.pop_back();
    if (!subterm_at(branch, p).is(TermKind::App)) return std::nullopt;
    return p;
}

std::vector<std::pair<Path, TypedVar>> path_binders(const Term& branch, const Path& p) {
    std::map<std::string, std::pair<std::size_t, std::pair<Path, Formula>>> innermost;
    const Term* cur = &branch;
    Path prefix;
    for (std::size_t depth = 0; depth < p.size(); ++depth) {
        if (cur->is(TermKind::Lam)) innermost[cur->name()] = {depth, {prefix, cur->type()}};
        prefix.push_back(p[depth]);
        cur = &cur->child(static_cast<std::size_t>(p[depth]));
    }
    std::vector<std::tuple<std::size_t, std::string, Path, Formula>> rows;
    for (const auto& [name, v] : innermost) rows.emplace_back(v.first, name, v.second.first, v.second.second);
    std::sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) { return std::get<0>(x) < std::get<0>(y); });
    std::vector<std::pair<Path, TypedVar>> out;
    for (auto& [_, name, path, type] : rows) out.push_back({path, {name, type}});
    return out;
}

Split split_at(const Term& branch, const Path& app_path) {
    const Term& app = subterm_at(branch, app_path);
    Split s;
    s.app_path = app_path;
    s.arg = app.child(1);
    s.hole_type = type_of(app);
    s.context = replace_at(branch, app_path, Term::hole(s.hole_type));
    for (auto& [_, tv] : path_binders(branch, app_path))
        if (occurs_free(s.arg, tv.first)) s.captured.push_back(tv);
    return s;
}

Term protect_path(Term branch, const Path& app_path, const std::set<std::string>& names) {
    for (const auto& [where, tv] : path_binders(branch, app_path))
        if (names.count(tv.first)) branch = rename_binder(branch, where, fresh_name(tv.first));
    return branch;
}

std::set<std::string> uncaptured_free(const Split& s) {
    std::set<std::string> out;
    for (const auto& [name, _] : free_vars(s.arg)) out.insert(name);
    for (const auto& [name, _] : s.captured) out.erase(name);
    return out;
}

std::vector<Formula> types_of(const std::vector<TypedVar>& vs) {
    std::vector<Formula> out;
    for (const auto& v : vs) out.push_back(v.second);
    return out;
}

bool includes_free(const Term& before, const Term& after) {
    auto fb = free_vars(before);
    for (const auto& [name, type] : free_vars(after)) {
        auto it = fb.find(name);
        if (it == fb.end() || !(it->second == type)) return false;
    }
    return true;
}

}  // namespace

std::string_view rule_name(RuleTag tag) {
    for (const auto& [t, n] : kRuleNames)
        if (t == tag) return n;
    return "?";
}

std::optional<RuleTag> rule_from_name(std::string_view name) {
    for (const auto& [t, n] : kRuleNames)
        if (n == name) return t;
    return std::nullopt;
}

bool is_intuitionistic_rule(RuleTag tag) {
    return tag == RuleTag::Beta || tag == RuleTag::ProjPair || tag == RuleTag::DeltaIte;
}

bool is_permutation_rule(RuleTag tag) {
    switch (tag) {
        case RuleTag::PermAppL:
        case RuleTag::PermAppR:
        case RuleTag::PermEfq:
        case RuleTag::PermProj:
        case RuleTag::PermLam:
        case RuleTag::PermPairL:
        case RuleTag::PermPairR:
        case RuleTag::PermParPar_L:
        case RuleTag::PermParPar_R: return true;
        default: return false;
    }
}

std::optional<RuleTag> intuitionistic_redex(const Term& node, const DeltaRules& rules) {
    if (node.is(TermKind::App) && node.child(0).is(TermKind::Lam)) return RuleTag::Beta;
    if (node.is(TermKind::Proj) && node.child(0).is(TermKind::Pair)) return RuleTag::ProjPair;
    if (node.is(TermKind::Ite) && node.child(0).is(TermKind::BoolLit)) return RuleTag::DeltaIte;
    if (match_delta(node, rules)) return RuleTag::DeltaIte;
    return std::nullopt;
}

bool is_intuitionistic_normal(const Term& t, const DeltaRules& rules) {
    if (intuitionistic_redex(t, rules)) return false;
    for (std::size_t i = 0; i < t.arity(); ++i)
        if (!is_intuitionistic_normal(t.child(i), rules)) return false;
    return true;
}

Term step_intuitionistic(const Term& t, const Path& at, const DeltaRules& rules) {
    const Term& n = subterm_at(t, at);
    Term out;
    if (n.is(TermKind::App) && n.child(0).is(TermKind::Lam)) {
        const Term& lam = n.child(0);
        out = subst(lam.child(0), n.child(1), lam.name());
    } else if (n.is(TermKind::Proj) && n.child(0).is(TermKind::Pair)) {
        out = n.child(0).child(static_cast<std::size_t>(n.index()));
    } else if (n.is(TermKind::Ite) && n.child(0).is(TermKind::BoolLit)) {
        out = n.child(0).index() ? n.child(1) : n.child(2);
    } else if (const DeltaRule* r = match_delta(n, rules)) {
        out = r->rhs;
    } else {
        throw RewriteError(RewriteFailure::PatternMismatch, "no intuitionistic redex at the given path");
    }
    return replace_at(t, at, out);
}

Term rename_channel(const Term& t, const Path& at) {
    const Term& n = subterm_at(t, at);
    if (!n.is(TermKind::Par)) throw std::invalid_argument("rename_channel: not a parallel node");
    return rename_binder(t, at, fresh_name(n.name()));
}

Term step_permutation(const Term& t, const Path& at, RuleTag rule) {
    const Term& n = subterm_at(t, at);
    auto need = [&](bool ok, const char* what) {
        if (!ok) mismatch(rule, what);
    };
    auto fresh_for = [&](const Term& par, const Term& w) {
        if (occurs_free(w, par.name()))
            throw RewriteError(RewriteFailure::BlockedByFreshness,
                               std::string(rule_name(rule)) + ": channel '" + par.name() + "' occurs free in the bystander");
    };
    auto rebuild = [](const Term& par, Term l, Term r) {
        return Term::par(par.name(), par.type(), par.kind_right(), std::move(l), std::move(r));
    };
    Term out;
    switch (rule) {
        case RuleTag::PermAppL: {
            need(n.is(TermKind::App) && n.child(0).is(TermKind::Par), "expected (u || v) w");
            const Term& p = n.child(0);
            fresh_for(p, n.child(1));
            out = rebuild(p, Term::app(p.child(0), n.child(1)), Term::app(p.child(1), n.child(1)));
            break;
        }
        case RuleTag::PermAppR: {
            need(n.is(TermKind::App) && n.child(1).is(TermKind::Par), "expected w (u || v)");
            const Term& p = n.child(1);
            fresh_for(p, n.child(0));
            out = rebuild(p, Term::app(n.child(0), p.child(0)), Term::app(n.child(0), p.child(1)));
            break;
        }
        case RuleTag::PermEfq: {
            need(n.is(TermKind::Efq) && n.child(0).is(TermKind::Par), "expected efq (u || v)");
            const Term& p = n.child(0);
            out = rebuild(p, Term::efq(n.type(), p.child(0)), Term::efq(n.type(), p.child(1)));
            break;
        }
        case RuleTag::PermProj: {
            need(n.is(TermKind::Proj) && n.child(0).is(TermKind::Par), "expected (u || v).i");
            const Term& p = n.child(0);
            out = rebuild(p, Term::proj(p.child(0), n.index()), Term::proj(p.child(1), n.index()));
            break;
        }
        case RuleTag::PermLam: {
            need(n.is(TermKind::Lam) && n.child(0).is(TermKind::Par), "expected \\x. (u || v)");
            Term p = n.child(0);
            if (p.name() == n.name()) p = rename_channel(p, {});
            out = rebuild(p, Term::lam(n.name(), n.type(), p.child(0)), Term::lam(n.name(), n.type(), p.child(1)));
            break;
        }
        case RuleTag::PermPairL: {
            need(n.is(TermKind::Pair) && n.child(0).is(TermKind::Par), "expected <u || v, w>");
            const Term& p = n.child(0);
            fresh_for(p, n.child(1));
            out = rebuild(p, Term::pair(p.child(0), n.child(1)), Term::pair(p.child(1), n.child(1)));
            break;
        }
        case RuleTag::PermPairR: {
            need(n.is(TermKind::Pair) && n.child(1).is(TermKind::Par), "expected <w, u || v>");
            const Term& p = n.child(1);
            fresh_for(p, n.child(0));
            out = rebuild(p, Term::pair(n.child(0), p.child(0)), Term::pair(n.child(0), p.child(1)));
            break;
        }
        case RuleTag::PermParPar_L:
        case RuleTag::PermParPar_R: {
            bool left = rule == RuleTag::PermParPar_L;
            int inner_ix = left ? 0 : 1;
            need(n.is(TermKind::Par) && n.child(static_cast<std::size_t>(inner_ix)).is(TermKind::Par),
                 left ? "expected (u || v) || w" : "expected w || (u || v)");
            if (communication_complexity(n) == 0)
                throw RewriteError(RewriteFailure::BlockedByComplexityZero,
                                   std::string(rule_name(rule)) + ": outer channel '" + n.name() + "' has complexity 0");
            Term p = n.child(static_cast<std::size_t>(inner_ix));
            const Term& w = n.child(static_cast<std::size_t>(1 - inner_ix));
            if (p.name() == n.name() || occurs_free(w, p.name())) p = rename_channel(p, {});
            auto outer = [&](const Term& x) { return left ? rebuild(n, x, w) : rebuild(n, w, x); };
            out = rebuild(p, outer(p.child(0)), outer(p.child(1)));
            break;
        }
        default: mismatch(rule, "not a permutation rule");
    }
    return replace_at(t, at, out);
}

Term step_cross_drop(const Term& t, const Path& at, std::optional<RuleTag> direction) {
    const Term& n = subterm_at(t, at);
    if (!n.is(TermKind::Par)) mismatch(RuleTag::CrossDropL, "expected u || v");
    bool keep_left = !occurs_free(n.child(0), n.name());
    bool keep_right = !occurs_free(n.child(1), n.name());
    RuleTag dir;
    if (direction) {
        dir = *direction;
        if ((dir == RuleTag::CrossDropL && !keep_left) || (dir == RuleTag::CrossDropR && !keep_right))
            mismatch(dir, "channel occurs in the kept branch");
        if (dir != RuleTag::CrossDropL && dir != RuleTag::CrossDropR) mismatch(dir, "not a drop rule");
    } else if (keep_left) {
        dir = RuleTag::CrossDropL;
    } else if (keep_right) {
        dir = RuleTag::CrossDropR;
    } else {
        mismatch(RuleTag::CrossDropL, "channel '" + n.name() + "' occurs in both branches");
    }
    return replace_at(t, at, n.child(dir == RuleTag::CrossDropL ? 0 : 1));
}

bool cross_full_applies(const Term& par, const DeltaRules& rules) {
    if (!par.is(TermKind::Par)) return false;
    const Term& l = par.child(0);
    const Term& r = par.child(1);
    if (l.par_count() || r.par_count() || l.hole_count() || r.hole_count()) return false;
    if (!is_intuitionistic_normal(l, rules) || !is_intuitionistic_normal(r, rules)) return false;
    if (!rightmost_applied(l, par.name()) || !rightmost_applied(r, par.name())) return false;
    return communication_complexity(par) > 0;
}

Term step_cross_full(const Term& t, const Path& at, const DeltaRules& rules) {
    const Term& n = subterm_at(t, at);
    if (!n.is(TermKind::Par)) mismatch(RuleTag::CrossFull, "expected u || v");
    const std::string& a = n.name();
    Term left = n.child(0);
    Term right = n.child(1);
    if (left.par_count() || right.par_count() || !is_intuitionistic_normal(left, rules) ||
        !is_intuitionistic_normal(right, rules))
        throw RewriteError(RewriteFailure::NotNormal, "CrossFull: branches must be normal simply typed terms");
    auto lp = rightmost_applied(left, a);
    auto rp = rightmost_applied(right, a);
    if (!lp || !rp) mismatch(RuleTag::CrossFull, "rightmost occurrence of '" + a + "' is not applied in both branches");
    if (communication_complexity(n) == 0)
        throw RewriteError(RewriteFailure::BlockedByComplexityZero, "CrossFull: channel '" + a + "' has complexity 0");

    // Free names of each moving argument must survive being placed under the
    // other branch's binders; rename those binders first.
    {
        Split sl = split_at(left, *lp);
        Split sr = split_at(right, *rp);
        auto keep_u = uncaptured_free(sl);
        auto keep_v = uncaptured_free(sr);
        right = protect_path(right, *rp, keep_u);
        left = protect_path(left, *lp, keep_v);
    }
    Split c = split_at(left, *lp);
    Split d = split_at(right, *rp);
    assert(!occurs_free(c.arg, a) && !occurs_free(d.arg, a));

    const Formula cz = conjunction_of(types_of(d.captured));
    const Formula dy = conjunction_of(types_of(c.captured));
    const std::string b = fresh_name("b");
    Term u2 = multi_subst(c.arg, Term::app(Term::var(b, Formula::impl(cz, dy)), tuple_of(d.captured)), c.captured);
    Term v2 = multi_subst(d.arg, Term::app(Term::var(b, Formula::impl(dy, cz)), tuple_of(c.captured)), d.captured);
    const Formula& ka = n.type();
    const Formula& kb = n.kind_right();
    Term first = Term::par(a, kb, ka, fill_context({d.context, d.hole_type}, u2), left);
    Term second = Term::par(a, ka, kb, fill_context({c.context, c.hole_type}, v2), right);
    Term out = Term::par(b, cz, dy, std::move(first), std::move(second));
    if (!includes_free(n, out)) throw std::logic_error("CrossFull produced a new free variable");
    return replace_at(t, at, out);
}

Term apply_rule(const Term& t, const Path& at, RuleTag rule, const DeltaRules& rules) {
    switch (rule) {
        case RuleTag::Beta:
        case RuleTag::ProjPair:
        case RuleTag::DeltaIte: {
            auto found = intuitionistic_redex(subterm_at(t, at), rules);
            if (found != rule) mismatch(rule, "no such redex at the given path");
            return step_intuitionistic(t, at, rules);
        }
        case RuleTag::CrossDropL:
        case RuleTag::CrossDropR: return step_cross_drop(t, at, rule);
        case RuleTag::CrossFull: return step_cross_full(t, at, rules);
        default: return step_permutation(t, at, rule);
    }
}

std::vector<RuleTag> local_redexes(const Term& n, const DeltaRules& rules) {
    std::vector<RuleTag> out;
    if (auto r = intuitionistic_redex(n, rules)) out.push_back(*r);
    auto par_child = [&](std::size_t i) { return n.arity() > i && n.child(i).is(TermKind::Par); };
    switch (n.kind()) {
        case TermKind::App:
            if (par_child(0)) out.push_back(RuleTag::PermAppL);
            if (par_child(1)) out.push_back(RuleTag::PermAppR);
            break;
        case TermKind::Efq:
            if (par_child(0)) out.push_back(RuleTag::PermEfq);
            break;
        case TermKind::Proj:
            if (par_child(0)) out.push_back(RuleTag::PermProj);
            break;
        case TermKind::Lam:
            if (par_child(0)) out.push_back(RuleTag::PermLam);
            break;
        case TermKind::Pair:
            if (par_child(0)) out.push_back(RuleTag::PermPairL);
            if (par_child(1)) out.push_back(RuleTag::PermPairR);
            break;
        case TermKind::Par: {
            if ((par_child(0) || par_child(1)) && communication_complexity(n) > 0) {
                if (par_child(0)) out.push_back(RuleTag::PermParPar_L);
                if (par_child(1)) out.push_back(RuleTag::PermParPar_R);
            }
            if (!occurs_free(n.child(0), n.name())) out.push_back(RuleTag::CrossDropL);
            if (!occurs_free(n.child(1), n.name())) out.push_back(RuleTag::CrossDropR);
            if (cross_full_applies(n, rules)) out.push_back(RuleTag::CrossFull);
            break;
        }
        default: break;
    }
    return out;
}

namespace {

void collect_redexes(const Term& t, Path& path, const DeltaRules& rules, std::vector<Redex>& out, bool first_only) {
    for (RuleTag r : local_redexes(t, rules)) {
        out.push_back({path, r});
        if (first_only) return;
    }
    for (std::size_t i = 0; i < t.arity(); ++i) {
        if (first_only && !out.empty()) return;
        path.push_back(static_cast<int>(i));
        collect_redexes(t.child(i), path, rules, out, first_only);
        path.pop_back();
    }
}

}  // namespace

std::vector<Redex> find_redexes(const Term& t, const DeltaRules& rules) {
    std::vector<Redex> out;
    Path p;
    collect_redexes(t, p, rules, out, false);
    return out;
}

bool is_normal(const Term& t, const DeltaRules& rules) {
    std::vector<Redex> out;
    Path p;
    collect_redexes(t, p, rules, out, true);
    return out.empty();
}

}  // namespace lambdag
