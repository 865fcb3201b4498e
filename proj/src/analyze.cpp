#include "lambdag/analyze.hpp"

#include "lambdag/frontend.hpp"
#include "lambdag/strategy.hpp"

namespace lambdag {

bool AnalysisReport::ok() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

void AnalysisReport::add(CheckResult r) {
    if (!r.pass && !r.witness) r.witness = Path{};
    checks.push_back(std::move(r));
}

namespace {

std::vector<Formula> hypotheses(const Term& t) {
    std::vector<Formula> out;
    for (const auto& [_, f] : free_vars(t)) out.push_back(f);
    return out;
}

// env extended with the free variables of t that env does not mention, so a
// branch under a channel can be analysed on its own.
TypeEnv with_free(const TypeEnv& env, const Term& t) {
    TypeEnv out = env;
    for (const auto& [name, f] : free_vars(t)) out.emplace(name, f);
    return out;
}

struct SubformulaWalker {
    FormulaSet subs;          // subformulas of the hypotheses and the type
    FormulaSet proper;        // proper subformulas of the same
    std::vector<std::pair<std::string, bool>> scope;  // name, is channel
    std::optional<CheckResult> failure;
    Path path;

    bool conj_ok(const Formula& f) const {
        if (subs.count(f)) return true;
        if (!f.is_and()) return false;
        for (const auto& p : prime_factors(f))
            if (!subs.count(p)) return false;
        return true;
    }

    bool is_channel(const std::string& name) const {
        for (auto it = scope.rbegin(); it != scope.rend(); ++it)
            if (it->first == name) return it->second;
        return false;
    }

    void fail(const std::string& detail) {
        if (!failure) failure = CheckResult{"subformula", false, path, detail};
    }

    void walk(const Term& t) {
        if (failure || t.is(TermKind::Hole)) return;
        if (t.is(TermKind::Par)) {
            for (const auto& side : {t.type(), t.kind_right()})
                for (const auto& p : prime_factors(side))
                    if (!proper.count(p))
                        fail("channel '" + t.name() + "' kind factor " + pretty_formula(p) +
                             " is not a proper subformula of a hypothesis or of the type");
        }
        bool channel_var = t.is(TermKind::Var) && is_channel(t.name());
        if (!channel_var) {
            Formula ty = type_of(t);
            if (!conj_ok(ty)) fail("subterm type " + pretty_formula(ty) + " is not built from subformulas");
        }
        bool binds = t.is(TermKind::Lam) || t.is(TermKind::Par);
        if (binds) scope.emplace_back(t.name(), t.is(TermKind::Par));
        for (std::size_t i = 0; i < t.arity(); ++i) {
            path.push_back(static_cast<int>(i));
            walk(t.child(i));
            path.pop_back();
        }
        if (binds) scope.pop_back();
    }
};

void require_simple_normal(const Term& t, const DeltaRules& rules, const char* who) {
    if (t.par_count() != 0) throw PreconditionError(std::string(who) + ": term contains a parallel composition");
    if (!is_intuitionistic_normal(t, rules)) throw PreconditionError(std::string(who) + ": term is not normal");
}

void collect_binders(const Term& t, Path& path, std::vector<std::pair<Path, TypedVar>>& out) {
    if (t.is(TermKind::Lam)) out.push_back({path, {t.name(), t.type()}});
    for (std::size_t i = 0; i < t.arity(); ++i) {
        path.push_back(static_cast<int>(i));
        collect_binders(t.child(i), path, out);
        path.pop_back();
    }
}

}  // namespace

AnalysisReport check_subformula_property(const Term& t, const TypeEnv& env) {
    AnalysisReport rep{t, {}};
    Formula a = infer(with_free(env, t), t);
    SubformulaWalker w;
    auto absorb = [&](const Formula& f) {
        auto s = subformulas(f);
        w.subs.insert(s.begin(), s.end());
        auto p = proper_subformulas(f);
        w.proper.insert(p.begin(), p.end());
    };
    absorb(a);
    for (const auto& h : hypotheses(t)) absorb(h);
    w.walk(t);
    rep.add(w.failure ? *w.failure : CheckResult{"subformula", true, std::nullopt, "all types built from subformulas"});
    return rep;
}

bool check_parallel_form(const Term& t) { return is_parallel_form(t); }

AnalysisReport check_bound_hypothesis(const Term& t, const TypeEnv& env, const DeltaRules& rules) {
    require_simple_normal(t, rules, "check_bound_hypothesis");
    AnalysisReport rep{t, {}};
    Formula a = infer(with_free(env, t), t);
    FormulaSet allowed;
    for (const auto& p : prime_factors(a)) {
        auto s = proper_subformulas(p);
        allowed.insert(s.begin(), s.end());
    }
    for (const auto& h : hypotheses(t)) {
        auto s = strong_subformulas(h);
        allowed.insert(s.begin(), s.end());
    }
    std::vector<std::pair<Path, TypedVar>> binders;
    Path p;
    collect_binders(t, p, binders);
    for (const auto& [where, tv] : binders) {
        if (allowed.count(tv.second)) continue;
        rep.add({"bound-hypothesis", false, where,
                 "bound '" + tv.first + "' : " + pretty_formula(tv.second) +
                     " is neither below a prime factor of the type nor a strong subformula of a hypothesis"});
        return rep;
    }
    rep.add({"bound-hypothesis", true, std::nullopt, std::to_string(binders.size()) + " binders checked"});
    return rep;
}

AnalysisReport check_applied_occurrences(const Term& t, const std::string& z, const TypeEnv& env,
                                         const DeltaRules& rules) {
    require_simple_normal(t, rules, "check_applied_occurrences");
    auto fv = free_vars(t);
    auto it = fv.find(z);
    if (it == fv.end()) throw PreconditionError("check_applied_occurrences: '" + z + "' is not free in the term");
    AnalysisReport rep{t, {}};
    const Formula b = it->second;
    const Formula a = infer(with_free(env, t), t);
    bool exempt = b.is_bot() || is_subformula(b, a);
    for (const auto& [name, f] : fv)
        if (name != z && is_proper_subformula(b, f)) exempt = true;
    if (exempt) {
        rep.add({"applied-occurrences", true, std::nullopt, "type of '" + z + "' is exempt"});
        return rep;
    }
    for (const auto& occ : occurrences_of(t, z)) {
        bool applied = false;
        if (!occ.path.empty()) {
            Path parent(occ.path.begin(), occ.path.end() - 1);
            const Term& up = subterm_at(t, parent);
            applied = (up.is(TermKind::App) && occ.path.back() == 0) || up.is(TermKind::Proj);
        }
        if (!applied) {
            rep.add({"applied-occurrences", false, occ.path, "occurrence of '" + z + "' is not applied"});
            return rep;
        }
    }
    rep.add({"applied-occurrences", true, std::nullopt, "every occurrence of '" + z + "' is applied"});
    return rep;
}

AnalysisReport check_subject_reduction(const std::vector<ReductionStep>& trace, const TypeEnv& env,
                                       const DeltaRules& rules) {
    AnalysisReport rep{trace.empty() ? Term() : trace.front().before, {}};
    std::optional<CheckResult> type_fail, fv_fail, replay_fail;
    auto at = [](std::size_t i) { return "step " + std::to_string(i) + ": "; };
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const auto& s = trace[i];
        if (!replay_fail && i > 0 && !alpha_equal(trace[i - 1].after, s.before))
            replay_fail = CheckResult{"replay", false, s.path, at(i) + "does not start where the previous step ended"};
        if (!replay_fail) {
            try {
                if (!alpha_equal(apply_rule(s.before, s.path, s.rule, rules), s.after))
                    replay_fail = CheckResult{"replay", false, s.path,
                                              at(i) + std::string(rule_name(s.rule)) + " does not produce the recorded term"};
            } catch (const std::exception& e) {
                replay_fail = CheckResult{"replay", false, s.path, at(i) + e.what()};
            }
        }
        if (!type_fail) {
            try {
                Formula before = infer(env, s.before);
                Formula after = infer(env, s.after);
                if (!(before == after))
                    type_fail = CheckResult{"type-preserved", false, s.path,
                                            at(i) + pretty_formula(before) + " became " + pretty_formula(after)};
            } catch (const TypeError& e) {
                type_fail = CheckResult{"type-preserved", false, s.path, at(i) + e.what()};
            }
        }
        if (!fv_fail) {
            try {
                auto fb = free_vars(s.before);
                for (const auto& [name, f] : free_vars(s.after)) {
                    auto it = fb.find(name);
                    // a program rule's right side may name other constants
                    bool from_rule = s.rule == RuleTag::DeltaIte && env.count(name) && env.at(name) == f;
                    if (!from_rule && (it == fb.end() || !(it->second == f))) {
                        fv_fail = CheckResult{"free-vars-kept", false, s.path, at(i) + "new free variable '" + name + "'"};
                        break;
                    }
                }
            } catch (const ScopeError& e) {
                fv_fail = CheckResult{"free-vars-kept", false, s.path, at(i) + e.what()};
            }
        }
    }
    std::string n = std::to_string(trace.size()) + " steps";
    rep.add(type_fail ? *type_fail : CheckResult{"type-preserved", true, std::nullopt, n});
    rep.add(fv_fail ? *fv_fail : CheckResult{"free-vars-kept", true, std::nullopt, n});
    rep.add(replay_fail ? *replay_fail : CheckResult{"replay", true, std::nullopt, n});
    return rep;
}

}  // namespace lambdag
