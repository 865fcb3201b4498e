#include "lambdag/typing.hpp"

#include "lambdag/frontend.hpp"

namespace lambdag {

Formula bool_type() { return Formula::atom("Bool"); }
Formula nat_type() { return Formula::atom("Nat"); }
Formula string_type() { return Formula::atom("String"); }

namespace {

std::string show(const Formula& f) { return pretty_formula(f); }

class Checker {
public:
    explicit Checker(const TypeEnv& env) : env_(env) {}

    Formula run(const Term& t) { return go(t); }

private:
    const TypeEnv& env_;
    std::vector<TypedVar> scope_;
    Path path_;

    [[noreturn]] void fail(const std::string& msg, std::optional<Formula> expected = {},
                           std::optional<Formula> actual = {}) {
        throw TypeError(msg, path_, std::move(expected), std::move(actual));
    }

    Formula sub(const Term& t, int i) {
        path_.push_back(i);
        Formula f = go(t.child(static_cast<std::size_t>(i)));
        path_.pop_back();
        return f;
    }

    Formula bound(const Term& binder_body, int i, const std::string& name, const Formula& type) {
        scope_.emplace_back(name, type);
        Formula f = sub(binder_body, i);
        scope_.pop_back();
        return f;
    }

    Formula go(const Term& t) {
        switch (t.kind()) {
            case TermKind::Var: {
                const Formula* declared = nullptr;
                for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
                    if (it->first == t.name()) {
                        declared = &it->second;
                        break;
                    }
                if (!declared) {
                    auto it = env_.find(t.name());
                    if (it == env_.end()) fail("unbound variable '" + t.name() + "'");
                    declared = &it->second;
                }
                if (!(*declared == t.type()))
                    fail("variable '" + t.name() + "' annotated " + show(t.type()) + " but bound at " + show(*declared),
                         *declared, t.type());
                return t.type();
            }
            case TermKind::Lam:
                return Formula::impl(t.type(), bound(t, 0, t.name(), t.type()));
            case TermKind::App: {
                Formula fn = sub(t, 0);
                Formula arg = sub(t, 1);
                if (!fn.is_impl()) fail("application of a non-implication " + show(fn), {}, fn);
                if (!(fn.lhs() == arg)) fail("argument type mismatch", fn.lhs(), arg);
                return fn.rhs();
            }
            case TermKind::Pair:
                return Formula::conj(sub(t, 0), sub(t, 1));
            case TermKind::Proj: {
                Formula f = sub(t, 0);
                if (!f.is_and()) fail("projection of a non-conjunction " + show(f), {}, f);
                return t.index() == 0 ? f.lhs() : f.rhs();
            }
            case TermKind::Efq: {
                if (!t.type().is_atom()) fail("efq target must be an atom other than bot", {}, t.type());
                Formula f = sub(t, 0);
                if (!f.is_bot()) fail("efq applied to a term not of type bot", Formula::bot(), f);
                return t.type();
            }
            case TermKind::Par: {
                Formula l = bound(t, 0, t.name(), Formula::impl(t.type(), t.kind_right()));
                Formula r = bound(t, 1, t.name(), Formula::impl(t.kind_right(), t.type()));
                if (!(l == r)) fail("parallel branches have different types", l, r);
                return l;
            }
            case TermKind::BoolLit: return bool_type();
            case TermKind::NatLit: return nat_type();
            case TermKind::StrLit: return string_type();
            case TermKind::Ite: {
                Formula c = sub(t, 0);
                if (!(c == bool_type())) fail("condition must be Bool", bool_type(), c);
                Formula a = sub(t, 1);
                Formula b = sub(t, 2);
                if (!(a == b)) fail("conditional branches have different types", a, b);
                return a;
            }
            case TermKind::Hole: return t.type();
        }
        fail("unknown term kind");
    }
};

Formula structural(const Term& t, Path& path) {
    auto sub = [&](int i) {
        path.push_back(i);
        Formula f = structural(t.child(static_cast<std::size_t>(i)), path);
        path.pop_back();
        return f;
    };
    switch (t.kind()) {
        case TermKind::Var:
        case TermKind::Efq:
        case TermKind::Hole: return t.type();
        case TermKind::Lam: return Formula::impl(t.type(), sub(0));
        case TermKind::App: {
            Formula fn = sub(0);
            if (!fn.is_impl()) throw TypeError("application of a non-implication", path, {}, fn);
            return fn.rhs();
        }
        case TermKind::Pair: return Formula::conj(sub(0), sub(1));
        case TermKind::Proj: {
            Formula f = sub(0);
            if (!f.is_and()) throw TypeError("projection of a non-conjunction", path, {}, f);
            return t.index() == 0 ? f.lhs() : f.rhs();
        }
        case TermKind::Par: return sub(0);
        case TermKind::BoolLit: return bool_type();
        case TermKind::NatLit: return nat_type();
        case TermKind::StrLit: return string_type();
        case TermKind::Ite: return sub(1);
    }
    throw TypeError("unknown term kind", path);
}

}  // namespace

Formula infer(const TypeEnv& env, const Term& t) { return Checker(env).run(t); }

Formula type_of(const Term& t) {
    Path p;
    return structural(t, p);
}

std::pair<Formula, Formula> communication_kind(const Term& par) {
    if (!par.is(TermKind::Par)) throw std::invalid_argument("communication_kind: not a parallel node");
    return {par.type(), par.kind_right()};
}

std::size_t communication_complexity(const Term& par, const Formula& type, const std::vector<Formula>& hypotheses) {
    if (!par.is(TermKind::Par)) throw std::invalid_argument("communication_complexity: not a parallel node");
    FormulaSet excluded = proper_subformulas(type);
    for (const auto& h : hypotheses) {
        auto s = strong_subformulas(h);
        excluded.insert(s.begin(), s.end());
    }
    std::size_t best = 0;
    for (const auto& side : {par.type(), par.kind_right()})
        for (const auto& p : prime_factors(side))
            if (!excluded.count(p)) best = std::max(best, p.size());
    return best;
}

std::size_t communication_complexity(const Term& par) {
    std::vector<Formula> hyps;
    for (const auto& [_, f] : free_vars(par)) hyps.push_back(f);
    return communication_complexity(par, type_of(par), hyps);
}

std::size_t communication_complexity(const Term& par, const TypeEnv& env) {
    std::vector<Formula> hyps;
    for (const auto& [_, f] : env) hyps.push_back(f);
    return communication_complexity(par, infer(env, par), hyps);
}

}  // namespace lambdag
