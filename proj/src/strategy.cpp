#include "lambdag/strategy.hpp"

#include <algorithm>
#include <future>
#include <optional>

namespace lambdag {

namespace {

// Parallel branch normalization forks only near the root; deeper forks cost
// more in thread start-up than they save.
constexpr int kMaxForkDepth = 3;

bool spine_ok(const Term& t) {
    if (t.is(TermKind::Par)) return spine_ok(t.child(0)) && spine_ok(t.child(1));
    return t.par_count() == 0;
}

std::optional<std::pair<Path, RuleTag>> first_intuitionistic(const Term& t, Path& path, const DeltaRules& rules) {
    if (auto r = intuitionistic_redex(t, rules)) return std::make_pair(path, *r);
    for (std::size_t i = 0; i < t.arity(); ++i) {
        path.push_back(static_cast<int>(i));
        auto found = first_intuitionistic(t.child(i), path, rules);
        path.pop_back();
        if (found) return found;
    }
    return std::nullopt;
}

std::optional<std::pair<Path, RuleTag>> first_intuitionistic(const Term& t, const DeltaRules& rules) {
    Path p;
    return first_intuitionistic(t, p, rules);
}

void collect_pars(const Term& t, Path& path, std::vector<Path>& out) {
    if (t.par_count() == 0) return;
    if (t.is(TermKind::Par)) out.push_back(path);
    for (std::size_t i = 0; i < t.arity(); ++i) {
        path.push_back(static_cast<int>(i));
        collect_pars(t.child(i), path, out);
        path.pop_back();
    }
}

// Pre-order paths of the Par nodes under `base`, as global paths.
std::vector<Path> pars_under(const Term& root, const Path& base) {
    std::vector<Path> out;
    Path p = base;
    collect_pars(subterm_at(root, base), p, out);
    return out;
}

void post_order_pars(const Term& t, Path& path, std::vector<Path>& out) {
    if (t.par_count() == 0) return;
    for (std::size_t i = 0; i < t.arity(); ++i) {
        path.push_back(static_cast<int>(i));
        post_order_pars(t.child(i), path, out);
        path.pop_back();
    }
    if (t.is(TermKind::Par)) out.push_back(path);
}

std::optional<RuleTag> drop_direction(const Term& par) {
    if (!occurs_free(par.child(0), par.name())) return RuleTag::CrossDropL;
    if (!occurs_free(par.child(1), par.name())) return RuleTag::CrossDropR;
    return std::nullopt;
}

FormulaSet down_closure(const FormulaSet& s) {
    FormulaSet out;
    for (const auto& f : s) {
        auto sub = subformulas(f);
        out.insert(sub.begin(), sub.end());
    }
    return out;
}

std::size_t closed_complexity(const Term& par, const FormulaSet& closed) {
    std::size_t best = 0;
    for (const auto& side : {par.type(), par.kind_right()})
        for (const auto& p : prime_factors(side))
            if (!closed.count(p)) best = std::max(best, p.size());
    return best;
}

std::size_t max_complexity_under(const Term& root, const Path& at, const FormulaSet& closed) {
    std::size_t best = 0;
    for (const auto& p : pars_under(root, at)) best = std::max(best, closed_complexity(subterm_at(root, p), closed));
    return best;
}

}  // namespace

bool is_parallel_form(const Term& t) { return spine_ok(t); }

std::pair<Term, std::size_t> intuitionistic_normalize(const Term& t, const DeltaRules& rules) {
    Term cur = t;
    std::size_t n = 0;
    while (auto r = first_intuitionistic(cur, rules)) {
        cur = step_intuitionistic(cur, r->first, rules);
        ++n;
    }
    return {cur, n};
}

FormulaSet admissible_set(const Term& t) {
    FormulaSet out = proper_subformulas(type_of(t));
    for (const auto& [_, f] : free_vars(t)) {
        auto s = strong_subformulas(f);
        out.insert(s.begin(), s.end());
    }
    return out;
}

std::size_t a_communication_complexity(const Term& par, const FormulaSet& admissible) {
    if (!par.is(TermKind::Par)) throw std::invalid_argument("a_communication_complexity: not a parallel node");
    return closed_complexity(par, down_closure(admissible));
}

ComplexityTuple a_complexity(const Term& par, const FormulaSet& admissible, const DeltaRules& rules) {
    ComplexityTuple k;
    k.c = a_communication_complexity(par, admissible);
    k.d = par.child(0).par_count() + par.child(1).par_count();
    if (k.d == 0)
        k.l = intuitionistic_normalize(par.child(0), rules).second + intuitionistic_normalize(par.child(1), rules).second;
    k.o = count_free(par.child(0), par.name()) + count_free(par.child(1), par.name());
    return k;
}

// --- engine -------------------------------------------------------------

Engine::Engine(Term root, StrategyConfig cfg, DeltaRules rules)
    : root_(std::move(root)), cfg_(std::move(cfg)), rules_(std::move(rules)) {}

void Engine::record(RuleTag rule, const Path& at, Term after) {
    ReductionStep s{rule, at, root_, std::move(after)};
    root_ = s.after;
    if (cfg_.trace_sink) cfg_.trace_sink(s, steps_);
    ++steps_;
    if (cfg_.keep_trace) trace_.push_back(std::move(s));
}

void Engine::step(RuleTag rule, const Path& at) {
    if (steps_ >= cfg_.max_steps) throw StepBudgetExceeded(cfg_.max_steps, trace_);
    record(rule, at, apply_rule(root_, at, rule, rules_));
}

void Engine::permute(RuleTag rule, const Path& at) {
    try {
        step(rule, at);
    } catch (const RewriteError& e) {
        if (e.reason != RewriteFailure::BlockedByFreshness) throw;
        int inner = (rule == RuleTag::PermAppR || rule == RuleTag::PermPairR) ? 1 : 0;
        root_ = rename_channel(root_, extend(at, inner));
        step(rule, at);
    }
}

void Engine::push_down(const Path& at) {
    const Term n = subterm_at(root_, at);
    auto par = [&](std::size_t i) { return n.arity() > i && n.child(i).is(TermKind::Par); };
    std::optional<RuleTag> rule;
    switch (n.kind()) {
        case TermKind::Lam:
            if (par(0)) rule = RuleTag::PermLam;
            break;
        case TermKind::App:
            if (par(0)) rule = RuleTag::PermAppL;
            else if (par(1)) rule = RuleTag::PermAppR;
            break;
        case TermKind::Pair:
            if (par(0)) rule = RuleTag::PermPairL;
            else if (par(1)) rule = RuleTag::PermPairR;
            break;
        case TermKind::Proj:
            if (par(0)) rule = RuleTag::PermProj;
            break;
        case TermKind::Efq:
            if (par(0)) rule = RuleTag::PermEfq;
            break;
        default: break;
    }
    if (!rule) return;
    permute(*rule, at);
    push_down(extend(at, 0));
    push_down(extend(at, 1));
}

void Engine::parallelize(const Path& at) {
    const Term n = subterm_at(root_, at);
    if (n.par_count() == 0) return;
    if (n.is(TermKind::Ite)) throw StrategyError("a conditional with a parallel subterm has no permutation rule");
    for (std::size_t i = 0; i < n.arity(); ++i) parallelize(extend(at, static_cast<int>(i)));
    if (!n.is(TermKind::Par)) push_down(at);
}

std::size_t Engine::normalize_intuitionistic(const Path& at) {
    std::size_t n = 0;
    while (auto r = first_intuitionistic(subterm_at(root_, at), rules_)) {
        Path p = at;
        p.insert(p.end(), r->first.begin(), r->first.end());
        step(r->second, p);
        ++n;
    }
    return n;
}

void Engine::drop_exhaustively(const Path& at) {
    for (;;) {
        std::vector<Path> pars;
        Path p = at;
        post_order_pars(subterm_at(root_, at), p, pars);
        bool dropped = false;
        for (const auto& q : pars) {
            if (auto dir = drop_direction(subterm_at(root_, q))) {
                step(*dir, q);
                dropped = true;
                break;
            }
        }
        if (!dropped) return;
    }
}

bool Engine::side_step(const Path& at, const FormulaSet& admissible) {
    const FormulaSet closed = down_closure(admissible);
    struct Candidate {
        ComplexityTuple k;
        std::size_t size;
        std::size_t rank;
        Path path;
    };
    std::vector<Candidate> cands;
    auto pars = pars_under(root_, at);
    for (std::size_t i = 0; i < pars.size(); ++i) {
        const Term& n = subterm_at(root_, pars[i]);
        ComplexityTuple k;
        k.c = closed_complexity(n, closed);
        k.d = n.child(0).par_count() + n.child(1).par_count();
        if (k.d == 0)
            k.l = intuitionistic_normalize(n.child(0), rules_).second + intuitionistic_normalize(n.child(1), rules_).second;
        k.o = count_free(n.child(0), n.name()) + count_free(n.child(1), n.name());
        cands.push_back({k, n.size(), i, pars[i]});
    }
    std::sort(cands.begin(), cands.end(), [](const Candidate& x, const Candidate& y) {
        if (x.k != y.k) return x.k > y.k;
        if (x.size != y.size) return x.size < y.size;
        return x.rank < y.rank;
    });

    for (const auto& cand : cands) {
        const Term n = subterm_at(root_, cand.path);
        const auto& k = cand.k;
        if (k.d > 0) {
            std::vector<RuleTag> order;
            if (n.child(0).is(TermKind::Par)) order.push_back(RuleTag::PermParPar_L);
            if (n.child(1).is(TermKind::Par)) order.push_back(RuleTag::PermParPar_R);
            for (RuleTag r : order) {
                try {
                    step(r, cand.path);
                    return true;
                } catch (const RewriteError& e) {
                    if (e.reason != RewriteFailure::BlockedByComplexityZero) throw;
                }
            }
            continue;
        }
        if (k.l > 0) {
            normalize_intuitionistic(extend(cand.path, 0));
            normalize_intuitionistic(extend(cand.path, 1));
            return true;
        }
        if (k.c > 0 && cross_full_applies(n, rules_)) {
            step(RuleTag::CrossFull, cand.path);
            normalize_intuitionistic(extend(extend(cand.path, 0), 0));
            normalize_intuitionistic(extend(extend(cand.path, 1), 0));
            drop_exhaustively(cand.path);
            return true;
        }
        if (auto dir = drop_direction(n)) {
            step(*dir, cand.path);
            return true;
        }
    }
    return false;
}

bool Engine::root_is_redex(const Term& t) const { return !local_redexes(t, rules_).empty(); }

void Engine::normalize_branches(const Path& at) {
    if (!cfg_.parallel_branches || depth_ >= kMaxForkDepth) {
        normalize(extend(at, 0));
        normalize(extend(at, 1));
        return;
    }
    const Path right = extend(at, 1);
    StrategyConfig sub_cfg;
    sub_cfg.max_steps = cfg_.max_steps > steps_ ? cfg_.max_steps - steps_ : 0;
    sub_cfg.parallel_branches = true;
    sub_cfg.keep_trace = true;
    Engine sub(subterm_at(root_, right), sub_cfg, rules_);
    sub.depth_ = depth_ + 1;
    auto fut = std::async(std::launch::async, [&sub] { sub.normalize({}); });

    ++depth_;
    try {
        normalize(extend(at, 0));
    } catch (...) {
        --depth_;
        try {
            fut.get();
        } catch (...) {
        }
        throw;
    }
    --depth_;

    std::exception_ptr failure;
    try {
        fut.get();
    } catch (const StepBudgetExceeded& e) {
        sub.trace_ = e.partial;
        failure = std::current_exception();
    }
    for (const auto& s : sub.trace_) {
        if (steps_ >= cfg_.max_steps) throw StepBudgetExceeded(cfg_.max_steps, trace_);
        Path p = right;
        p.insert(p.end(), s.path.begin(), s.path.end());
        // s.before may differ from the previous after by a silent renaming
        root_ = replace_at(root_, right, s.before);
        record(s.rule, p, replace_at(root_, right, s.after));
    }
    if (failure) throw StepBudgetExceeded(cfg_.max_steps, trace_);
}

void Engine::normalize(const Path& at) {
    for (;;) {
        const Term t = subterm_at(root_, at);
        if (!is_parallel_form(t)) {
            parallelize(at);
            continue;
        }
        if (t.par_count() == 0) {
            normalize_intuitionistic(at);
            return;
        }
        if (!root_is_redex(t)) {
            normalize_branches(at);
            if (!root_is_redex(subterm_at(root_, at))) return;
            continue;
        }

        const FormulaSet closed_root = down_closure(admissible_set(t));
        std::size_t r = 0;
        std::optional<Path> w;
        std::size_t w_size = 0;
        for (const auto& p : pars_under(root_, at)) {
            const Term& n = subterm_at(root_, p);
            std::size_t c = closed_complexity(n, closed_root);
            if (c > r || (c == r && w && n.size() < w_size)) {
                r = c;
                w = p;
                w_size = n.size();
            }
        }
        if (r == 0) {
            auto dir = drop_direction(t);
            if (!dir) throw StrategyError("parallel root is a redex but neither a drop nor of positive complexity");
            step(*dir, at);
            continue;
        }

        // The inner loop measures against the selected subterm's own
        // admissible set; fall back to the root's when that set hides every
        // complexity (the measure must stay positive for the loop to run).
        FormulaSet admissible = admissible_set(subterm_at(root_, *w));
        FormulaSet closed = down_closure(admissible);
        std::size_t rw = max_complexity_under(root_, *w, closed);
        if (rw == 0) {
            admissible = admissible_set(t);
            closed = closed_root;
            rw = r;
        }
        while (max_complexity_under(root_, *w, closed) >= rw) {
            if (!side_step(*w, admissible))
                throw StrategyError("side strategy found no move inside a subterm of positive complexity");
        }
    }
}

// --- free functions -----------------------------------------------------

Term to_parallel_form(const Term& t) {
    StrategyConfig cfg;
    cfg.keep_trace = false;
    Engine e(t, cfg);
    e.parallelize({});
    return e.root();
}

Term side_reduce(const Term& t, const DeltaRules& rules) {
    StrategyConfig cfg;
    cfg.keep_trace = false;
    Engine e(t, cfg, rules);
    if (!e.side_step({}, admissible_set(t))) throw StrategyError("side_reduce: no parallel node admits a move");
    return e.root();
}

NormalizeResult normalize_master(const Term& t, const StrategyConfig& cfg, const DeltaRules& rules) {
    Engine e(t, cfg, rules);
    e.normalize({});
    NormalizeResult out;
    out.term = e.root();
    out.steps = e.steps();
    out.trace = e.take_trace();
    return out;
}

}  // namespace lambdag
