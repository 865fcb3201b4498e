#include "lambdag/term.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <set>

namespace lambdag {

struct Term::Node {
    TermKind kind = TermKind::Hole;
    std::string name;
    Formula f1;
    Formula f2;
    int idx = 0;
    std::vector<Term> kids;
    std::size_t size = 1;
    std::size_t pars = 0;
    std::size_t holes = 0;
};

Term Term::make(TermKind k, std::string name, Formula f1, Formula f2, int idx, std::vector<Term> kids) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->name = std::move(name);
    n->f1 = std::move(f1);
    n->f2 = std::move(f2);
    n->idx = idx;
    n->kids = std::move(kids);
    for (const auto& c : n->kids) {
        n->size += c.size();
        n->pars += c.par_count();
        n->holes += c.hole_count();
    }
    if (k == TermKind::Par) ++n->pars;
    if (k == TermKind::Hole) ++n->holes;
    return Term(std::move(n));
}

Term::Term() : Term(hole(Formula::bot())) {}

Term Term::var(std::string name, Formula type) {
    return make(TermKind::Var, std::move(name), std::move(type), {}, 0, {});
}
Term Term::lam(std::string binder, Formula binder_type, Term body) {
    return make(TermKind::Lam, std::move(binder), std::move(binder_type), {}, 0, {std::move(body)});
}
Term Term::app(Term fn, Term arg) {
    return make(TermKind::App, {}, {}, {}, 0, {std::move(fn), std::move(arg)});
}
Term Term::pair(Term fst, Term snd) {
    return make(TermKind::Pair, {}, {}, {}, 0, {std::move(fst), std::move(snd)});
}
Term Term::proj(Term target, int index) {
    assert(index == 0 || index == 1);
    return make(TermKind::Proj, {}, {}, {}, index, {std::move(target)});
}
Term Term::efq(Formula atom, Term target) {
    return make(TermKind::Efq, {}, std::move(atom), {}, 0, {std::move(target)});
}
Term Term::par(std::string channel, Formula kind_left, Formula kind_right, Term left, Term right) {
    return make(TermKind::Par, std::move(channel), std::move(kind_left), std::move(kind_right), 0,
                {std::move(left), std::move(right)});
}
Term Term::boolean(bool value) { return make(TermKind::BoolLit, {}, {}, {}, value ? 1 : 0, {}); }
Term Term::nat(std::uint64_t value) { return nat_text(std::to_string(value)); }
Term Term::nat_text(std::string digits) { return make(TermKind::NatLit, std::move(digits), {}, {}, 0, {}); }
Term Term::str(std::string value) { return make(TermKind::StrLit, std::move(value), {}, {}, 0, {}); }
Term Term::ite(Term cond, Term then_branch, Term else_branch) {
    return make(TermKind::Ite, {}, {}, {}, 0,
                {std::move(cond), std::move(then_branch), std::move(else_branch)});
}
Term Term::hole(Formula type) { return make(TermKind::Hole, {}, std::move(type), {}, 0, {}); }

TermKind Term::kind() const { return node_->kind; }
const std::string& Term::name() const { return node_->name; }
const Formula& Term::type() const { return node_->f1; }
const Formula& Term::kind_right() const { return node_->f2; }
int Term::index() const { return node_->idx; }
std::size_t Term::arity() const { return node_->kids.size(); }
const Term& Term::child(std::size_t i) const { return node_->kids.at(i); }
std::size_t Term::size() const { return node_->size; }
std::size_t Term::par_count() const { return node_->pars; }
std::size_t Term::hole_count() const { return node_->holes; }

Term Term::with_child(std::size_t i, Term c) const {
    auto kids = node_->kids;
    kids.at(i) = std::move(c);
    return make(node_->kind, node_->name, node_->f1, node_->f2, node_->idx, std::move(kids));
}

bool operator==(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return true;
    const auto& x = *a.node_;
    const auto& y = *b.node_;
    if (x.kind != y.kind || x.size != y.size || x.idx != y.idx || x.name != y.name) return false;
    if (!(x.f1 == y.f1) || !(x.f2 == y.f2)) return false;
    for (std::size_t i = 0; i < x.kids.size(); ++i)
        if (!(x.kids[i] == y.kids[i])) return false;
    return true;
}

// --- paths --------------------------------------------------------------

const Term& subterm_at(const Term& t, const Path& p) {
    const Term* cur = &t;
    for (int i : p) {
        if (i < 0 || static_cast<std::size_t>(i) >= cur->arity()) throw std::out_of_range("path leaves the term");
        cur = &cur->child(static_cast<std::size_t>(i));
    }
    return *cur;
}

namespace {

Term replace_rec(const Term& t, const Path& p, std::size_t depth, const Term& r) {
    if (depth == p.size()) return r;
    auto i = static_cast<std::size_t>(p[depth]);
    if (i >= t.arity()) throw std::out_of_range("path leaves the term");
    return t.with_child(i, replace_rec(t.child(i), p, depth + 1, r));
}

bool is_binder(const Term& t) { return t.is(TermKind::Lam) || t.is(TermKind::Par); }

}  // namespace

Term replace_at(const Term& t, const Path& p, const Term& replacement) { return replace_rec(t, p, 0, replacement); }

Path extend(Path p, int child) {
    p.push_back(child);
    return p;
}

bool is_prefix(const Path& prefix, const Path& p) {
    return prefix.size() <= p.size() && std::equal(prefix.begin(), prefix.end(), p.begin());
}

// --- variables ----------------------------------------------------------

namespace {

void free_rec(const Term& t, std::vector<std::string>& bound, std::map<std::string, Formula>& out) {
    switch (t.kind()) {
        case TermKind::Var: {
            if (std::find(bound.begin(), bound.end(), t.name()) != bound.end()) return;
            auto [it, inserted] = out.emplace(t.name(), t.type());
            if (!inserted && !(it->second == t.type()))
                throw ScopeError("free variable '" + t.name() + "' used at two types");
            return;
        }
        case TermKind::Lam:
        case TermKind::Par:
            bound.push_back(t.name());
            for (std::size_t i = 0; i < t.arity(); ++i) free_rec(t.child(i), bound, out);
            bound.pop_back();
            return;
        default:
            for (std::size_t i = 0; i < t.arity(); ++i) free_rec(t.child(i), bound, out);
    }
}

std::size_t count_rec(const Term& t, const std::string& x) {
    if (t.is(TermKind::Var)) return t.name() == x ? 1 : 0;
    if (is_binder(t) && t.name() == x) return 0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < t.arity(); ++i) n += count_rec(t.child(i), x);
    return n;
}

void occ_rec(const Term& t, const std::string& x, Path& path, std::size_t& rank, std::vector<Occurrence>& out) {
    std::size_t mine = rank++;
    if (t.is(TermKind::Var)) {
        if (t.name() == x) out.push_back({path, mine});
        return;
    }
    if (is_binder(t) && t.name() == x) {
        rank += t.size() - 1;
        return;
    }
    for (std::size_t i = 0; i < t.arity(); ++i) {
        path.push_back(static_cast<int>(i));
        occ_rec(t.child(i), x, path, rank, out);
        path.pop_back();
    }
}

void binders_rec(const Term& t, std::vector<std::string>& out) {
    if (is_binder(t)) out.push_back(t.name());
    for (std::size_t i = 0; i < t.arity(); ++i) binders_rec(t.child(i), out);
}

}  // namespace

std::map<std::string, Formula> free_vars(const Term& t) {
    std::vector<std::string> bound;
    std::map<std::string, Formula> out;
    free_rec(t, bound, out);
    return out;
}

bool occurs_free(const Term& t, const std::string& x) { return count_rec(t, x) > 0; }
std::size_t count_free(const Term& t, const std::string& x) { return count_rec(t, x); }

std::vector<Occurrence> occurrences_of(const Term& t, const std::string& x) {
    std::vector<Occurrence> out;
    Path path;
    std::size_t rank = 0;
    occ_rec(t, x, path, rank, out);
    return out;
}

std::vector<std::string> binder_names(const Term& t) {
    std::vector<std::string> out;
    binders_rec(t, out);
    return out;
}

// --- names --------------------------------------------------------------

namespace {
std::atomic<std::uint64_t> g_fresh_counter{0};
}

std::string base_name(const std::string& name) {
    auto pos = name.find('#');
    return pos == std::string::npos ? name : name.substr(0, pos);
}

std::string fresh_name(const std::string& hint) {
    auto n = g_fresh_counter.fetch_add(1) + 1;
    auto base = base_name(hint);
    if (base.empty()) base = "v";
    return base + "#" + std::to_string(n);
}

void reset_fresh_names() { g_fresh_counter.store(0); }

// --- substitution -------------------------------------------------------

namespace {

// Renames free occurrences of `from` to `to`, keeping each occurrence's type.
// `to` must be fresh for t.
Term rename_free(const Term& t, const std::string& from, const std::string& to) {
    if (t.is(TermKind::Var)) return t.name() == from ? Term::var(to, t.type()) : t;
    if (is_binder(t) && t.name() == from) return t;
    if (t.arity() == 0) return t;
    Term out = t;
    for (std::size_t i = 0; i < t.arity(); ++i) {
        Term c = rename_free(t.child(i), from, to);
        if (!(c.identity() == t.child(i).identity())) out = out.with_child(i, std::move(c));
    }
    return out;
}

bool mentions_any(const Term& t, const std::map<std::string, Term>& sigma) {
    for (const auto& [k, _] : sigma)
        if (occurs_free(t, k)) return true;
    return false;
}

Term subst_rec(const Term& u, const std::map<std::string, Term>& sigma, const std::set<std::string>& range_fv) {
    if (sigma.empty()) return u;
    if (u.is(TermKind::Var)) {
        auto it = sigma.find(u.name());
        return it == sigma.end() ? u : it->second;
    }
    if (u.arity() == 0) return u;
    if (is_binder(u)) {
        std::map<std::string, Term> inner = sigma;
        inner.erase(u.name());
        if (inner.empty()) return u;
        Term node = u;
        if (range_fv.count(u.name())) {
            bool needed = false;
            for (std::size_t i = 0; i < u.arity() && !needed; ++i) needed = mentions_any(u.child(i), inner);
            if (needed) node = rename_binder(u, {}, fresh_name(u.name()));
        }
        Term out = node;
        for (std::size_t i = 0; i < node.arity(); ++i) out = out.with_child(i, subst_rec(node.child(i), inner, range_fv));
        return out;
    }
    Term out = u;
    for (std::size_t i = 0; i < u.arity(); ++i) out = out.with_child(i, subst_rec(u.child(i), sigma, range_fv));
    return out;
}

}  // namespace

Term subst_many(const Term& u, const std::map<std::string, Term>& sigma) {
    std::set<std::string> range_fv;
    for (const auto& [_, t] : sigma)
        for (const auto& [name, __] : free_vars(t)) range_fv.insert(name);
    return subst_rec(u, sigma, range_fv);
}

Term subst(const Term& u, const Term& t, const std::string& x) { return subst_many(u, {{x, t}}); }

Term rename_binder(const Term& t, const Path& p, const std::string& fresh) {
    const Term& node = subterm_at(t, p);
    if (!is_binder(node)) throw std::invalid_argument("rename_binder: not a binder");
    Term renamed;
    if (node.is(TermKind::Lam)) {
        renamed = Term::lam(fresh, node.type(), rename_free(node.child(0), node.name(), fresh));
    } else {
        renamed = Term::par(fresh, node.type(), node.kind_right(), rename_free(node.child(0), node.name(), fresh),
                            rename_free(node.child(1), node.name(), fresh));
    }
    return replace_at(t, p, renamed);
}

// --- contexts, stacks, tuples ------------------------------------------

namespace {

bool find_hole(const Term& t, Path& path) {
    if (t.is(TermKind::Hole)) return true;
    if (t.hole_count() == 0) return false;
    for (std::size_t i = 0; i < t.arity(); ++i) {
        path.push_back(static_cast<int>(i));
        if (find_hole(t.child(i), path)) return true;
        path.pop_back();
    }
    return false;
}

}  // namespace

Term fill_context(const SimpleContext& c, const Term& u) {
    Path p;
    if (!find_hole(c.body, p)) throw std::invalid_argument("context has no hole");
    return replace_at(c.body, p, u);
}

bool is_simple_context(const SimpleContext& c) { return c.body.hole_count() == 1 && c.body.par_count() == 0; }

Term apply_stack(Term head, const Stack& s) {
    for (const auto& item : s) head = item.is_projection ? Term::proj(head, item.index) : Term::app(head, item.arg);
    return head;
}

Term tuple_of(const std::vector<TypedVar>& vars) {
    if (vars.empty()) return Term::lam("x", Formula::bot(), Term::var("x", Formula::bot()));
    Term acc = Term::var(vars.back().first, vars.back().second);
    for (auto it = vars.rbegin() + 1; it != vars.rend(); ++it) acc = Term::pair(Term::var(it->first, it->second), acc);
    return acc;
}

Term select_component(const Term& v, std::size_t i, std::size_t n) {
    assert(i < n);
    Term acc = v;
    for (std::size_t k = 0; k < i; ++k) acc = Term::proj(acc, 1);
    if (i + 1 < n) acc = Term::proj(acc, 0);
    return acc;
}

Term multi_subst(const Term& u, const Term& v, const std::vector<TypedVar>& ys) {
    std::map<std::string, Term> sigma;
    for (std::size_t i = 0; i < ys.size(); ++i) sigma.emplace(ys[i].first, select_component(v, i, ys.size()));
    return subst_many(u, sigma);
}

// --- equivalence --------------------------------------------------------

namespace {

bool alpha_rec(const Term& a, const Term& b, std::vector<std::pair<std::string, std::string>>& env) {
    if (a.kind() != b.kind() || a.size() != b.size()) return false;
    switch (a.kind()) {
        case TermKind::Var: {
            if (!(a.type() == b.type())) return false;
            for (auto it = env.rbegin(); it != env.rend(); ++it) {
                bool la = it->first == a.name();
                bool lb = it->second == b.name();
                if (la || lb) return la && lb;
            }
            return a.name() == b.name();
        }
        case TermKind::Lam:
        case TermKind::Par: {
            if (!(a.type() == b.type()) || !(a.kind_right() == b.kind_right())) return false;
            env.emplace_back(a.name(), b.name());
            bool ok = true;
            for (std::size_t i = 0; i < a.arity() && ok; ++i) ok = alpha_rec(a.child(i), b.child(i), env);
            env.pop_back();
            return ok;
        }
        default:
            if (a.index() != b.index() || !(a.type() == b.type())) return false;
            if ((a.is(TermKind::NatLit) || a.is(TermKind::StrLit)) && a.name() != b.name()) return false;
            for (std::size_t i = 0; i < a.arity(); ++i)
                if (!alpha_rec(a.child(i), b.child(i), env)) return false;
            return true;
    }
}

}  // namespace

bool alpha_equal(const Term& a, const Term& b) {
    std::vector<std::pair<std::string, std::string>> env;
    return alpha_rec(a, b, env);
}

}  // namespace lambdag
