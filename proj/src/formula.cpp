#include "lambdag/formula.hpp"

#include <cassert>
#include <functional>

namespace lambdag {

struct Formula::Node {
    FormulaKind kind;
    std::string name;
    Formula lhs;
    Formula rhs;
    std::size_t size = 1;
    std::size_t hash = 0;

    Node(FormulaKind k, std::string n, Formula l, Formula r)
        : kind(k), name(std::move(n)), lhs(std::move(l)), rhs(std::move(r)) {}
};

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

// The null handle stands for bot so that default construction is cheap and
// never dangles.
Formula::Formula() = default;

Formula Formula::atom(std::string name) {
    assert(!name.empty());
    auto h = mix(1, std::hash<std::string>{}(name));
    auto n = std::make_shared<Node>(FormulaKind::Atom, std::move(name), Formula{}, Formula{});
    n->hash = h;
    return Formula(std::move(n));
}

Formula Formula::bot() { return Formula{}; }

Formula Formula::impl(Formula a, Formula b) {
    auto s = 1 + a.size() + b.size();
    auto h = mix(mix(3, a.hash()), b.hash());
    auto n = std::make_shared<Node>(FormulaKind::Impl, std::string{}, std::move(a), std::move(b));
    n->size = s;
    n->hash = h;
    return Formula(std::move(n));
}

Formula Formula::conj(Formula a, Formula b) {
    auto s = 1 + a.size() + b.size();
    auto h = mix(mix(4, a.hash()), b.hash());
    auto n = std::make_shared<Node>(FormulaKind::And, std::string{}, std::move(a), std::move(b));
    n->size = s;
    n->hash = h;
    return Formula(std::move(n));
}

Formula Formula::top() { return impl(bot(), bot()); }
Formula Formula::neg(Formula a) { return impl(std::move(a), bot()); }

FormulaKind Formula::kind() const { return node_ ? node_->kind : FormulaKind::Bot; }

const std::string& Formula::name() const {
    static const std::string empty;
    return node_ ? node_->name : empty;
}

const Formula& Formula::lhs() const {
    assert(node_ && (node_->kind == FormulaKind::Impl || node_->kind == FormulaKind::And));
    return node_->lhs;
}

const Formula& Formula::rhs() const {
    assert(node_ && (node_->kind == FormulaKind::Impl || node_->kind == FormulaKind::And));
    return node_->rhs;
}

std::size_t Formula::size() const { return node_ ? node_->size : 1; }
std::size_t Formula::hash() const { return node_ ? node_->hash : 2; }

bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (a.hash() != b.hash() || a.size() != b.size() || a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case FormulaKind::Bot: return true;
        case FormulaKind::Atom: return a.name() == b.name();
        default: return a.lhs() == b.lhs() && a.rhs() == b.rhs();
    }
}

std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return std::strong_ordering::equal;
    if (auto c = a.size() <=> b.size(); c != 0) return c;
    if (auto c = static_cast<int>(a.kind()) <=> static_cast<int>(b.kind()); c != 0) return c;
    switch (a.kind()) {
        case FormulaKind::Bot: return std::strong_ordering::equal;
        case FormulaKind::Atom: return a.name() <=> b.name();
        default:
            if (auto c = a.lhs() <=> b.lhs(); c != 0) return c;
            return a.rhs() <=> b.rhs();
    }
}

namespace {

void flatten(const Formula& f, std::vector<Formula>& out) {
    if (f.is_and()) {
        flatten(f.lhs(), out);
        flatten(f.rhs(), out);
    } else {
        out.push_back(f);
    }
}

void collect(const Formula& f, FormulaSet& out) {
    if (!out.insert(f).second) return;
    if (f.is_impl() || f.is_and()) {
        collect(f.lhs(), out);
        collect(f.rhs(), out);
    }
}

}  // namespace

std::vector<Formula> prime_factors(const Formula& f) {
    std::vector<Formula> out;
    flatten(f, out);
    return out;
}

std::size_t formula_size(const Formula& f) { return f.size(); }

Formula conjunction_of(const std::vector<Formula>& fs) {
    if (fs.empty()) return Formula::top();
    Formula acc = fs.back();
    for (auto it = fs.rbegin() + 1; it != fs.rend(); ++it) acc = Formula::conj(*it, acc);
    return acc;
}

FormulaSet subformulas(const Formula& f) {
    FormulaSet out;
    collect(f, out);
    return out;
}

FormulaSet proper_subformulas(const Formula& f) {
    FormulaSet out;
    if (f.is_impl() || f.is_and()) {
        collect(f.lhs(), out);
        collect(f.rhs(), out);
    }
    return out;
}

bool is_subformula(const Formula& b, const Formula& a) {
    if (b.size() > a.size()) return false;
    if (b == a) return true;
    if (a.is_impl() || a.is_and()) return is_subformula(b, a.lhs()) || is_subformula(b, a.rhs());
    return false;
}

bool is_proper_subformula(const Formula& b, const Formula& a) {
    if (!(a.is_impl() || a.is_and())) return false;
    return is_subformula(b, a.lhs()) || is_subformula(b, a.rhs());
}

FormulaSet strong_subformulas(const Formula& a) {
    FormulaSet out;
    for (const auto& p : proper_subformulas(a)) {
        if (!p.is_prime()) continue;
        auto below = proper_subformulas(p);
        out.insert(below.begin(), below.end());
    }
    return out;
}

FormulaSet strong_subformulas_by_shape(const Formula& a) {
    FormulaSet out;
    auto add_below_factors = [&out](const Formula& f) {
        for (const auto& p : prime_factors(f)) {
            auto below = proper_subformulas(p);
            out.insert(below.begin(), below.end());
        }
    };
    if (a.is_and()) {
        add_below_factors(a);
    } else if (a.is_impl()) {
        add_below_factors(a.lhs());
        add_below_factors(a.rhs());
    }
    return out;
}

bool is_strong_subformula(const Formula& b, const Formula& a) {
    return strong_subformulas(a).count(b) > 0;
}

}  // namespace lambdag
