#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lambdag/formula.hpp"

namespace lambdag {

enum class TermKind { Var, Lam, App, Pair, Proj, Efq, Par, BoolLit, NatLit, StrLit, Ite, Hole };

// Child indices: Lam body 0; App fn 0, arg 1; Pair 0, 1; Proj target 0;
// Efq target 0; Par left 0, right 1; Ite cond 0, then 1, else 2.
using Path = std::vector<int>;

// Immutable proof term. Variables carry their type, as in a^{A->B}, so the
// type of any subterm is computable without an environment. A channel
// occurrence is an ordinary Var whose type is the side-specific implication.
class Term {
public:
    Term();  // hole at bot; only meaningful as a placeholder

    static Term var(std::string name, Formula type);
    static Term lam(std::string binder, Formula binder_type, Term body);
    static Term app(Term fn, Term arg);
    static Term pair(Term fst, Term snd);
    static Term proj(Term target, int index);
    static Term efq(Formula atom, Term target);
    static Term par(std::string channel, Formula kind_left, Formula kind_right, Term left, Term right);
    static Term boolean(bool value);
    static Term nat(std::uint64_t value);
    static Term nat_text(std::string digits);
    static Term str(std::string value);
    static Term ite(Term cond, Term then_branch, Term else_branch);
    static Term hole(Formula type);

    TermKind kind() const;
    bool is(TermKind k) const { return kind() == k; }

    // Var/Lam/Par: the (binder) name. NatLit: decimal digits. StrLit: raw text.
    const std::string& name() const;
    // Var: its type. Lam: binder type. Efq: target atom. Hole: hole type.
    // Par: left kind.
    const Formula& type() const;
    const Formula& kind_right() const;  // Par only
    int index() const;                  // Proj index, BoolLit value

    std::size_t arity() const;
    const Term& child(std::size_t i) const;
    Term with_child(std::size_t i, Term c) const;

    std::size_t size() const;       // node count
    std::size_t par_count() const;  // number of Par nodes
    std::size_t hole_count() const;

    // Exact structural identity (names included).
    friend bool operator==(const Term& a, const Term& b);

    const void* identity() const { return node_.get(); }

private:
    struct Node;
    explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static Term make(TermKind k, std::string name, Formula f1, Formula f2, int idx, std::vector<Term> kids);
    std::shared_ptr<const Node> node_;
};

struct ScopeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Occurrence {
    Path path;
    std::size_t rank = 0;  // pre-order position; leaf order equals textual order
};

struct StackItem {
    bool is_projection = false;
    int index = 0;  // projection index
    Term arg;       // argument when not a projection
};
using Stack = std::vector<StackItem>;

struct SimpleContext {
    Term body;
    Formula hole_type;
};

using TypedVar = std::pair<std::string, Formula>;

// --- paths --------------------------------------------------------------

const Term& subterm_at(const Term& t, const Path& p);
Term replace_at(const Term& t, const Path& p, const Term& replacement);
Path extend(Path p, int child);
bool is_prefix(const Path& prefix, const Path& p);

// --- variables ----------------------------------------------------------

// Free variables with their annotated types. Throws ScopeError when one
// free name is used at two different types.
std::map<std::string, Formula> free_vars(const Term& t);
bool occurs_free(const Term& t, const std::string& x);
std::size_t count_free(const Term& t, const std::string& x);
std::vector<Occurrence> occurrences_of(const Term& t, const std::string& x);
std::vector<std::string> binder_names(const Term& t);

// --- names --------------------------------------------------------------

// Issues "<base>#<n>" from a process-wide monotone counter.
std::string fresh_name(const std::string& hint);
void reset_fresh_names();
std::string base_name(const std::string& name);

// --- substitution -------------------------------------------------------

Term subst(const Term& u, const Term& t, const std::string& x);
Term subst_many(const Term& u, const std::map<std::string, Term>& sigma);
// Rename the binder of the Lam or Par node at `p`.
Term rename_binder(const Term& t, const Path& p, const std::string& fresh);

// --- contexts, stacks, tuples ------------------------------------------

Term fill_context(const SimpleContext& c, const Term& u);
bool is_simple_context(const SimpleContext& c);
Term apply_stack(Term head, const Stack& s);

Term tuple_of(const std::vector<TypedVar>& vars);
// Selector for component i of an n-tuple: pi_1^i pi_0 for i < n-1,
// pi_1^(n-1) for the last component.
Term select_component(const Term& v, std::size_t i, std::size_t n);
Term multi_subst(const Term& u, const Term& v, const std::vector<TypedVar>& ys);

// --- equivalence --------------------------------------------------------

bool alpha_equal(const Term& a, const Term& b);

}  // namespace lambdag
