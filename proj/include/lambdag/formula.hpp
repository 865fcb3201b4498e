#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace lambdag {

enum class FormulaKind { Atom, Bot, Impl, And };

// Immutable propositional formula. Copies share structure; equality is
// syntactic and ordering is a fixed total order usable as a set key.
class Formula {
public:
    Formula();  // bot

    static Formula atom(std::string name);
    static Formula bot();
    static Formula impl(Formula a, Formula b);
    static Formula conj(Formula a, Formula b);
    static Formula top();            // bot -> bot
    static Formula neg(Formula a);   // a -> bot

    FormulaKind kind() const;
    bool is_atom() const { return kind() == FormulaKind::Atom; }
    bool is_bot() const { return kind() == FormulaKind::Bot; }
    bool is_impl() const { return kind() == FormulaKind::Impl; }
    bool is_and() const { return kind() == FormulaKind::And; }
    bool is_prime() const { return kind() != FormulaKind::And; }

    const std::string& name() const;
    const Formula& lhs() const;
    const Formula& rhs() const;

    std::size_t size() const;
    std::size_t hash() const;

    friend bool operator==(const Formula& a, const Formula& b);
    friend std::strong_ordering operator<=>(const Formula& a, const Formula& b);

private:
    struct Node;
    explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

using FormulaSet = std::set<Formula>;

std::vector<Formula> prime_factors(const Formula& f);
std::size_t formula_size(const Formula& f);

// Right-nested conjunction; the empty conjunction is top.
Formula conjunction_of(const std::vector<Formula>& fs);

FormulaSet subformulas(const Formula& f);
FormulaSet proper_subformulas(const Formula& f);
bool is_subformula(const Formula& b, const Formula& a);
bool is_proper_subformula(const Formula& b, const Formula& a);

// Proper subformulas of the prime proper subformulas of `a`.
FormulaSet strong_subformulas(const Formula& a);
// Same set computed from the shape of `a`: for a conjunction, proper
// subformulas of its prime factors; for C -> D, proper subformulas of the
// prime factors of C and of D. Kept as an independent cross-check.
FormulaSet strong_subformulas_by_shape(const Formula& a);
bool is_strong_subformula(const Formula& b, const Formula& a);

}  // namespace lambdag

template <>
struct std::hash<lambdag::Formula> {
    std::size_t operator()(const lambdag::Formula& f) const noexcept { return f.hash(); }
};
