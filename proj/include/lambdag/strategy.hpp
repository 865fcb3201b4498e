#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lambdag/rewrite.hpp"

namespace lambdag {

// Compared lexicographically in field order.
struct ComplexityTuple {
    std::size_t c = 0;  // largest prime factor of the kind outside the admissible set
    std::size_t d = 0;  // Par nodes inside the two branches
    std::size_t l = 0;  // normalization steps of both branches; 0 unless d == 0
    std::size_t o = 0;  // occurrences of the channel in both branches
    friend auto operator<=>(const ComplexityTuple&, const ComplexityTuple&) = default;
};

using TraceSink = std::function<void(const ReductionStep& step, std::size_t index)>;

struct StrategyConfig {
    std::size_t max_steps = 1'000'000;
    TraceSink trace_sink;  // called once per step, in trace order
    bool parallel_branches = false;
    bool keep_trace = true;
};

struct StepBudgetExceeded : std::runtime_error {
    StepBudgetExceeded(std::size_t limit, std::vector<ReductionStep> partial_trace)
        : std::runtime_error("step budget of " + std::to_string(limit) + " exceeded"), partial(std::move(partial_trace)) {}
    std::vector<ReductionStep> partial;
};

// Raised when the strategy reaches a state its case analysis excludes.
struct StrategyError : std::logic_error {
    using std::logic_error::logic_error;
};

struct NormalizeResult {
    Term term;
    std::vector<ReductionStep> trace;
    std::size_t steps = 0;
};

// Par nodes only on a top spine; everything below the spine is Par-free.
bool is_parallel_form(const Term& t);

// Leftmost-outermost; returns the normal form and the number of contractions.
std::pair<Term, std::size_t> intuitionistic_normalize(const Term& t, const DeltaRules& rules = {});

// Proper subformulas of the type of t plus strong subformulas of the types of
// its free variables.
FormulaSet admissible_set(const Term& t);

// c only; cheaper than the full tuple.
std::size_t a_communication_complexity(const Term& par, const FormulaSet& admissible);
ComplexityTuple a_complexity(const Term& par, const FormulaSet& admissible, const DeltaRules& rules = {});

// Records every contraction against the whole term, so each step is
// replayable with apply_rule at its path.
class Engine {
public:
    Engine(Term root, StrategyConfig cfg = {}, DeltaRules rules = {});

    const Term& root() const { return root_; }
    std::size_t steps() const { return steps_; }
    const std::vector<ReductionStep>& trace() const { return trace_; }
    std::vector<ReductionStep> take_trace() { return std::move(trace_); }

    void step(RuleTag rule, const Path& at);
    // Applies a permutation, renaming the inner channel first when a stated
    // freshness condition blocks it. The renaming is not a trace step.
    void permute(RuleTag rule, const Path& at);

    void parallelize(const Path& at);
    std::size_t normalize_intuitionistic(const Path& at);
    // One side step inside the subterm at `at`, measured against `admissible`.
    // Returns false when no Par node there admits a move.
    bool side_step(const Path& at, const FormulaSet& admissible);
    void normalize(const Path& at);

private:
    void push_down(const Path& at);
    void drop_exhaustively(const Path& at);
    bool root_is_redex(const Term& t) const;
    void normalize_branches(const Path& at);
    void record(RuleTag rule, const Path& at, Term after);

    Term root_;
    StrategyConfig cfg_;
    DeltaRules rules_;
    std::size_t steps_ = 0;
    std::vector<ReductionStep> trace_;
    int depth_ = 0;
};

Term to_parallel_form(const Term& t);
// One side-strategy step at the root's admissible set.
Term side_reduce(const Term& t, const DeltaRules& rules = {});
NormalizeResult normalize_master(const Term& t, const StrategyConfig& cfg = {}, const DeltaRules& rules = {});

}  // namespace lambdag
