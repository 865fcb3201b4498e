#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lambdag/rewrite.hpp"
#include "lambdag/typing.hpp"

namespace lambdag {

struct CheckResult {
    std::string name;
    bool pass = true;
    std::optional<Path> witness;  // always set when pass is false
    std::string detail;
};

struct AnalysisReport {
    Term subject;
    std::vector<CheckResult> checks;

    bool ok() const;
    void add(CheckResult r);
};

struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Channel kinds: every prime factor is a proper subformula of a hypothesis or
// of the type. Other subterms: type is a subformula, or a conjunction whose
// prime factors all are.
AnalysisReport check_subformula_property(const Term& t, const TypeEnv& env);
bool check_parallel_form(const Term& t);
// Every bound variable's type is a proper subformula of a prime factor of the
// type, or a strong subformula of a hypothesis. Needs a Par-free normal term.
AnalysisReport check_bound_hypothesis(const Term& t, const TypeEnv& env, const DeltaRules& rules = {});
// Every occurrence of z is applied, unless its type is bot, a subformula of
// the term's type, or a proper subformula of another hypothesis.
AnalysisReport check_applied_occurrences(const Term& t, const std::string& z, const TypeEnv& env,
                                         const DeltaRules& rules = {});
// Replays each step and checks that the type is kept and free variables do
// not grow. Witness paths of failures are the step's path; the detail names
// the step index.
AnalysisReport check_subject_reduction(const std::vector<ReductionStep>& trace, const TypeEnv& env,
                                       const DeltaRules& rules = {});

}  // namespace lambdag
