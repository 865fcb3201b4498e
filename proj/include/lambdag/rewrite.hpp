#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lambdag/term.hpp"
#include "lambdag/typing.hpp"

namespace lambdag {

enum class RuleTag {
    Beta,
    ProjPair,
    PermAppL,
    PermAppR,
    PermEfq,
    PermProj,
    PermLam,
    PermPairL,
    PermPairR,
    PermParPar_L,
    PermParPar_R,
    CrossDropL,
    CrossDropR,
    CrossFull,
    DeltaIte,
};

std::string_view rule_name(RuleTag tag);
std::optional<RuleTag> rule_from_name(std::string_view name);
bool is_intuitionistic_rule(RuleTag tag);
bool is_permutation_rule(RuleTag tag);

// Program-level contraction `head args... => rhs`. Arguments are literals or
// constants and are matched by exact equality, so rules stay left-linear.
struct DeltaRule {
    std::string head;
    Formula head_type;
    std::vector<Term> args;
    Term rhs;
};
using DeltaRules = std::vector<DeltaRule>;

struct ReductionStep {
    RuleTag rule;
    Path path;
    Term before;  // whole term
    Term after;   // whole term
};

enum class RewriteFailure { PatternMismatch, BlockedByFreshness, BlockedByComplexityZero, NotNormal };

struct RewriteError : std::runtime_error {
    RewriteError(RewriteFailure why, const std::string& what) : std::runtime_error(what), reason(why) {}
    RewriteFailure reason;
};

// Beta, ProjPair, a delta rule, or an if with a literal condition.
Term step_intuitionistic(const Term& t, const Path& at, const DeltaRules& rules = {});
// Stated freshness conditions raise BlockedByFreshness; the channel is not
// renamed implicitly. Captures the rules do not mention are avoided by
// renaming the inner channel inside the step.
Term step_permutation(const Term& t, const Path& at, RuleTag rule);
// Without an explicit direction the left branch is kept when both apply.
Term step_cross_drop(const Term& t, const Path& at, std::optional<RuleTag> direction = std::nullopt);
Term step_cross_full(const Term& t, const Path& at, const DeltaRules& rules = {});

Term apply_rule(const Term& t, const Path& at, RuleTag rule, const DeltaRules& rules = {});

// Which rule contracts the node itself, if any, ignoring freshness blocks.
std::optional<RuleTag> intuitionistic_redex(const Term& node, const DeltaRules& rules = {});
bool is_intuitionistic_normal(const Term& t, const DeltaRules& rules = {});
// Rules whose left side and side conditions hold at this node. A permutation
// blocked only by a name clash is listed: it fires after renaming the channel.
std::vector<RuleTag> local_redexes(const Term& node, const DeltaRules& rules = {});
bool cross_full_applies(const Term& par, const DeltaRules& rules = {});

struct Redex {
    Path path;
    RuleTag rule;
};
std::vector<Redex> find_redexes(const Term& t, const DeltaRules& rules = {});
bool is_normal(const Term& t, const DeltaRules& rules = {});

// Rename the channel of the Par at `at` to a fresh name.
Term rename_channel(const Term& t, const Path& at);

}  // namespace lambdag
