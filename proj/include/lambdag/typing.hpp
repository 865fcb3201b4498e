#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "lambdag/formula.hpp"
#include "lambdag/term.hpp"

namespace lambdag {

using TypeEnv = std::map<std::string, Formula>;

struct TypeError : std::runtime_error {
    TypeError(const std::string& what, Path where, std::optional<Formula> expected = {},
              std::optional<Formula> actual = {})
        : std::runtime_error(what), path(std::move(where)), expected(std::move(expected)), actual(std::move(actual)) {}
    Path path;
    std::optional<Formula> expected;
    std::optional<Formula> actual;
};

// Builtin atoms used by literals and conditionals.
Formula bool_type();
Formula nat_type();
Formula string_type();

// Full judgment env |- t : A. Checks every variable annotation against its
// binder or against env, and every Par kind against its channel uses.
Formula infer(const TypeEnv& env, const Term& t);

// Type read off the annotations alone, without consulting an environment.
// Throws TypeError on a malformed application or projection.
Formula type_of(const Term& t);

std::pair<Formula, Formula> communication_kind(const Term& par);

// max(0, size of each prime factor of the kind that is neither a proper
// subformula of `type` nor a strong subformula of any hypothesis).
std::size_t communication_complexity(const Term& par, const Formula& type, const std::vector<Formula>& hypotheses);
// Uses the node's own type and the types of its free variables.
std::size_t communication_complexity(const Term& par);
// Uses the node's type and every binding of env as hypotheses.
std::size_t communication_complexity(const Term& par, const TypeEnv& env);

}  // namespace lambdag
