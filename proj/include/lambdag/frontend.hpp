#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lambdag/rewrite.hpp"
#include "lambdag/typing.hpp"

namespace lambdag {

struct ParseError : std::runtime_error {
    ParseError(int line_no, int column, const std::string& msg)
        : std::runtime_error(std::to_string(line_no) + ":" + std::to_string(column) + ": " + msg),
          line(line_no),
          col(column) {}
    int line;
    int col;
};

// Bool, Nat and String are always declared and are not listed in `atoms`.
struct Program {
    std::vector<std::string> atoms;
    std::vector<std::pair<std::string, Formula>> consts;
    DeltaRules rules;
    Term main;

    TypeEnv env() const;
};

// Declarations must precede their use. Delta rules are type-checked here and
// raise TypeError; everything else raises ParseError.
Program parse_program(std::string_view src);
// A term over the declarations of `ctx` (its main term is ignored).
Term parse_term(std::string_view src, const Program& ctx);
// Any identifier is accepted as an atom.
Formula parse_formula(std::string_view src);

std::string pretty(const Term& t);
std::string pretty_formula(const Formula& f);
std::string pretty_program(const Program& p);

// Renames every name containing '#' to base#k, numbering per base in order
// of first appearance. Consistent and injective, so the result is
// alpha-equivalent and independent of how the fresh counter advanced.
Term canonical_fresh_names(const Term& t);

}  // namespace lambdag
