#pragma once

#include <string_view>
#include <vector>

#include "chcspec/syntax.hpp"

namespace chcspec {

/// Parses CHC text. Non-variable and repeated atom arguments are replaced by
/// fresh variables plus equalities, so every atom argument is a distinct
/// variable. Throws ParseError (with line/column) on syntax errors and on a
/// predicate used at two different arities.
Program parse_program(std::string_view text);

/// Parses a single clause (the trailing '.' is optional).
Clause parse_clause(std::string_view text);

/// Parses a list of constrained facts (clauses without body atoms), as used
/// for entry points and property files. Variables that do not occur in the
/// atom are projected away. Each returned fact is in positional form.
std::vector<ConstrainedFact> parse_constrained_facts(std::string_view text);

/// Parses a bare conjunction such as "X>=1, Y<X" using the given variables.
/// Unknown names become fresh variables registered in `scope`.
Constraint parse_constraint(std::string_view text, std::map<std::string, Var>& scope);

}  // namespace chcspec
