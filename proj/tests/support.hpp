#pragma once

#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "chcspec/abstraction.hpp"
#include "chcspec/syntax.hpp"

namespace testsupport {

std::string read_data(const std::string& name);
chcspec::Program load_program(const std::string& name);
chcspec::PropertySet load_props(const std::string& name);
std::vector<chcspec::ConstrainedFact> facts(const std::string& text);

/// Conjunction over a named scope, e.g. constraint("X>=1, Y<X", scope).
chcspec::Constraint constraint(const std::string& text, std::map<std::string, chcspec::Var>& scope);

/// True iff the programs are the same up to a bijection between predicate
/// names (arity preserved) and, per clause, a renaming of atom arguments with
/// equivalent projected constraints. On failure `why` says what differed.
bool same_up_to_renaming(const chcspec::Program& got, const chcspec::Program& expected,
                         std::string* why = nullptr);

/// Random linear atomic constraint over vars, coefficients in [-k, k].
chcspec::AtomicConstraint random_atomic(std::mt19937& rng, const std::vector<chcspec::Var>& vars,
                                        int k, bool allow_equality = true);
chcspec::Constraint random_constraint(std::mt19937& rng, const std::vector<chcspec::Var>& vars,
                                      int max_conjuncts, int k);

/// Program over p/2, q/2, r/2 with at most one body atom per clause; p is
/// the entry.
chcspec::Program random_program(std::mt19937& rng);

/// Value of a constraint on an integer point (opaque conjuncts evaluated).
bool holds_at(const chcspec::Constraint& c, const std::map<chcspec::Var, long>& point);

/// Every assignment of [lo, hi] to the given variables.
void for_each_point(const std::vector<chcspec::Var>& vars, long lo, long hi,
                    const std::function<void(const std::map<chcspec::Var, long>&)>& f);

}  // namespace testsupport
