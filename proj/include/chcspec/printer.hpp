#pragma once

#include <map>
#include <string>
#include <vector>

#include "chcspec/syntax.hpp"

namespace chcspec {

/// Print names for the variables of one clause. Names are kept when they
/// identify a single variable; clashes get a numeric suffix.
class NameTable {
 public:
  NameTable() = default;
  explicit NameTable(const VarSet& vars);
  const std::string& operator()(const Var& v) const;

 private:
  std::map<Var, std::string> names_;
};

std::string render_term(const Term& t, const NameTable& names);
std::string render_atomic(const AtomicConstraint& c, const NameTable& names);
/// Comma-separated conjunction; "true" for the empty conjunction.
std::string render_constraint(const Constraint& c, const NameTable& names);
std::string render_constraint(const Constraint& c);
std::string render_atom(const Atom& a, const NameTable& names);
std::string render_clause(const Clause& c);
std::string render_fact(const ConstrainedFact& f);
/// One clause per line, in program order. The empty program renders as "".
std::string render_program(const Program& p);

}  // namespace chcspec
