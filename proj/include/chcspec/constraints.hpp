#pragma once

#include <optional>

#include "chcspec/syntax.hpp"

namespace chcspec {

enum class SatResult { Sat, Unsat };

/// Rational satisfiability of the linear part. Opaque conjuncts are ignored,
/// so they never make a constraint unsatisfiable.
SatResult is_sat(const Constraint& phi);
inline bool satisfiable(const Constraint& phi) { return is_sat(phi) == SatResult::Sat; }

struct Entailment {
  bool holds = false;
  /// Set when an opaque conjunct of the right-hand side was discharged by a
  /// syntactically identical conjunct on the left.
  bool opaque_matched_syntactically = false;
};

/// Every rational solution of phi satisfies psi. Checked conjunct-wise via
/// unsatisfiability of phi with the negated conjunct.
Entailment entails_detailed(const Constraint& phi, const Constraint& psi);
inline bool entails(const Constraint& phi, const Constraint& psi) {
  return entails_detailed(phi, psi).holds;
}

/// phi entails not(psi), i.e. phi and psi have no common solution.
bool entails_negation(const Constraint& phi, const Constraint& psi);

/// Existentially eliminates every variable outside `keep` from the linear
/// part; opaque conjuncts touching eliminated variables are dropped.
Constraint project(const Constraint& phi, const VarSet& keep);

bool equivalent(const Constraint& phi, const Constraint& psi);

/// Negation of a single linear inequality. Equalities and opaque atoms have
/// no conjunctive negation and yield nullopt.
std::optional<AtomicConstraint> negate(const AtomicConstraint& c);

/// Normal form of a constraint: implicit equalities made explicit, equalities
/// in reduced echelon form, inequalities reduced modulo the equalities with
/// coprime integer coefficients, redundant conjuncts removed, deterministic
/// order. Unsatisfiable constraints map to false.
class CanonicalConstraint {
 public:
  const Constraint& constraint() const { return value_; }
  friend bool operator==(const CanonicalConstraint&, const CanonicalConstraint&) = default;

 private:
  friend CanonicalConstraint canonicalize(const Constraint& phi);
  Constraint value_;
};

CanonicalConstraint canonicalize(const Constraint& phi);

/// Light clean-up for printed clauses: drops duplicate and redundant
/// conjuncts but keeps the remaining ones as written.
Constraint simplify(const Constraint& phi);

}  // namespace chcspec
