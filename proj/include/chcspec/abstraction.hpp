#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "chcspec/syntax.hpp"

namespace chcspec {

/// Finite property set Psi: constrained facts in positional form, indexed by
/// predicate.
class PropertySet {
 public:
  PropertySet() = default;
  explicit PropertySet(const std::vector<ConstrainedFact>& facts);

  void add(const ConstrainedFact& fact);
  const std::vector<ConstrainedFact>& facts() const { return facts_; }
  /// Properties of one predicate, over positional variables.
  const std::vector<Constraint>& for_predicate(const PredicateKey& key) const;
  std::size_t size() const { return facts_.size(); }

  /// Properties whose negation cannot be expressed conjunctively (several
  /// conjuncts, an equality, or an opaque atom); rho uses them positively
  /// only.
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  std::vector<ConstrainedFact> facts_;
  std::map<PredicateKey, std::vector<Constraint>> index_;
  std::vector<std::string> warnings_;
};

enum class AbstractionScope { All, RecursiveOnly };

/// Conjunction of the properties phi entails and the negations of the
/// properties phi contradicts, canonicalised. Negations are only taken for
/// single strict or non-strict linear inequalities.
Constraint rho(const Constraint& phi, const std::vector<Constraint>& props);

/// Applies rho to every in-scope fact (props renamed onto the fact's tuple);
/// out-of-scope facts pass through. Merged up to equivalence.
std::vector<ConstrainedFact> alpha(const std::vector<ConstrainedFact>& s, const PropertySet& psi,
                                   AbstractionScope scope,
                                   const std::set<PredicateKey>& recursives);

bool in_scope(const PredicateKey& key, AbstractionScope scope,
              const std::set<PredicateKey>& recursives);

/// Every clause constraint projected onto each of its head and body atoms,
/// split into atomic conjuncts, deduplicated per predicate.
PropertySet guard_properties(const Program& p);

/// {C=<j | d >= j >= 0} and {C>=0} on the last argument of every predicate
/// of positive arity.
PropertySet dimension_ladder(const Program& p, std::size_t d);

}  // namespace chcspec
