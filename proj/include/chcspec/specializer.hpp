#pragma once

#include <set>
#include <string>
#include <vector>

#include "chcspec/abstraction.hpp"
#include "chcspec/derivation.hpp"
#include "chcspec/syntax.hpp"

namespace chcspec {

/// Constrained facts in positional form, insertion ordered, with no two facts
/// of a predicate having equivalent constraints. False facts are dropped.
class FactSet {
 public:
  FactSet() = default;
  explicit FactSet(const std::vector<ConstrainedFact>& facts);

  /// Returns false if the fact is unsatisfiable or already present.
  bool add(const ConstrainedFact& fact);
  bool contains(const ConstrainedFact& fact) const;
  /// Some member of the same predicate is entailed by the fact.
  bool covers(const ConstrainedFact& fact) const;
  void erase(std::size_t index);

  const std::vector<ConstrainedFact>& facts() const { return facts_; }
  std::size_t size() const { return facts_.size(); }
  bool empty() const { return facts_.empty(); }

 private:
  std::vector<ConstrainedFact> facts_;
};

struct SpecializeOptions {
  UnfoldingRule rule = UnfoldingRule::branch_or_recursive();
  AbstractionScope scope = AbstractionScope::RecursiveOnly;
  std::size_t max_iterations = 1000;
  std::size_t node_budget = kDefaultNodeBudget;
  /// Partially evaluate only the facts added in the previous iteration.
  bool frontier = false;
  /// Drop clauses that call versions with no finite derivation.
  bool prune_unproductive = true;
};

struct TraceStep {
  std::size_t iteration = 0;
  std::vector<ConstrainedFact> added;
};

struct FixpointResult {
  FactSet facts;
  /// Number of leading entries of `facts` that came from S0.
  std::size_t initial = 0;
  std::vector<TraceStep> trace;
  std::set<PredicateKey> recursive;
};

/// S <- S u alpha(collect(pe(S))) until nothing is added. Throws
/// BudgetExceeded after max_iterations.
FixpointResult fixpoint_facts(const Program& p, const std::vector<ConstrainedFact>& s0,
                              const PropertySet& psi, const SpecializeOptions& opts);

/// Every fact of alpha(collect(pe(S))) is already in S (up to equivalence),
/// i.e. S is a fixpoint of the loop body.
bool check_closedness(const FactSet& s, const Program& p, const PropertySet& psi,
                      const SpecializeOptions& opts, const std::set<PredicateKey>& recursive);

/// Every fact of collect(pe(S)) entails some fact of S of the same predicate.
bool covered(const FactSet& s, const Program& p, const SpecializeOptions& opts,
             const std::set<PredicateKey>& recursive);

struct Version {
  std::string name;
  PredicateKey original;
  ConstrainedFact fact;  // positional
  bool from_s0 = false;
};

class VersionTable {
 public:
  void add(Version v) { entries_.push_back(std::move(v)); }
  const std::vector<Version>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  /// Indices of the versions of one original predicate, in table order.
  std::vector<std::size_t> versions_of(const PredicateKey& key) const;

 private:
  std::vector<Version> entries_;
};

/// One version per fact, named <orig>__v<k> with k the 1-based position in
/// S. The first `initial` facts come from S0; an S0 fact keeps the original
/// name when it is the only S0 fact of its predicate.
VersionTable make_definitions(const FactSet& s, std::size_t initial);

/// How an output clause was produced.
struct ClauseOrigin {
  std::size_t version = 0;
  std::vector<std::size_t> path;  // program clause indices
  std::vector<std::size_t> targets;  // version of each body atom
  /// The same clause without the version's own constraint.
  Clause path_only;
};

struct Specialization {
  Program program;
  VersionTable table;
  std::vector<ClauseOrigin> origins;  // parallel to program.clauses()
  FixpointResult fixpoint;
};

/// Unfolds every definition and folds the resulting calls back onto the
/// table. Throws InternalError when a call has no version to fold onto.
Specialization unfoldfold(const VersionTable& table, const Program& p, const PropertySet& psi,
                          const SpecializeOptions& opts, const std::set<PredicateKey>& recursive);

/// Removes versions that derive nothing (no clause whose calls all reach
/// facts) and every clause calling them.
void prune_unproductive(Specialization& s);

Specialization specialize(const Program& p, const std::vector<ConstrainedFact>& s0,
                          const PropertySet& psi, const SpecializeOptions& opts);

}  // namespace chcspec
