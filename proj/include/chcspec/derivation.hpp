#pragma once

#include <set>
#include <string>
#include <vector>

#include "chcspec/syntax.hpp"

namespace chcspec {

/// When to stop expanding a partial derivation tree. Selection is always the
/// leftmost body atom.
struct UnfoldingRule {
  enum class Kind { OneStep, BranchOrRecursive, Depth };
  Kind kind = Kind::BranchOrRecursive;
  std::size_t depth = 1;

  static UnfoldingRule one_step() { return {Kind::OneStep, 1}; }
  static UnfoldingRule branch_or_recursive() { return {Kind::BranchOrRecursive, 0}; }
  static UnfoldingRule up_to_depth(std::size_t k) { return {Kind::Depth, k}; }
  /// "one-step", "branch-recursive" or "depth:<k>".
  static UnfoldingRule parse(const std::string& text);
  std::string str() const;
};

inline constexpr std::size_t kDefaultNodeBudget = 10000;

/// Program plus the data the unfolding rule consults. Build once per run.
struct DerivationContext {
  DerivationContext(const Program& p, UnfoldingRule r, std::set<PredicateKey> recursive,
                    std::size_t budget = kDefaultNodeBudget)
      : program(p), rule(r), recursive(std::move(recursive)), node_budget(budget) {}

  const Program& program;
  UnfoldingRule rule;
  std::set<PredicateKey> recursive;
  std::size_t node_budget;
};

/// Targets of back edges in a depth-first walk of the predicate dependency
/// graph, starting at the entry predicates (then at any unvisited predicate,
/// in program order). Clause order and body order drive the walk.
std::set<PredicateKey> recursive_predicates(const Program& p,
                                            const std::vector<PredicateKey>& entries);

/// Resolves body atom i of c1 with c2. c2 is renamed apart first and its
/// (distinct) head variables are replaced by the arguments of the atom.
/// Returns head :- false when the combined constraint is unsatisfiable.
Clause unfold_step(const Clause& c1, const Clause& c2, std::size_t i);

enum class NodeStatus { Internal, Complete, Failed, Incomplete };

struct TreeNode {
  Clause clause;
  NodeStatus status = NodeStatus::Incomplete;
  std::size_t depth = 0;
  std::vector<std::size_t> children;
  /// Indices (into the program) of the clauses resolved on the way here.
  std::vector<std::size_t> path;
  /// Conjunction of the resolved clauses' constraints, without the root's.
  Constraint path_constraint;
};

struct PartialTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  /// Complete and incomplete leaves, left to right.
  std::vector<std::size_t> frontier() const;
  /// Indented text, one node per line.
  std::string dump() const;
};

/// Tree rooted at p(x) :- phi, p(x). Throws BudgetExceeded past the node budget.
PartialTree build_partial_tree(const ConstrainedFact& a, const DerivationContext& ctx);

/// A frontier clause with the provenance the specializer keeps for output.
struct Resultant {
  Clause clause;
  std::vector<std::size_t> path;
  Constraint path_constraint;
};

std::vector<Resultant> partial_eval_resultants(const ConstrainedFact& a,
                                               const DerivationContext& ctx);
std::vector<Clause> partial_eval(const ConstrainedFact& a, const DerivationContext& ctx);

/// Body atoms of the clauses as positional facts p(x) :- project(phi, x), in
/// order of first appearance, merged up to equivalence.
std::vector<ConstrainedFact> collect(const std::vector<Clause>& clauses);

}  // namespace chcspec
