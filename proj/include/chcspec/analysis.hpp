#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "chcspec/abstraction.hpp"
#include "chcspec/specializer.hpp"
#include "chcspec/syntax.hpp"

namespace chcspec {

struct PredDepGraph {
  std::set<std::string> nodes;
  /// One entry per (clause, body atom) pair, in program order.
  std::vector<std::pair<std::string, std::string>> edges;
  std::set<std::string> entries;
};

PredDepGraph pred_dep_graph(const Program& p, const std::set<std::string>& entries = {});

/// Deterministic DOT text: sorted nodes, then edges sorted (with repeats).
std::string emit_dot(const PredDepGraph& g);

/// Merges versions that cannot be told apart: same original predicate, and
/// clauses built from the same original clause paths calling the same blocks.
/// Constraints are ignored by the signature. A merged block keeps the
/// clauses of a member whose version constraint is entailed by every other
/// member's (the weakest); without one it uses the clauses' path-only
/// constraints. Returns the rewritten program and the block of each version.
struct Minimized {
  Program program;
  std::vector<std::size_t> block_of;  // per version
  std::size_t blocks = 0;
};
Minimized minimize_versions(const Specialization& s);

/// Adds a trailing dimension argument to every predicate; multi-atom bodies
/// are split into one copy per way of reaching the head's dimension.
Program dimension_instrument(const Program& p);

enum class DimensionMode { Exact, AtMost, Above };
DimensionMode parse_dimension_mode(const std::string& text);

struct DimensionSetup {
  std::vector<ConstrainedFact> entry;
  PropertySet properties;
};

/// Entry fact K=d / K=<d / K>=d+1 on the dimension argument of `entry`, and
/// the dimension ladder up to d for every predicate of the program.
DimensionSetup dimension_bound_setup(const Program& instrumented, const PredicateKey& entry,
                                     DimensionMode mode, std::size_t d);

}  // namespace chcspec
