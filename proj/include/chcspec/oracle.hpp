#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "chcspec/syntax.hpp"

namespace chcspec {

struct GridSpec {
  long lo = -5;
  long hi = 5;
  std::size_t max_iterations = 12;
};

/// "lo..hi"
GridSpec parse_grid(const std::string& text, std::size_t iterations);

using GroundTuple = std::vector<long>;

/// Dimension sets keep this many smallest values.
inline constexpr std::size_t kDimensionCap = 4;

struct GroundModel {
  /// Derived atoms with the dimensions of the proofs found for them.
  std::map<PredicateKey, std::map<GroundTuple, std::set<long>>> atoms;
  /// False when the last iteration still derived something new.
  bool converged = false;
  std::size_t iterations = 0;

  bool holds(const PredicateKey& key, const GroundTuple& t) const;
  std::set<GroundTuple> tuples(const PredicateKey& key) const;
  std::size_t size() const;
};

/// Bottom-up evaluation with every variable ranging over [lo, hi]. Each
/// iteration applies all clauses to the atoms of the previous one.
GroundModel ground_eval(const Program& p, const GridSpec& g);

struct GridComparison {
  bool equivalent = true;
  std::string witness;  // a ground atom derivable on one side only
  bool converged = true;
};

/// Compares the entry predicates of p1 with their images in p2 (same
/// arity, renamed as given).
GridComparison equivalent_on_grid(const Program& p1, const Program& p2,
                                  const std::map<PredicateKey, std::string>& entries,
                                  const GridSpec& g);

}  // namespace chcspec
