#include "chcspec/specializer.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "chcspec/constraints.hpp"

namespace chcspec {

FactSet::FactSet(const std::vector<ConstrainedFact>& facts) {
  for (const auto& f : facts) add(f);
}

bool FactSet::add(const ConstrainedFact& fact) {
  ConstrainedFact f = fact.positional();
  f.constraint = canonicalize(f.constraint).constraint();
  if (f.constraint.is_false() || contains(f)) return false;
  facts_.push_back(std::move(f));
  return true;
}

bool FactSet::contains(const ConstrainedFact& fact) const {
  ConstrainedFact f = fact.positional();
  for (const auto& o : facts_)
    if (o.key() == f.key() && equivalent(o.constraint, f.constraint)) return true;
  return false;
}

bool FactSet::covers(const ConstrainedFact& fact) const {
  ConstrainedFact f = fact.positional();
  for (const auto& o : facts_)
    if (o.key() == f.key() && entails(f.constraint, o.constraint)) return true;
  return false;
}

void FactSet::erase(std::size_t index) {
  facts_.erase(facts_.begin() + static_cast<std::ptrdiff_t>(index));
}

namespace {

std::vector<PredicateKey> entry_keys(const std::vector<ConstrainedFact>& s0) {
  std::vector<PredicateKey> out;
  for (const auto& f : s0) out.push_back(f.key());
  return out;
}

std::vector<Clause> pe_all(const std::vector<ConstrainedFact>& facts, std::size_t from,
                           const DerivationContext& ctx) {
  std::vector<Clause> out;
  for (std::size_t i = from; i < facts.size(); ++i)
    for (auto& c : partial_eval(facts[i], ctx)) out.push_back(std::move(c));
  return out;
}

void check_range_bound(const FixpointResult& r, const PropertySet& psi) {
  std::map<PredicateKey, std::size_t> count;
  const auto& facts = r.facts.facts();
  for (std::size_t i = r.initial; i < facts.size(); ++i) ++count[facts[i].key()];
  for (const auto& [key, n] : count) {
    double bound = std::pow(3.0, static_cast<double>(psi.for_predicate(key).size()));
    if (static_cast<double>(n) > bound)
      throw InternalError("more versions of " + key.str() + " than the abstraction allows");
  }
}

}  // namespace

FixpointResult fixpoint_facts(const Program& p, const std::vector<ConstrainedFact>& s0,
                              const PropertySet& psi, const SpecializeOptions& opts) {
  FixpointResult r;
  r.facts = FactSet(s0);
  r.initial = r.facts.size();
  r.recursive = recursive_predicates(p, entry_keys(s0));
  DerivationContext ctx(p, opts.rule, r.recursive, opts.node_budget);

  std::size_t from = 0;
  for (std::size_t iter = 1; iter <= opts.max_iterations; ++iter) {
    auto produced = alpha(collect(pe_all(r.facts.facts(), opts.frontier ? from : 0, ctx)), psi,
                          opts.scope, r.recursive);
    TraceStep step{iter, {}};
    from = r.facts.size();
    for (const auto& f : produced)
      if (r.facts.add(f)) step.added.push_back(r.facts.facts().back());
    if (opts.scope == AbstractionScope::All) check_range_bound(r, psi);
    bool done = step.added.empty();
    r.trace.push_back(std::move(step));
    if (done) return r;
  }
  throw BudgetExceeded("no fixpoint after " + std::to_string(opts.max_iterations) +
                       " iterations");
}

bool check_closedness(const FactSet& s, const Program& p, const PropertySet& psi,
                      const SpecializeOptions& opts, const std::set<PredicateKey>& recursive) {
  DerivationContext ctx(p, opts.rule, recursive, opts.node_budget);
  for (const auto& f : alpha(collect(pe_all(s.facts(), 0, ctx)), psi, opts.scope, recursive))
    if (satisfiable(f.constraint) && !s.contains(f)) return false;
  return true;
}

bool covered(const FactSet& s, const Program& p, const SpecializeOptions& opts,
             const std::set<PredicateKey>& recursive) {
  DerivationContext ctx(p, opts.rule, recursive, opts.node_budget);
  for (const auto& f : collect(pe_all(s.facts(), 0, ctx)))
    if (!s.covers(f)) return false;
  return true;
}

std::vector<std::size_t> VersionTable::versions_of(const PredicateKey& key) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < entries_.size(); ++i)
    if (entries_[i].original == key) out.push_back(i);
  return out;
}

VersionTable make_definitions(const FactSet& s, std::size_t initial) {
  std::map<PredicateKey, std::size_t> s0_count;
  for (std::size_t i = 0; i < initial && i < s.size(); ++i) ++s0_count[s.facts()[i].key()];
  VersionTable t;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto& f = s.facts()[i];
    Version v;
    v.original = f.key();
    v.fact = f;
    v.from_s0 = i < initial;
    v.name = v.from_s0 && s0_count[f.key()] == 1 ? f.atom.predicate
                                                  : f.atom.predicate + "__v" + std::to_string(i + 1);
    t.add(std::move(v));
  }
  return t;
}

namespace {

// Version a call folds onto, see unfoldfold.
std::size_t fold_target(const VersionTable& t, const Atom& call, const Constraint& phi,
                        const PropertySet& psi, AbstractionScope scope,
                        const std::set<PredicateKey>& recursive) {
  VarSet keep(call.args.begin(), call.args.end());
  ConstrainedFact f = ConstrainedFact{call, project(phi, keep)}.positional();
  Constraint wanted = in_scope(f.key(), scope, recursive)
                          ? rho(f.constraint, psi.for_predicate(f.key()))
                          : f.constraint;
  auto candidates = t.versions_of(f.key());
  for (auto i : candidates)
    if (equivalent(t.entries()[i].fact.constraint, wanted)) return i;

  std::vector<std::size_t> entailed;
  for (auto i : candidates)
    if (entails(f.constraint, t.entries()[i].fact.constraint)) entailed.push_back(i);
  for (auto i : entailed) {
    bool least = true;
    for (auto j : entailed)
      if (!entails(t.entries()[i].fact.constraint, t.entries()[j].fact.constraint)) {
        least = false;
        break;
      }
    if (least) return i;
  }
  if (!entailed.empty()) return entailed.front();
  throw InternalError("no version of " + f.key().str() + " covers a call; S is not closed");
}

Clause finish(Clause c, const VersionTable& t, std::size_t version,
              const std::vector<std::size_t>& targets) {
  c.head.predicate = t.entries()[version].name;
  for (std::size_t k = 0; k < c.body.size(); ++k) c.body[k].predicate = t.entries()[targets[k]].name;
  c.constraint = simplify(c.constraint);
  if (c.constraint.is_false()) c.body.clear();
  return standardize_names(c);
}

}  // namespace

Specialization unfoldfold(const VersionTable& table, const Program& p, const PropertySet& psi,
                          const SpecializeOptions& opts, const std::set<PredicateKey>& recursive) {
  DerivationContext ctx(p, opts.rule, recursive, opts.node_budget);
  Specialization out;
  out.table = table;
  for (std::size_t v = 0; v < table.size(); ++v) {
    for (auto& r : partial_eval_resultants(table.entries()[v].fact, ctx)) {
      ClauseOrigin o;
      o.version = v;
      o.path = r.path;
      for (const auto& call : r.clause.body)
        o.targets.push_back(fold_target(table, call, r.clause.constraint, psi, opts.scope, recursive));
      Clause path_only = r.clause;
      path_only.constraint = r.path_constraint;
      o.path_only = finish(std::move(path_only), table, v, o.targets);
      out.program.add(finish(std::move(r.clause), table, v, o.targets));
      out.origins.push_back(std::move(o));
    }
  }
  return out;
}

void prune_unproductive(Specialization& s) {
  std::vector<bool> productive(s.table.size(), false);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < s.origins.size(); ++i) {
      const auto& o = s.origins[i];
      if (productive[o.version] || s.program.clauses()[i].constraint.is_false()) continue;
      if (std::all_of(o.targets.begin(), o.targets.end(), [&](std::size_t t) { return productive[t]; })) {
        productive[o.version] = true;
        changed = true;
      }
    }
  }
  Program kept;
  std::vector<ClauseOrigin> origins;
  for (std::size_t i = 0; i < s.origins.size(); ++i) {
    const auto& o = s.origins[i];
    bool live = productive[o.version] &&
                std::all_of(o.targets.begin(), o.targets.end(), [&](std::size_t t) { return productive[t]; });
    if (!live) continue;
    kept.add(s.program.clauses()[i]);
    origins.push_back(o);
  }
  s.program = std::move(kept);
  s.origins = std::move(origins);
}

Specialization specialize(const Program& p, const std::vector<ConstrainedFact>& s0,
                          const PropertySet& psi, const SpecializeOptions& opts) {
  FixpointResult fix = fixpoint_facts(p, s0, psi, opts);
  VersionTable table = make_definitions(fix.facts, fix.initial);
  Specialization out = unfoldfold(table, p, psi, opts, fix.recursive);
  if (opts.prune_unproductive) prune_unproductive(out);
  out.fixpoint = std::move(fix);
  return out;
}

}  // namespace chcspec
