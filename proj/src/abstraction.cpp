#include "chcspec/abstraction.hpp"

#include "chcspec/constraints.hpp"
#include "chcspec/printer.hpp"

namespace chcspec {

namespace {

bool negatable(const Constraint& c) {
  return !c.is_false() && c.conjuncts().size() == 1 && negate(c.conjuncts().front()).has_value();
}

void add_unique(std::vector<ConstrainedFact>& out, ConstrainedFact f) {
  for (const auto& o : out)
    if (o.key() == f.key() && equivalent(o.constraint, f.constraint)) return;
  out.push_back(std::move(f));
}

}  // namespace

PropertySet::PropertySet(const std::vector<ConstrainedFact>& facts) {
  for (const auto& f : facts) add(f);
}

void PropertySet::add(const ConstrainedFact& fact) {
  ConstrainedFact f = fact.positional();
  if (!negatable(f.constraint))
    warnings_.push_back("property " + render_fact(f) +
                        " has no conjunctive negation; only its positive form is used");
  index_[f.key()].push_back(f.constraint);
  facts_.push_back(std::move(f));
}

const std::vector<Constraint>& PropertySet::for_predicate(const PredicateKey& key) const {
  static const std::vector<Constraint> none;
  auto it = index_.find(key);
  return it == index_.end() ? none : it->second;
}

Constraint rho(const Constraint& phi, const std::vector<Constraint>& props) {
  Constraint out;
  for (const auto& psi : props) {
    if (entails(phi, psi)) out.add(psi);
    if (negatable(psi) && entails_negation(phi, psi)) out.add(*negate(psi.conjuncts().front()));
  }
  return canonicalize(out).constraint();
}

bool in_scope(const PredicateKey& key, AbstractionScope scope,
              const std::set<PredicateKey>& recursives) {
  return scope == AbstractionScope::All || recursives.count(key) != 0;
}

std::vector<ConstrainedFact> alpha(const std::vector<ConstrainedFact>& s, const PropertySet& psi,
                                   AbstractionScope scope,
                                   const std::set<PredicateKey>& recursives) {
  std::vector<ConstrainedFact> out;
  for (const auto& fact : s) {
    if (!in_scope(fact.key(), scope, recursives)) {
      add_unique(out, fact);
      continue;
    }
    ConstrainedFact p = fact.positional();
    p.constraint = rho(p.constraint, psi.for_predicate(p.key()));
    add_unique(out, p.onto(fact.atom.args));
  }
  return out;
}

PropertySet guard_properties(const Program& p) {
  std::map<PredicateKey, std::vector<ConstrainedFact>> found;
  std::vector<PredicateKey> order;
  for (const auto& c : p.clauses()) {
    std::vector<const Atom*> atoms{&c.head};
    for (const auto& b : c.body) atoms.push_back(&b);
    for (const Atom* a : atoms) {
      VarSet keep(a->args.begin(), a->args.end());
      ConstrainedFact f = ConstrainedFact{*a, project(c.constraint, keep)}.positional();
      Constraint canon = canonicalize(f.constraint).constraint();
      if (canon.is_false()) continue;
      for (const auto& conj : canon.conjuncts()) {
        if (!conj.is_linear()) continue;
        ConstrainedFact single{f.atom, Constraint({conj})};
        if (!found.count(a->key())) order.push_back(a->key());
        add_unique(found[a->key()], std::move(single));
      }
    }
  }
  PropertySet out;
  for (const auto& k : order)
    for (const auto& f : found[k]) out.add(f);
  return out;
}

PropertySet dimension_ladder(const Program& p, std::size_t d) {
  PropertySet out;
  for (const auto& k : p.predicates()) {
    if (k.arity == 0) continue;
    Atom atom{k.name, positional_vars(k.arity)};
    const Var& c = atom.args.back();
    for (std::size_t j = d + 1; j-- > 0;) {
      LinearExpr e = LinearExpr::variable(c);
      e.add_constant(-Rational(static_cast<long>(j)));
      out.add({atom, Constraint({AtomicConstraint::linear(e, Rel::Le)})});
    }
    out.add({atom, Constraint({AtomicConstraint::linear(-LinearExpr::variable(c), Rel::Le)})});
  }
  return out;
}

}  // namespace chcspec
