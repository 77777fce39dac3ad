#include "chcspec/syntax.hpp"

#include <atomic>
#include <functional>
#include <optional>

namespace chcspec {

namespace {

constexpr std::uint64_t kFreshBase = std::uint64_t{1} << 20;
std::atomic<std::uint64_t> g_next_id{kFreshBase};

std::string positional_name(std::size_t index) {
  std::string name(1, static_cast<char>('A' + index % 26));
  if (index >= 26) name += std::to_string(index / 26);
  return name;
}

}  // namespace

Var fresh_var(std::string name) {
  return Var{g_next_id.fetch_add(1, std::memory_order_relaxed), std::move(name)};
}

Var positional_var(std::size_t index) {
  if (index + 1 >= kFreshBase) throw InputError("arity too large");
  return Var{index + 1, positional_name(index)};
}

std::vector<Var> positional_vars(std::size_t arity) {
  std::vector<Var> out;
  out.reserve(arity);
  for (std::size_t i = 0; i < arity; ++i) out.push_back(positional_var(i));
  return out;
}

// --- LinearExpr -------------------------------------------------------------

LinearExpr LinearExpr::variable(const Var& v, const Rational& coef) {
  LinearExpr e;
  e.add_term(v, coef);
  return e;
}

Rational LinearExpr::coefficient(const Var& v) const {
  auto it = terms_.find(v);
  return it == terms_.end() ? Rational(0) : it->second;
}

void LinearExpr::add_term(const Var& v, const Rational& coef) {
  if (coef == 0) return;
  auto [it, inserted] = terms_.emplace(v, coef);
  if (!inserted) {
    it->second += coef;
    if (it->second == 0) terms_.erase(it);
  }
}

LinearExpr& LinearExpr::operator+=(const LinearExpr& other) {
  for (const auto& [v, c] : other.terms_) add_term(v, c);
  constant_ += other.constant_;
  return *this;
}

LinearExpr& LinearExpr::operator-=(const LinearExpr& other) {
  for (const auto& [v, c] : other.terms_) add_term(v, -c);
  constant_ -= other.constant_;
  return *this;
}

LinearExpr& LinearExpr::operator*=(const Rational& factor) {
  if (factor == 0) {
    terms_.clear();
    constant_ = 0;
    return *this;
  }
  for (auto& [v, c] : terms_) c *= factor;
  constant_ *= factor;
  return *this;
}

LinearExpr LinearExpr::substitute(const Var& v, const LinearExpr& e) const {
  auto it = terms_.find(v);
  if (it == terms_.end()) return *this;
  LinearExpr out = *this;
  Rational coef = it->second;
  out.terms_.erase(v);
  out += e * coef;
  return out;
}

LinearExpr LinearExpr::rename(const VarMap& m) const {
  LinearExpr out(constant_);
  for (const auto& [v, c] : terms_) {
    auto it = m.find(v);
    out.add_term(it == m.end() ? v : it->second, c);
  }
  return out;
}

// --- Term -------------------------------------------------------------------

Term Term::variable(const Var& v) {
  Term t;
  t.kind = Kind::Variable;
  t.var = v;
  return t;
}

Term Term::num(const Rational& q) {
  Term t;
  t.kind = Kind::Number;
  t.number = q;
  return t;
}

Term Term::binary(Kind k, Term lhs, Term rhs) {
  Term t;
  t.kind = k;
  t.args.push_back(std::move(lhs));
  t.args.push_back(std::move(rhs));
  return t;
}

Term Term::negate(Term inner) {
  Term t;
  t.kind = Kind::Neg;
  t.args.push_back(std::move(inner));
  return t;
}

void Term::collect_vars(VarSet& out) const {
  if (kind == Kind::Variable) out.insert(var);
  for (const auto& a : args) a.collect_vars(out);
}

Term Term::rename(const VarMap& m) const {
  Term t = *this;
  if (kind == Kind::Variable) {
    auto it = m.find(var);
    if (it != m.end()) t.var = it->second;
  }
  for (auto& a : t.args) a = a.rename(m);
  return t;
}

bool operator==(const Term& a, const Term& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Term::Kind::Variable:
      return a.var == b.var;
    case Term::Kind::Number:
      return a.number == b.number;
    default:
      return a.args == b.args;
  }
}

// --- AtomicConstraint / Constraint ------------------------------------------

void AtomicConstraint::collect_vars(VarSet& out) const {
  if (is_linear()) {
    for (const auto& [v, c] : as_linear().expr.terms()) out.insert(v);
  } else {
    as_opaque().lhs.collect_vars(out);
    as_opaque().rhs.collect_vars(out);
  }
}

VarSet AtomicConstraint::vars() const {
  VarSet out;
  collect_vars(out);
  return out;
}

AtomicConstraint AtomicConstraint::rename(const VarMap& m) const {
  if (is_linear()) return LinearAtom{as_linear().expr.rename(m), as_linear().rel};
  const auto& o = as_opaque();
  return OpaqueAtom{o.lhs.rename(m), o.rel, o.rhs.rename(m)};
}

Constraint Constraint::bottom() {
  Constraint c;
  c.false_ = true;
  return c;
}

void Constraint::add(AtomicConstraint c) {
  if (false_) return;
  conjuncts_.push_back(std::move(c));
}

void Constraint::add(const Constraint& other) {
  if (false_) return;
  if (other.false_) {
    *this = bottom();
    return;
  }
  conjuncts_.insert(conjuncts_.end(), other.conjuncts_.begin(), other.conjuncts_.end());
}

void Constraint::collect_vars(VarSet& out) const {
  for (const auto& c : conjuncts_) c.collect_vars(out);
}

VarSet Constraint::vars() const {
  VarSet out;
  collect_vars(out);
  return out;
}

Constraint Constraint::rename(const VarMap& m) const {
  if (false_) return bottom();
  Constraint out;
  for (const auto& c : conjuncts_) out.conjuncts_.push_back(c.rename(m));
  return out;
}

// --- Atoms, clauses, facts --------------------------------------------------

Atom Atom::rename(const VarMap& m) const {
  Atom out{predicate, {}};
  out.args.reserve(args.size());
  for (const auto& v : args) {
    auto it = m.find(v);
    out.args.push_back(it == m.end() ? v : it->second);
  }
  return out;
}

VarSet Clause::vars() const {
  VarSet out(head.args.begin(), head.args.end());
  for (const auto& a : body) out.insert(a.args.begin(), a.args.end());
  constraint.collect_vars(out);
  return out;
}

Clause Clause::rename(const VarMap& m) const {
  Clause out{head.rename(m), constraint.rename(m), {}};
  out.body.reserve(body.size());
  for (const auto& a : body) out.body.push_back(a.rename(m));
  return out;
}

ConstrainedFact ConstrainedFact::onto(const std::vector<Var>& args) const {
  if (args.size() != atom.args.size()) throw InternalError("fact arity mismatch");
  VarMap m;
  for (std::size_t i = 0; i < args.size(); ++i) m.emplace(atom.args[i], args[i]);
  return {Atom{atom.predicate, args}, constraint.rename(m)};
}

ConstrainedFact ConstrainedFact::positional() const {
  return onto(positional_vars(atom.args.size()));
}

// --- Program ----------------------------------------------------------------

Program::Program(std::vector<Clause> clauses) {
  for (auto& c : clauses) add(std::move(c));
}

void Program::add(Clause c) {
  index_[c.head.key()].push_back(clauses_.size());
  clauses_.push_back(std::move(c));
}

const std::vector<std::size_t>& Program::clauses_for(const PredicateKey& key) const {
  static const std::vector<std::size_t> kNone;
  auto it = index_.find(key);
  return it == index_.end() ? kNone : it->second;
}

std::vector<PredicateKey> Program::predicates() const {
  std::vector<PredicateKey> out;
  std::set<PredicateKey> seen;
  auto note = [&](const Atom& a) {
    if (seen.insert(a.key()).second) out.push_back(a.key());
  };
  for (const auto& c : clauses_) {
    note(c.head);
    for (const auto& b : c.body) note(b);
  }
  return out;
}

// --- Errors -----------------------------------------------------------------

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : InputError(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

// --- Renaming ---------------------------------------------------------------

Clause rename_apart(const Clause& c) {
  VarMap m;
  for (const auto& v : c.vars()) m.emplace(v, fresh_var(v.name));
  return c.rename(m);
}

namespace {

void first_occurrence_order(const Clause& c, std::vector<Var>& order) {
  VarSet seen;
  auto note = [&](const Var& v) {
    if (seen.insert(v).second) order.push_back(v);
  };
  for (const auto& v : c.head.args) note(v);
  for (const auto& a : c.body)
    for (const auto& v : a.args) note(v);
  for (const auto& conj : c.constraint.conjuncts()) {
    VarSet vs;
    conj.collect_vars(vs);
    for (const auto& v : vs) note(v);
  }
}

}  // namespace

Clause standardize_names(const Clause& c) {
  std::vector<Var> order;
  first_occurrence_order(c, order);
  VarMap m;
  for (std::size_t i = 0; i < order.size(); ++i) {
    Var v = fresh_var("");
    v.name = positional_var(i).name;
    m.emplace(order[i], v);
  }
  return c.rename(m);
}

// --- Isomorphism ------------------------------------------------------------

namespace {

struct Bijection {
  std::map<Var, Var> fwd;
  std::map<Var, Var> bwd;

  bool bind(const Var& a, const Var& b) {
    auto f = fwd.find(a);
    auto g = bwd.find(b);
    if (f != fwd.end() || g != bwd.end())
      return f != fwd.end() && g != bwd.end() && f->second == b && g->second == a;
    fwd.emplace(a, b);
    bwd.emplace(b, a);
    return true;
  }
};

bool match_terms(const Term& a, const Term& b, Bijection& bij) {
  if (a.kind != b.kind || a.args.size() != b.args.size()) return false;
  if (a.kind == Term::Kind::Variable) return bij.bind(a.var, b.var);
  if (a.kind == Term::Kind::Number) return a.number == b.number;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!match_terms(a.args[i], b.args[i], bij)) return false;
  return true;
}

using Conjuncts = std::vector<AtomicConstraint>;

bool match_from(const Conjuncts& as, const Conjuncts& bs, std::size_t i, Bijection bij);

// Matches the still-unmapped terms of a linear atom, then continues with the
// remaining conjuncts.
bool match_linear_terms(const Conjuncts& as, const Conjuncts& bs, std::size_t i,
                        std::vector<std::pair<Var, Rational>> a_free,
                        std::vector<std::pair<Var, Rational>> b_free, Bijection bij) {
  if (a_free.empty()) return b_free.empty() && match_from(as, bs, i + 1, bij);
  auto [av, ac] = a_free.back();
  a_free.pop_back();
  for (std::size_t k = 0; k < b_free.size(); ++k) {
    if (b_free[k].second != ac) continue;
    Bijection next = bij;
    if (!next.bind(av, b_free[k].first)) continue;
    auto rest = b_free;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(k));
    if (match_linear_terms(as, bs, i, a_free, rest, next)) return true;
  }
  return false;
}

bool match_from(const Conjuncts& as, const Conjuncts& bs, std::size_t i, Bijection bij) {
  if (i == as.size()) return true;
  const auto& a = as[i];
  const auto& b = bs[i];
  if (a.is_linear() != b.is_linear()) return false;
  if (!a.is_linear()) {
    const auto& oa = a.as_opaque();
    const auto& ob = b.as_opaque();
    if (oa.rel != ob.rel) return false;
    if (!match_terms(oa.lhs, ob.lhs, bij) || !match_terms(oa.rhs, ob.rhs, bij)) return false;
    return match_from(as, bs, i + 1, bij);
  }
  const auto& la = a.as_linear();
  const auto& lb = b.as_linear();
  if (la.rel != lb.rel || la.expr.constant() != lb.expr.constant() ||
      la.expr.terms().size() != lb.expr.terms().size())
    return false;
  std::vector<std::pair<Var, Rational>> a_free;
  std::set<Var> b_mapped;
  for (const auto& [v, c] : la.expr.terms()) {
    auto it = bij.fwd.find(v);
    if (it == bij.fwd.end()) {
      a_free.emplace_back(v, c);
      continue;
    }
    if (lb.expr.coefficient(it->second) != c) return false;
    b_mapped.insert(it->second);
  }
  std::vector<std::pair<Var, Rational>> b_free;
  for (const auto& [v, c] : lb.expr.terms())
    if (!b_mapped.count(v)) {
      if (bij.bwd.count(v)) return false;
      b_free.emplace_back(v, c);
    }
  return match_linear_terms(as, bs, i, std::move(a_free), std::move(b_free), std::move(bij));
}

}  // namespace

bool isomorphic(const Clause& a, const Clause& b) {
  if (a.head.key() != b.head.key() || a.body.size() != b.body.size()) return false;
  if (a.constraint.is_false() != b.constraint.is_false()) return false;
  if (a.constraint.conjuncts().size() != b.constraint.conjuncts().size()) return false;
  Bijection bij;
  auto bind_atom = [&](const Atom& x, const Atom& y) {
    if (x.key() != y.key()) return false;
    for (std::size_t i = 0; i < x.args.size(); ++i)
      if (!bij.bind(x.args[i], y.args[i])) return false;
    return true;
  };
  if (!bind_atom(a.head, b.head)) return false;
  for (std::size_t i = 0; i < a.body.size(); ++i)
    if (!bind_atom(a.body[i], b.body[i])) return false;
  return match_from(a.constraint.conjuncts(), b.constraint.conjuncts(), 0, bij);
}

bool isomorphic(const Program& a, const Program& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!isomorphic(a.clauses()[i], b.clauses()[i])) return false;
  return true;
}

}  // namespace chcspec
