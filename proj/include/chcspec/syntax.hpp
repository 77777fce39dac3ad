#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "chcspec/rational.hpp"

namespace chcspec {

// Variables

/// A clause variable. Identity is the numeric id; the name is only used for
/// printing.
struct Var {
  std::uint64_t id = 0;
  std::string name;

  friend bool operator==(const Var& a, const Var& b) { return a.id == b.id; }
  friend std::strong_ordering operator<=>(const Var& a, const Var& b) {
    return a.id <=> b.id;
  }
};

using VarSet = std::set<Var>;
using VarMap = std::map<Var, Var>;

/// Returns a variable with a process-wide unique id. Thread safe.
Var fresh_var(std::string name);

/// The i-th positional variable (A, B, C, ...). Positional variables have
/// fixed ids below the fresh range, so two constrained facts over the same
/// predicate share their argument tuple.
Var positional_var(std::size_t index);
std::vector<Var> positional_vars(std::size_t arity);

// Linear expressions

/// sum(coef * var) + constant with exact coefficients; zero coefficients are
/// never stored.
class LinearExpr {
 public:
  LinearExpr() = default;
  explicit LinearExpr(Rational constant) : constant_(std::move(constant)) {}
  static LinearExpr variable(const Var& v, const Rational& coef = 1);

  const std::map<Var, Rational>& terms() const { return terms_; }
  const Rational& constant() const { return constant_; }
  Rational coefficient(const Var& v) const;
  bool is_constant() const { return terms_.empty(); }
  bool mentions(const Var& v) const { return terms_.count(v) != 0; }

  void add_term(const Var& v, const Rational& coef);
  void add_constant(const Rational& c) { constant_ += c; }

  LinearExpr& operator+=(const LinearExpr& other);
  LinearExpr& operator-=(const LinearExpr& other);
  LinearExpr& operator*=(const Rational& factor);
  friend LinearExpr operator+(LinearExpr a, const LinearExpr& b) { return a += b; }
  friend LinearExpr operator-(LinearExpr a, const LinearExpr& b) { return a -= b; }
  friend LinearExpr operator*(LinearExpr a, const Rational& k) { return a *= k; }
  LinearExpr operator-() const { return *this * Rational(-1); }

  /// Replaces v by e.
  LinearExpr substitute(const Var& v, const LinearExpr& e) const;
  LinearExpr rename(const VarMap& m) const;

  friend bool operator==(const LinearExpr& a, const LinearExpr& b) {
    return a.constant_ == b.constant_ && a.terms_ == b.terms_;
  }

 private:
  std::map<Var, Rational> terms_;
  Rational constant_ = 0;
};

// Arithmetic terms (kept verbatim for non-linear constraints)

struct Term {
  enum class Kind { Variable, Number, Add, Sub, Mul, Div, Neg };
  Kind kind = Kind::Number;
  Var var;
  Rational number = 0;
  std::vector<Term> args;

  static Term variable(const Var& v);
  static Term num(const Rational& q);
  static Term binary(Kind k, Term lhs, Term rhs);
  static Term negate(Term t);

  void collect_vars(VarSet& out) const;
  Term rename(const VarMap& m) const;
  friend bool operator==(const Term& a, const Term& b);
};

// Constraints

/// Relation against zero for linear atoms; >= and > are normalised away.
enum class Rel { Le, Lt, Eq };

/// expr rel 0
struct LinearAtom {
  LinearExpr expr;
  Rel rel = Rel::Le;
  friend bool operator==(const LinearAtom&, const LinearAtom&) = default;
};

/// lhs rel rhs for a non-linear relation such as Z1 = X*Z. Carried verbatim.
struct OpaqueAtom {
  Term lhs;
  Rel rel = Rel::Eq;
  Term rhs;
  friend bool operator==(const OpaqueAtom&, const OpaqueAtom&) = default;
};

class AtomicConstraint {
 public:
  AtomicConstraint(LinearAtom a) : value_(std::move(a)) {}
  AtomicConstraint(OpaqueAtom a) : value_(std::move(a)) {}
  static AtomicConstraint linear(LinearExpr e, Rel r) { return LinearAtom{std::move(e), r}; }

  bool is_linear() const { return std::holds_alternative<LinearAtom>(value_); }
  const LinearAtom& as_linear() const { return std::get<LinearAtom>(value_); }
  const OpaqueAtom& as_opaque() const { return std::get<OpaqueAtom>(value_); }

  VarSet vars() const;
  void collect_vars(VarSet& out) const;
  AtomicConstraint rename(const VarMap& m) const;

  friend bool operator==(const AtomicConstraint&, const AtomicConstraint&) = default;

 private:
  std::variant<LinearAtom, OpaqueAtom> value_;
};

/// A conjunction of atomic constraints. The empty conjunction is true; the
/// false marker absorbs everything conjoined to it.
class Constraint {
 public:
  Constraint() = default;
  explicit Constraint(std::vector<AtomicConstraint> conjuncts)
      : conjuncts_(std::move(conjuncts)) {}
  static Constraint top() { return {}; }
  static Constraint bottom();

  bool is_false() const { return false_; }
  bool is_true() const { return !false_ && conjuncts_.empty(); }
  const std::vector<AtomicConstraint>& conjuncts() const { return conjuncts_; }

  void add(AtomicConstraint c);
  void add(const Constraint& other);
  friend Constraint operator&&(Constraint a, const Constraint& b) {
    a.add(b);
    return a;
  }

  VarSet vars() const;
  void collect_vars(VarSet& out) const;
  Constraint rename(const VarMap& m) const;

  friend bool operator==(const Constraint&, const Constraint&) = default;

 private:
  std::vector<AtomicConstraint> conjuncts_;
  bool false_ = false;
};

// Atoms, clauses, programs

struct PredicateKey {
  std::string name;
  std::size_t arity = 0;
  friend auto operator<=>(const PredicateKey&, const PredicateKey&) = default;
  std::string str() const { return name + "/" + std::to_string(arity); }
};

struct Atom {
  std::string predicate;
  std::vector<Var> args;

  PredicateKey key() const { return {predicate, args.size()}; }
  Atom rename(const VarMap& m) const;
  friend bool operator==(const Atom&, const Atom&) = default;
};

/// head :- constraint, body[0], ..., body[k-1].
struct Clause {
  Atom head;
  Constraint constraint;
  std::vector<Atom> body;

  VarSet vars() const;
  Clause rename(const VarMap& m) const;
  bool is_fact() const { return body.empty(); }
};

/// p(x) :- phi with phi over the variables of x only.
struct ConstrainedFact {
  Atom atom;
  Constraint constraint;

  PredicateKey key() const { return atom.key(); }
  /// Same fact expressed over the positional tuple A, B, C, ...
  ConstrainedFact positional() const;
  /// Same fact over the given argument tuple (same arity).
  ConstrainedFact onto(const std::vector<Var>& args) const;
  Clause as_clause() const { return {atom, constraint, {}}; }
};

class Program {
 public:
  Program() = default;
  explicit Program(std::vector<Clause> clauses);

  void add(Clause c);
  const std::vector<Clause>& clauses() const { return clauses_; }
  std::size_t size() const { return clauses_.size(); }
  bool empty() const { return clauses_.empty(); }

  /// Positions of the clauses whose head has this predicate, in order.
  const std::vector<std::size_t>& clauses_for(const PredicateKey& key) const;
  bool defines(const PredicateKey& key) const { return index_.count(key) != 0; }

  /// Every predicate appearing in a head or body, in order of first
  /// appearance.
  std::vector<PredicateKey> predicates() const;

 private:
  std::vector<Clause> clauses_;
  std::map<PredicateKey, std::vector<std::size_t>> index_;
};

// Errors

/// Malformed user input (syntax, arity clash, bad option value).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// A broken invariant inside the library (e.g. a missing fold target).
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A configured resource budget (tree nodes, iterations) was exhausted.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Structural utilities

/// Copy of the clause with every variable replaced by a fresh one.
Clause rename_apart(const Clause& c);

/// Renames variables to A, B, C, ... by first appearance (head, body, then
/// constraint). Used to make output programs readable and stable.
Clause standardize_names(const Clause& c);

/// True iff the clauses are equal up to a bijective renaming of variables.
bool isomorphic(const Clause& a, const Clause& b);
bool isomorphic(const Program& a, const Program& b);

}  // namespace chcspec
