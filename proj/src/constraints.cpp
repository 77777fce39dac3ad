#include "chcspec/constraints.hpp"

#include <algorithm>

namespace chcspec {

namespace {

using Rows = std::vector<LinearAtom>;

bool strict(Rel r) { return r == Rel::Lt; }

// Truth value of a row without variables.
bool constant_holds(const LinearAtom& r) {
  const Rational& k = r.expr.constant();
  switch (r.rel) {
    case Rel::Le:
      return k <= 0;
    case Rel::Lt:
      return k < 0;
    default:
      return k == 0;
  }
}

// Scales a row so that its first coefficient has magnitude one (equalities:
// is exactly one). Keeps the direction of inequalities.
void normalize_unit(LinearAtom& r) {
  if (r.expr.is_constant()) return;
  Rational first = r.expr.terms().begin()->second;
  Rational scale = r.rel == Rel::Eq ? Rational(1 / first) : Rational(1 / abs(first));
  r.expr *= scale;
}

// Scales a row to coprime integer coefficients (constant included).
// Equalities additionally get a positive leading coefficient.
void normalize_integral(LinearAtom& r) {
  mpz_class lcm = r.expr.constant().get_den();
  for (const auto& [v, c] : r.expr.terms()) lcm = ::lcm(lcm, c.get_den());
  r.expr *= Rational(lcm);
  mpz_class g = r.expr.constant().get_num();
  for (const auto& [v, c] : r.expr.terms()) g = ::gcd(g, c.get_num());
  g = abs(g);
  if (g > 1) r.expr *= Rational(1, 1) / Rational(g);
  if (r.rel == Rel::Eq && !r.expr.is_constant() && r.expr.terms().begin()->second < 0)
    r.expr *= Rational(-1);
}

Rows linear_rows(const Constraint& phi) {
  Rows rows;
  for (const auto& c : phi.conjuncts())
    if (c.is_linear()) rows.push_back(c.as_linear());
  return rows;
}

// Removes constant rows that hold; returns false if one fails. Merges
// inequalities with identical coefficients, keeping the tightest.
bool tidy(Rows& rows) {
  Rows out;
  for (auto& r : rows) {
    if (r.expr.is_constant()) {
      if (!constant_holds(r)) return false;
      continue;
    }
    normalize_unit(r);
    bool merged = false;
    for (auto& o : out) {
      if (o.rel == Rel::Eq || r.rel == Rel::Eq || o.expr.terms() != r.expr.terms()) {
        if (o == r) merged = true;
        if (merged) break;
        continue;
      }
      // Same left-hand side; larger constant is tighter.
      const Rational& ko = o.expr.constant();
      const Rational& kr = r.expr.constant();
      if (kr > ko || (kr == ko && strict(r.rel))) o = r;
      merged = true;
      break;
    }
    if (!merged) out.push_back(std::move(r));
  }
  rows = std::move(out);
  return true;
}

// Eliminates the given variables (Gaussian substitution on equalities, then
// Fourier-Motzkin). Returns false when a contradiction is derived.
bool eliminate(Rows& rows, const VarSet& vars) {
  if (!tidy(rows)) return false;
  for (;;) {
    auto eq = std::find_if(rows.begin(), rows.end(), [&](const LinearAtom& r) {
      if (r.rel != Rel::Eq) return false;
      for (const auto& [v, c] : r.expr.terms())
        if (vars.count(v)) return true;
      return false;
    });
    if (eq == rows.end()) break;
    Var pivot;
    for (const auto& [v, c] : eq->expr.terms())
      if (vars.count(v)) {
        pivot = v;
        break;
      }
    // pivot = -(rest)/coef
    Rational coef = eq->expr.coefficient(pivot);
    LinearExpr rest = eq->expr;
    rest.add_term(pivot, -coef);
    LinearExpr value = rest * (Rational(-1) / coef);
    rows.erase(eq);
    for (auto& r : rows) r.expr = r.expr.substitute(pivot, value);
    if (!tidy(rows)) return false;
  }
  for (;;) {
    // Pick the variable producing the fewest combinations.
    std::optional<Var> best;
    std::size_t best_cost = 0;
    for (const auto& v : vars) {
      std::size_t pos = 0, neg = 0;
      for (const auto& r : rows) {
        Rational c = r.expr.coefficient(v);
        if (c > 0) ++pos;
        if (c < 0) ++neg;
      }
      if (pos + neg == 0) continue;
      std::size_t cost = pos * neg;
      if (!best || cost < best_cost) {
        best = v;
        best_cost = cost;
      }
    }
    if (!best) return true;
    Rows upper, lower, next;
    for (auto& r : rows) {
      Rational c = r.expr.coefficient(*best);
      if (c > 0)
        upper.push_back(std::move(r));
      else if (c < 0)
        lower.push_back(std::move(r));
      else
        next.push_back(std::move(r));
    }
    for (const auto& u : upper) {
      Rational cu = u.expr.coefficient(*best);
      for (const auto& l : lower) {
        Rational cl = -l.expr.coefficient(*best);
        LinearAtom combined{u.expr * cl + l.expr * cu,
                            strict(u.rel) || strict(l.rel) ? Rel::Lt : Rel::Le};
        next.push_back(std::move(combined));
      }
    }
    rows = std::move(next);
    if (!tidy(rows)) return false;
  }
}

bool rows_sat(Rows rows) {
  VarSet all;
  for (const auto& r : rows)
    for (const auto& [v, c] : r.expr.terms()) all.insert(v);
  return eliminate(rows, all);
}

Constraint from_rows(const Rows& rows) {
  Constraint c;
  for (auto r : rows) {
    normalize_integral(r);
    c.add(std::move(r));
  }
  return c;
}

bool row_less(const LinearAtom& a, const LinearAtom& b) {
  if ((a.rel == Rel::Eq) != (b.rel == Rel::Eq)) return a.rel == Rel::Eq;
  auto ia = a.expr.terms().begin(), ib = b.expr.terms().begin();
  for (; ia != a.expr.terms().end() && ib != b.expr.terms().end(); ++ia, ++ib) {
    if (ia->first != ib->first) return ia->first < ib->first;
    if (ia->second != ib->second) return ia->second < ib->second;
  }
  if ((ia == a.expr.terms().end()) != (ib == b.expr.terms().end()))
    return ia == a.expr.terms().end();
  if (a.expr.constant() != b.expr.constant()) return a.expr.constant() < b.expr.constant();
  return a.rel < b.rel;
}

bool rows_entail(const Rows& premises, const LinearAtom& goal) {
  auto refutes = [&](LinearAtom negated) {
    Rows rows = premises;
    rows.push_back(std::move(negated));
    return !rows_sat(std::move(rows));
  };
  switch (goal.rel) {
    case Rel::Le:
      return refutes({-goal.expr, Rel::Lt});
    case Rel::Lt:
      return refutes({-goal.expr, Rel::Le});
    default:
      return refutes({goal.expr, Rel::Lt}) && refutes({-goal.expr, Rel::Lt});
  }
}

}  // namespace

SatResult is_sat(const Constraint& phi) {
  if (phi.is_false()) return SatResult::Unsat;
  return rows_sat(linear_rows(phi)) ? SatResult::Sat : SatResult::Unsat;
}

Entailment entails_detailed(const Constraint& phi, const Constraint& psi) {
  Entailment out;
  if (!satisfiable(phi)) {
    out.holds = true;
    return out;
  }
  if (psi.is_false()) return out;
  Rows premises = linear_rows(phi);
  for (const auto& c : psi.conjuncts()) {
    if (!c.is_linear()) {
      const auto& lhs = phi.conjuncts();
      if (std::find(lhs.begin(), lhs.end(), c) == lhs.end()) return out;
      out.opaque_matched_syntactically = true;
      continue;
    }
    if (!rows_entail(premises, c.as_linear())) return out;
  }
  out.holds = true;
  return out;
}

bool entails_negation(const Constraint& phi, const Constraint& psi) {
  return !satisfiable(phi && psi);
}

Constraint project(const Constraint& phi, const VarSet& keep) {
  if (phi.is_false()) return Constraint::bottom();
  VarSet drop;
  for (const auto& v : phi.vars())
    if (!keep.count(v)) drop.insert(v);
  if (drop.empty()) return phi;
  Rows rows = linear_rows(phi);
  if (!eliminate(rows, drop)) return Constraint::bottom();
  Constraint out = from_rows(rows);
  for (const auto& c : phi.conjuncts()) {
    if (c.is_linear()) continue;
    VarSet vs = c.vars();
    bool inside = std::all_of(vs.begin(), vs.end(), [&](const Var& v) { return keep.count(v); });
    if (inside) out.add(c);
  }
  return out;
}

bool equivalent(const Constraint& phi, const Constraint& psi) {
  return entails(phi, psi) && entails(psi, phi);
}

std::optional<AtomicConstraint> negate(const AtomicConstraint& c) {
  if (!c.is_linear()) return std::nullopt;
  const auto& a = c.as_linear();
  switch (a.rel) {
    case Rel::Le:
      return LinearAtom{-a.expr, Rel::Lt};
    case Rel::Lt:
      return LinearAtom{-a.expr, Rel::Le};
    default:
      return std::nullopt;
  }
}

CanonicalConstraint canonicalize(const Constraint& phi) {
  CanonicalConstraint out;
  if (!satisfiable(phi)) {
    out.value_ = Constraint::bottom();
    return out;
  }
  Rows rows = linear_rows(phi);
  Rows eqs, ineqs;
  for (const auto& r : rows) {
    if (r.expr.is_constant()) continue;
    if (r.rel == Rel::Eq) {
      eqs.push_back(r);
    } else if (r.rel == Rel::Le && rows_entail(rows, {-r.expr, Rel::Le})) {
      eqs.push_back({r.expr, Rel::Eq});
    } else {
      ineqs.push_back(r);
    }
  }

  // Reduced row echelon form, pivots in variable order.
  VarSet vars;
  for (const auto& r : eqs)
    for (const auto& [v, c] : r.expr.terms()) vars.insert(v);
  Rows reduced;
  std::vector<Var> pivots;
  for (const auto& v : vars) {
    auto it = std::find_if(eqs.begin(), eqs.end(),
                           [&](const LinearAtom& r) { return r.expr.mentions(v); });
    if (it == eqs.end()) continue;
    LinearAtom row = *it;
    eqs.erase(it);
    row.expr *= 1 / row.expr.coefficient(v);
    LinearExpr rest = row.expr;
    rest.add_term(v, Rational(-1));
    LinearExpr value = -rest;
    for (auto& r : eqs) r.expr = r.expr.substitute(v, value);
    for (auto& r : reduced) r.expr = r.expr.substitute(v, value);
    for (auto& r : ineqs) r.expr = r.expr.substitute(v, value);
    reduced.push_back(std::move(row));
    pivots.push_back(v);
  }
  // Remaining equations are 0 = 0 (satisfiable input).

  Rows kept;
  for (auto& r : ineqs) {
    if (r.expr.is_constant()) continue;
    normalize_integral(r);
    auto same = std::find_if(kept.begin(), kept.end(), [&](const LinearAtom& o) {
      return o.expr.terms() == r.expr.terms();
    });
    if (same == kept.end()) {
      kept.push_back(r);
      continue;
    }
    const Rational& ko = same->expr.constant();
    const Rational& kr = r.expr.constant();
    if (kr > ko || (kr == ko && strict(r.rel))) *same = r;
  }
  for (auto& r : reduced) normalize_integral(r);
  std::sort(kept.begin(), kept.end(), row_less);
  for (std::size_t i = 0; i < kept.size();) {
    Rows others = reduced;
    for (std::size_t j = 0; j < kept.size(); ++j)
      if (j != i) others.push_back(kept[j]);
    if (rows_entail(others, kept[i]))
      kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(i));
    else
      ++i;
  }
  std::sort(reduced.begin(), reduced.end(), row_less);

  Constraint value;
  for (auto& r : reduced) value.add(r);
  for (auto& r : kept) value.add(r);
  std::vector<AtomicConstraint> opaque;
  for (const auto& c : phi.conjuncts())
    if (!c.is_linear() && std::find(opaque.begin(), opaque.end(), c) == opaque.end())
      opaque.push_back(c);
  for (auto& c : opaque) value.add(std::move(c));
  out.value_ = std::move(value);
  return out;
}

Constraint simplify(const Constraint& phi) {
  if (!satisfiable(phi)) return Constraint::bottom();
  std::vector<AtomicConstraint> items;
  for (const auto& c : phi.conjuncts()) {
    if (c.is_linear() && c.as_linear().expr.is_constant()) continue;
    if (std::find(items.begin(), items.end(), c) == items.end()) items.push_back(c);
  }
  for (std::size_t i = 0; i < items.size();) {
    if (!items[i].is_linear()) {
      ++i;
      continue;
    }
    Rows others;
    for (std::size_t j = 0; j < items.size(); ++j)
      if (j != i && items[j].is_linear()) others.push_back(items[j].as_linear());
    if (rows_entail(others, items[i].as_linear()))
      items.erase(items.begin() + static_cast<std::ptrdiff_t>(i));
    else
      ++i;
  }
  return Constraint(std::move(items));
}

}  // namespace chcspec
