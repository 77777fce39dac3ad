#include "support.hpp"

#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "chcspec/constraints.hpp"
#include "chcspec/parser.hpp"
#include "chcspec/printer.hpp"

using namespace chcspec;

namespace testsupport {

std::string read_data(const std::string& name) {
  std::string path = std::string(CHCSPEC_TEST_DATA) + "/" + name;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing test data " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Program load_program(const std::string& name) { return parse_program(read_data(name)); }

PropertySet load_props(const std::string& name) {
  return PropertySet(parse_constrained_facts(read_data(name)));
}

std::vector<ConstrainedFact> facts(const std::string& text) { return parse_constrained_facts(text); }

Constraint constraint(const std::string& text, std::map<std::string, Var>& scope) {
  return parse_constraint(text, scope);
}

namespace {

std::map<std::string, std::vector<std::size_t>> by_predicate(const Program& p) {
  std::map<std::string, std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < p.size(); ++i) out[p.clauses()[i].head.predicate].push_back(i);
  return out;
}

bool clause_matches(const Clause& g, const Clause& e, const std::map<std::string, std::string>& pm) {
  if (pm.at(e.head.predicate) != g.head.predicate || g.body.size() != e.body.size()) return false;
  if (g.constraint.is_false() != e.constraint.is_false()) return false;
  if (g.constraint.is_false()) return true;
  VarMap m, back;
  auto bind = [&](const Atom& ga, const Atom& ea) {
    if (ga.args.size() != ea.args.size()) return false;
    for (std::size_t k = 0; k < ga.args.size(); ++k) {
      auto [it, fresh] = m.emplace(ea.args[k], ga.args[k]);
      auto [jt, fresh2] = back.emplace(ga.args[k], ea.args[k]);
      if (it->second != ga.args[k] || jt->second != ea.args[k]) return false;
    }
    return true;
  };
  if (!bind(g.head, e.head)) return false;
  for (std::size_t i = 0; i < g.body.size(); ++i) {
    auto it = pm.find(e.body[i].predicate);
    if (it == pm.end() || it->second != g.body[i].predicate) return false;
    if (!bind(g.body[i], e.body[i])) return false;
  }
  VarSet gv, ev;
  for (const auto& [from, to] : m) {
    ev.insert(from);
    gv.insert(to);
  }
  // Rename the expected clause's remaining variables apart from g's.
  Constraint ec = project(e.constraint, ev);
  return equivalent(project(g.constraint, gv), ec.rename(m));
}

bool match_clauses(const Program& got, const Program& exp, const std::vector<std::size_t>& gs,
                   const std::vector<std::size_t>& es, std::size_t i, std::vector<bool>& used,
                   const std::map<std::string, std::string>& pm) {
  if (i == es.size()) return true;
  for (std::size_t j = 0; j < gs.size(); ++j) {
    if (used[j] || !clause_matches(got.clauses()[gs[j]], exp.clauses()[es[i]], pm)) continue;
    used[j] = true;
    if (match_clauses(got, exp, gs, es, i + 1, used, pm)) return true;
    used[j] = false;
  }
  return false;
}

}  // namespace

bool same_up_to_renaming(const Program& got, const Program& expected, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  auto gp = by_predicate(got), ep = by_predicate(expected);
  // Body-only predicates must correspond too.
  std::map<std::string, std::size_t> arity_g, arity_e;
  for (const auto& k : got.predicates()) arity_g[k.name] = k.arity;
  for (const auto& k : expected.predicates()) arity_e[k.name] = k.arity;
  if (arity_g.size() != arity_e.size())
    return fail(std::to_string(arity_g.size()) + " predicates, expected " +
                std::to_string(arity_e.size()));
  if (got.size() != expected.size())
    return fail(std::to_string(got.size()) + " clauses, expected " +
                std::to_string(expected.size()));

  std::vector<std::string> names;
  for (const auto& [n, a] : arity_e) names.push_back(n);
  std::map<std::string, std::string> pm;
  std::set<std::string> taken;
  static const std::vector<std::size_t> none;
  auto clauses = [](const auto& m, const std::string& n) -> const std::vector<std::size_t>& {
    auto it = m.find(n);
    return it == m.end() ? none : it->second;
  };
  std::function<bool(std::size_t)> assign = [&](std::size_t i) {
    if (i == names.size()) {
      for (const auto& n : names) {
        const auto& es = clauses(ep, n);
        const auto& gs = clauses(gp, pm[n]);
        std::vector<bool> used(gs.size());
        if (!match_clauses(got, expected, gs, es, 0, used, pm)) return false;
      }
      return true;
    }
    const std::string& n = names[i];
    for (const auto& [g, a] : arity_g) {
      if (taken.count(g) || a != arity_e[n] || clauses(gp, g).size() != clauses(ep, n).size())
        continue;
      pm[n] = g;
      taken.insert(g);
      if (assign(i + 1)) return true;
      taken.erase(g);
      pm.erase(n);
    }
    return false;
  };
  if (!assign(0)) return fail("no predicate renaming makes the clauses match");
  return true;
}

AtomicConstraint random_atomic(std::mt19937& rng, const std::vector<Var>& vars, int k,
                               bool allow_equality) {
  std::uniform_int_distribution<int> coef(-k, k);
  LinearExpr e;
  while (e.is_constant())
    for (const auto& v : vars) e.add_term(v, Rational(coef(rng)));
  e.add_constant(Rational(coef(rng)));
  std::uniform_int_distribution<int> rel(0, allow_equality ? 4 : 3);
  int r = rel(rng);
  return AtomicConstraint::linear(std::move(e), r < 2 ? Rel::Le : r < 4 ? Rel::Lt : Rel::Eq);
}

Constraint random_constraint(std::mt19937& rng, const std::vector<Var>& vars, int max_conjuncts,
                             int k) {
  std::uniform_int_distribution<int> n(1, max_conjuncts);
  Constraint c;
  for (int i = n(rng); i > 0; --i) c.add(random_atomic(rng, vars, k));
  return c;
}

Program random_program(std::mt19937& rng) {
  static const char* preds[] = {"p", "q", "r"};
  std::uniform_int_distribution<int> clause_count(1, 3), pick(0, 2), coin(0, 1), small(-2, 2);
  Program out;
  bool has_fact = false;
  for (int pi = 0; pi < 3; ++pi) {
    int n = clause_count(rng);
    for (int ci = 0; ci < n; ++ci) {
      Var x = fresh_var("X"), y = fresh_var("Y");
      Clause c;
      c.head = Atom{preds[pi], {x, y}};
      bool fact = (ci == 0 && pi == 2) || coin(rng) == 0;
      std::vector<Var> vars{x, y};
      if (!fact) {
        Var u = fresh_var("U"), v = fresh_var("V");
        c.body.push_back(Atom{preds[pick(rng)], {u, v}});
        // A step relation keeps derivations shallow enough for the grid.
        LinearExpr step = LinearExpr::variable(x) - LinearExpr::variable(u);
        step.add_constant(Rational(small(rng)));
        c.constraint.add(AtomicConstraint::linear(step, Rel::Eq));
        vars.push_back(u);
        vars.push_back(v);
      }
      has_fact = has_fact || fact;
      std::uniform_int_distribution<int> extra(1, 2);
      for (int i = extra(rng); i > 0; --i) {
        std::vector<Var> sub;
        for (const auto& v : vars)
          if (coin(rng)) sub.push_back(v);
        if (sub.empty()) sub.push_back(vars[static_cast<std::size_t>(coin(rng))]);
        c.constraint.add(random_atomic(rng, sub, 2));
      }
      out.add(std::move(c));
    }
  }
  return out;
}

namespace {

Rational eval_term(const Term& t, const std::map<Var, long>& point, bool& defined) {
  switch (t.kind) {
    case Term::Kind::Variable:
      return Rational(point.at(t.var));
    case Term::Kind::Number:
      return t.number;
    case Term::Kind::Neg:
      return -eval_term(t.args[0], point, defined);
    default: {
      Rational a = eval_term(t.args[0], point, defined), b = eval_term(t.args[1], point, defined);
      switch (t.kind) {
        case Term::Kind::Add:
          return a + b;
        case Term::Kind::Sub:
          return a - b;
        case Term::Kind::Mul:
          return a * b;
        default:
          if (b == 0) {
            defined = false;
            return 0;
          }
          return a / b;
      }
    }
  }
}

bool rel_holds(const Rational& v, Rel r) {
  return r == Rel::Le ? v <= 0 : r == Rel::Lt ? v < 0 : v == 0;
}

}  // namespace

bool holds_at(const Constraint& c, const std::map<Var, long>& point) {
  if (c.is_false()) return false;
  for (const auto& conj : c.conjuncts()) {
    if (conj.is_linear()) {
      const auto& l = conj.as_linear();
      Rational v = l.expr.constant();
      for (const auto& [x, k] : l.expr.terms()) v += k * point.at(x);
      if (!rel_holds(v, l.rel)) return false;
    } else {
      const auto& o = conj.as_opaque();
      bool defined = true;
      Rational v = eval_term(o.lhs, point, defined) - eval_term(o.rhs, point, defined);
      if (!defined || !rel_holds(v, o.rel)) return false;
    }
  }
  return true;
}

void for_each_point(const std::vector<Var>& vars, long lo, long hi,
                    const std::function<void(const std::map<Var, long>&)>& f) {
  std::map<Var, long> point;
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (i == vars.size()) {
      f(point);
      return;
    }
    for (long x = lo; x <= hi; ++x) {
      point[vars[i]] = x;
      go(i + 1);
    }
  };
  go(0);
}

}  // namespace testsupport
