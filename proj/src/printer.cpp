#include "chcspec/printer.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace chcspec {

NameTable::NameTable(const VarSet& vars) {
  std::map<std::string, std::vector<Var>> by_name;
  for (const auto& v : vars) by_name[v.name.empty() ? "V" : v.name].push_back(v);
  std::set<std::string> used;
  for (const auto& [name, vs] : by_name)
    if (vs.size() == 1) used.insert(name);
  for (const auto& [name, vs] : by_name) {
    if (vs.size() == 1) {
      names_.emplace(vs.front(), name);
      continue;
    }
    std::size_t k = 1;
    for (const auto& v : vs) {
      std::string candidate;
      do {
        candidate = name + "_" + std::to_string(k++);
      } while (used.count(candidate));
      used.insert(candidate);
      names_.emplace(v, candidate);
    }
  }
}

const std::string& NameTable::operator()(const Var& v) const {
  auto it = names_.find(v);
  if (it == names_.end()) throw InternalError("variable without a print name: " + v.name);
  return it->second;
}

namespace {

int precedence(const Term& t) {
  switch (t.kind) {
    case Term::Kind::Add:
    case Term::Kind::Sub:
      return 1;
    case Term::Kind::Mul:
    case Term::Kind::Div:
      return 2;
    case Term::Kind::Neg:
      return 3;
    default:
      return 4;
  }
}

void print_term(std::ostream& os, const Term& t, const NameTable& names, int required) {
  bool parens = precedence(t) < required;
  if (parens) os << '(';
  switch (t.kind) {
    case Term::Kind::Variable:
      os << names(t.var);
      break;
    case Term::Kind::Number:
      if (is_integer(t.number) && t.number >= 0)
        os << to_string(t.number);
      else
        os << '(' << to_string(t.number) << ')';
      break;
    case Term::Kind::Neg:
      os << '-';
      print_term(os, t.args[0], names, 3);
      break;
    default: {
      static const char* ops = "+-*/";
      int p = precedence(t);
      char op = ops[static_cast<int>(t.kind) - static_cast<int>(Term::Kind::Add)];
      print_term(os, t.args[0], names, p);
      os << op;
      print_term(os, t.args[1], names, p + 1);
    }
  }
  if (parens) os << ')';
}

std::string coef_term(const Rational& c, const std::string& name) {
  if (c == 1) return name;
  return to_string(c) + "*" + name;
}

// Prints "L op R" where f = L - R, L collects positive terms of f and R the
// negated negative terms and the negated constant.
std::string print_sides(const std::vector<std::pair<std::string, Rational>>& terms,
                        const Rational& constant, const char* op) {
  std::string lhs, rhs;
  for (const auto& [name, c] : terms) {
    std::string& side = c > 0 ? lhs : rhs;
    if (!side.empty()) side += '+';
    side += coef_term(abs(c), name);
  }
  Rational k = -constant;
  if (k != 0) {
    if (rhs.empty())
      rhs = to_string(k);
    else
      rhs += (k > 0 ? "+" : "-") + to_string(abs(k));
  }
  if (lhs.empty()) lhs = "0";
  if (rhs.empty()) rhs = "0";
  return lhs + op + rhs;
}

const char* rel_text(Rel r, bool flipped) {
  switch (r) {
    case Rel::Le:
      return flipped ? ">=" : "=<";
    case Rel::Lt:
      return flipped ? ">" : "<";
    default:
      return "=";
  }
}

}  // namespace

std::string render_term(const Term& t, const NameTable& names) {
  std::ostringstream os;
  print_term(os, t, names, 0);
  return os.str();
}

std::string render_atomic(const AtomicConstraint& c, const NameTable& names) {
  if (!c.is_linear()) {
    const auto& o = c.as_opaque();
    return render_term(o.lhs, names) + rel_text(o.rel, false) + render_term(o.rhs, names);
  }
  const auto& a = c.as_linear();
  std::vector<std::pair<std::string, Rational>> terms;
  for (const auto& [v, coef] : a.expr.terms()) terms.emplace_back(names(v), coef);
  std::sort(terms.begin(), terms.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  bool flip = a.rel != Rel::Eq && !terms.empty() && terms.front().second < 0;
  Rational constant = a.expr.constant();
  if (flip) {
    for (auto& t : terms) t.second = -t.second;
    constant = -constant;
  }
  return print_sides(terms, constant, rel_text(a.rel, flip));
}

std::string render_constraint(const Constraint& c, const NameTable& names) {
  if (c.is_false()) return "false";
  if (c.conjuncts().empty()) return "true";
  std::string out;
  for (const auto& conj : c.conjuncts()) {
    if (!out.empty()) out += ", ";
    out += render_atomic(conj, names);
  }
  return out;
}

std::string render_constraint(const Constraint& c) { return render_constraint(c, NameTable(c.vars())); }

std::string render_atom(const Atom& a, const NameTable& names) {
  std::string out = a.predicate;
  if (a.args.empty()) return out;
  out += '(';
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (i) out += ',';
    out += names(a.args[i]);
  }
  return out + ')';
}

std::string render_clause(const Clause& c) {
  NameTable names(c.vars());
  std::string out = render_atom(c.head, names);
  std::vector<std::string> items;
  if (c.constraint.is_false())
    items.emplace_back("false");
  else
    for (const auto& conj : c.constraint.conjuncts()) items.push_back(render_atomic(conj, names));
  for (const auto& b : c.body) items.push_back(render_atom(b, names));
  if (!items.empty()) {
    out += " :- ";
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i) out += ", ";
      out += items[i];
    }
  }
  return out + ".";
}

std::string render_fact(const ConstrainedFact& f) { return render_clause(f.as_clause()); }

std::string render_program(const Program& p) {
  std::string out;
  for (const auto& c : p.clauses()) out += render_clause(c) + "\n";
  return out;
}

}  // namespace chcspec
