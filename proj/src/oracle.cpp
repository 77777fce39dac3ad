#include "chcspec/oracle.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace chcspec {

GridSpec parse_grid(const std::string& text, std::size_t iterations) {
  auto dots = text.find("..");
  GridSpec g;
  g.max_iterations = iterations;
  try {
    if (dots == std::string::npos) throw std::invalid_argument(text);
    std::size_t used = 0;
    std::string lo = text.substr(0, dots), hi = text.substr(dots + 2);
    g.lo = std::stol(lo, &used);
    if (used != lo.size()) throw std::invalid_argument(lo);
    g.hi = std::stol(hi, &used);
    if (used != hi.size()) throw std::invalid_argument(hi);
  } catch (const std::logic_error&) {
    throw InputError("bad grid '" + text + "' (expected lo..hi)");
  }
  if (g.lo > g.hi) throw InputError("bad grid '" + text + "': lo exceeds hi");
  return g;
}

bool GroundModel::holds(const PredicateKey& key, const GroundTuple& t) const {
  auto it = atoms.find(key);
  return it != atoms.end() && it->second.count(t) != 0;
}

std::set<GroundTuple> GroundModel::tuples(const PredicateKey& key) const {
  std::set<GroundTuple> out;
  auto it = atoms.find(key);
  if (it != atoms.end())
    for (const auto& [t, dims] : it->second) out.insert(t);
  return out;
}

std::size_t GroundModel::size() const {
  std::size_t n = 0;
  for (const auto& [k, m] : atoms) n += m.size();
  return n;
}

namespace {

using Values = std::vector<std::optional<long>>;
using Relation = std::map<GroundTuple, std::set<long>>;
using Model = std::map<PredicateKey, Relation>;

struct LinearRow {
  std::vector<std::pair<std::size_t, Rational>> terms;
  Rational constant;
  Rel rel;
};

struct OpaqueRow {
  Term lhs, rhs;  // variables renumbered: Term::var.id is a local index
  Rel rel;
};

bool compare(const Rational& lhs, Rel rel, const Rational& rhs) {
  switch (rel) {
    case Rel::Le:
      return lhs <= rhs;
    case Rel::Lt:
      return lhs < rhs;
    default:
      return lhs == rhs;
  }
}

std::optional<Rational> eval(const Term& t, const Values& v) {
  switch (t.kind) {
    case Term::Kind::Variable: {
      const auto& x = v[t.var.id];
      if (!x) return std::nullopt;
      return Rational(*x);
    }
    case Term::Kind::Number:
      return t.number;
    case Term::Kind::Neg: {
      auto a = eval(t.args[0], v);
      if (!a) return std::nullopt;
      return Rational(-*a);
    }
    default: {
      auto a = eval(t.args[0], v), b = eval(t.args[1], v);
      if (!a || !b) return std::nullopt;
      switch (t.kind) {
        case Term::Kind::Add:
          return Rational(*a + *b);
        case Term::Kind::Sub:
          return Rational(*a - *b);
        case Term::Kind::Mul:
          return Rational(*a * *b);
        default:
          if (*b == 0) return std::nullopt;
          return Rational(*a / *b);
      }
    }
  }
}

Term renumber(const Term& t, const std::map<Var, std::size_t>& index) {
  Term out = t;
  if (t.kind == Term::Kind::Variable) out.var = Var{index.at(t.var), t.var.name};
  for (auto& a : out.args) a = renumber(a, index);
  return out;
}

void add_dimension(std::set<long>& dims, long d) {
  dims.insert(d);
  while (dims.size() > kDimensionCap) dims.erase(std::prev(dims.end()));
}

// One clause compiled against local variable indices.
class ClauseSolver {
 public:
  ClauseSolver(const Clause& c, const GridSpec& g) : grid_(g) {
    VarSet vars = c.vars();
    for (const auto& v : vars) index_.emplace(v, index_.size());
    for (const auto& a : c.head.args) head_.push_back(index_.at(a));
    head_key_ = c.head.key();
    for (const auto& b : c.body) {
      std::vector<std::size_t> args;
      for (const auto& a : b.args) args.push_back(index_.at(a));
      body_.emplace_back(b.key(), std::move(args));
    }
    impossible_ = c.constraint.is_false();
    for (const auto& conj : c.constraint.conjuncts()) {
      if (conj.is_linear()) {
        const auto& l = conj.as_linear();
        LinearRow r{{}, l.expr.constant(), l.rel};
        for (const auto& [v, k] : l.expr.terms()) r.terms.emplace_back(index_.at(v), k);
        linear_.push_back(std::move(r));
      } else {
        const auto& o = conj.as_opaque();
        opaque_.push_back({renumber(o.lhs, index_), renumber(o.rhs, index_), o.rel});
      }
    }
  }

  const PredicateKey& head_key() const { return head_key_; }

  // Calls emit(head tuple, dimension) for every instance over `model`.
  void run(const Model& model, const std::function<void(GroundTuple, long)>& emit) {
    if (impossible_) return;
    Values v(index_.size());
    std::vector<const std::set<long>*> chosen(body_.size());
    search(model, v, 0, chosen, emit);
  }

 private:
  bool consistent(const Values& v) const {
    for (const auto& r : linear_) {
      Rational sum = r.constant;
      bool bound = true;
      for (const auto& [i, k] : r.terms) {
        if (!v[i]) {
          bound = false;
          break;
        }
        sum += k * *v[i];
      }
      if (bound && !compare(sum, r.rel, 0)) return false;
    }
    for (const auto& r : opaque_) {
      auto a = eval(r.lhs, v), b = eval(r.rhs, v);
      if (a && b && !compare(*a, r.rel, *b)) return false;
      if (!a || !b) {
        VarSet vs;
        r.lhs.collect_vars(vs);
        r.rhs.collect_vars(vs);
        bool all = std::all_of(vs.begin(), vs.end(), [&](const Var& x) { return v[x.id].has_value(); });
        if (all) return false;  // fully bound but undefined (division by zero)
      }
    }
    return true;
  }

  bool in_grid(const Rational& q) const {
    return q.get_den() == 1 && q >= grid_.lo && q <= grid_.hi;
  }

  // A variable whose value is forced by an equality; nullopt if none.
  std::optional<std::pair<std::size_t, Rational>> forced(const Values& v) const {
    for (const auto& r : linear_) {
      if (r.rel != Rel::Eq) continue;
      std::optional<std::size_t> unknown;
      Rational coef, sum = r.constant;
      bool single = true;
      for (const auto& [i, k] : r.terms) {
        if (v[i]) {
          sum += k * *v[i];
        } else if (unknown) {
          single = false;
          break;
        } else {
          unknown = i;
          coef = k;
        }
      }
      if (single && unknown) return std::make_pair(*unknown, Rational(-sum / coef));
    }
    for (const auto& r : opaque_) {
      if (r.rel != Rel::Eq) continue;
      for (int side = 0; side < 2; ++side) {
        const Term& lone = side ? r.rhs : r.lhs;
        const Term& other = side ? r.lhs : r.rhs;
        if (lone.kind != Term::Kind::Variable || v[lone.var.id]) continue;
        if (auto value = eval(other, v)) return std::make_pair(lone.var.id, *value);
      }
    }
    return std::nullopt;
  }

  void search(const Model& model, Values& v, std::size_t atom,
              std::vector<const std::set<long>*>& chosen,
              const std::function<void(GroundTuple, long)>& emit) {
    if (!consistent(v)) return;
    if (atom < body_.size()) {
      auto rel = model.find(body_[atom].first);
      if (rel == model.end()) return;
      const auto& args = body_[atom].second;
      for (const auto& [tuple, dims] : rel->second) {
        std::vector<std::size_t> bound_here;
        bool ok = true;
        for (std::size_t k = 0; k < args.size() && ok; ++k) {
          auto& slot = v[args[k]];
          if (!slot) {
            slot = tuple[k];
            bound_here.push_back(args[k]);
          } else if (*slot != tuple[k]) {
            ok = false;
          }
        }
        if (ok) {
          chosen[atom] = &dims;
          search(model, v, atom + 1, chosen, emit);
        }
        for (auto i : bound_here) v[i].reset();
      }
      return;
    }
    if (auto f = forced(v)) {
      if (!in_grid(f->second)) return;
      v[f->first] = f->second.get_num().get_si();
      search(model, v, atom, chosen, emit);
      v[f->first].reset();
      return;
    }
    auto free = std::find_if(v.begin(), v.end(), [](const auto& x) { return !x.has_value(); });
    if (free != v.end()) {
      for (long x = grid_.lo; x <= grid_.hi; ++x) {
        *free = x;
        search(model, v, atom, chosen, emit);
      }
      free->reset();
      return;
    }
    GroundTuple head;
    for (auto i : head_) head.push_back(*v[i]);
    for (long d : dimensions(chosen)) emit(head, d);
  }

  // Dimension of the node for every combination of child dimensions.
  static std::set<long> dimensions(const std::vector<const std::set<long>*>& chosen) {
    std::set<long> out;
    if (chosen.empty()) {
      out.insert(0);
      return out;
    }
    std::vector<long> pick(chosen.size());
    std::function<void(std::size_t)> go = [&](std::size_t i) {
      if (i == chosen.size()) {
        long top = *std::max_element(pick.begin(), pick.end());
        long reach = std::count(pick.begin(), pick.end(), top);
        add_dimension(out, reach >= 2 ? top + 1 : top);
        return;
      }
      for (long d : *chosen[i]) {
        pick[i] = d;
        go(i + 1);
      }
    };
    go(0);
    return out;
  }

  GridSpec grid_;
  std::map<Var, std::size_t> index_;
  PredicateKey head_key_;
  std::vector<std::size_t> head_;
  std::vector<std::pair<PredicateKey, std::vector<std::size_t>>> body_;
  std::vector<LinearRow> linear_;
  std::vector<OpaqueRow> opaque_;
  bool impossible_ = false;
};

}  // namespace

GroundModel ground_eval(const Program& p, const GridSpec& g) {
  std::vector<ClauseSolver> solvers;
  for (const auto& c : p.clauses()) solvers.emplace_back(c, g);

  GroundModel out;
  Model current;
  for (std::size_t iter = 1; iter <= g.max_iterations; ++iter) {
    Model next = current;
    for (auto& s : solvers)
      s.run(current, [&](GroundTuple t, long d) { add_dimension(next[s.head_key()][t], d); });
    out.iterations = iter;
    bool changed = next != current;
    current = std::move(next);
    if (!changed) {
      out.converged = true;
      break;
    }
  }
  out.atoms = std::move(current);
  return out;
}

namespace {

std::string render_ground(const std::string& pred, const GroundTuple& t) {
  std::ostringstream os;
  os << pred;
  if (!t.empty()) {
    os << '(';
    for (std::size_t i = 0; i < t.size(); ++i) os << (i ? "," : "") << t[i];
    os << ')';
  }
  return os.str();
}

}  // namespace

GridComparison equivalent_on_grid(const Program& p1, const Program& p2,
                                  const std::map<PredicateKey, std::string>& entries,
                                  const GridSpec& g) {
  GroundModel m1 = ground_eval(p1, g), m2 = ground_eval(p2, g);
  GridComparison out;
  out.converged = m1.converged && m2.converged;
  for (const auto& [key, name] : entries) {
    auto a = m1.tuples(key);
    auto b = m2.tuples({name, key.arity});
    if (a == b) continue;
    out.equivalent = false;
    for (const auto& t : a)
      if (!b.count(t)) {
        out.witness = render_ground(key.name, t) + " holds only in the first program";
        return out;
      }
    for (const auto& t : b)
      if (!a.count(t)) {
        out.witness = render_ground(name, t) + " holds only in the second program";
        return out;
      }
  }
  return out;
}

}  // namespace chcspec
