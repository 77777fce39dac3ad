#include "chcspec/analysis.hpp"

#include <algorithm>
#include <sstream>

#include "chcspec/constraints.hpp"

namespace chcspec {

PredDepGraph pred_dep_graph(const Program& p, const std::set<std::string>& entries) {
  PredDepGraph g;
  for (const auto& c : p.clauses()) {
    g.nodes.insert(c.head.predicate);
    for (const auto& b : c.body) {
      g.nodes.insert(b.predicate);
      g.edges.emplace_back(c.head.predicate, b.predicate);
    }
  }
  for (const auto& e : entries)
    if (g.nodes.count(e)) g.entries.insert(e);
  return g;
}

namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + '"';
}

}  // namespace

std::string emit_dot(const PredDepGraph& g) {
  std::ostringstream os;
  os << "digraph g {\n";
  for (const auto& n : g.nodes) {
    os << "  " << quoted(n);
    if (g.entries.count(n)) os << " [peripheries=2]";
    os << ";\n";
  }
  auto edges = g.edges;
  std::sort(edges.begin(), edges.end());
  for (const auto& [from, to] : edges) os << "  " << quoted(from) << " -> " << quoted(to) << ";\n";
  os << "}\n";
  return os.str();
}

Minimized minimize_versions(const Specialization& s) {
  const auto& versions = s.table.entries();
  const std::size_t n = versions.size();

  std::vector<std::vector<std::size_t>> clauses_of(n);
  for (std::size_t i = 0; i < s.origins.size(); ++i) clauses_of[s.origins[i].version].push_back(i);

  std::vector<std::size_t> block(n);
  {
    std::map<PredicateKey, std::size_t> ids;
    for (std::size_t v = 0; v < n; ++v)
      block[v] = ids.emplace(versions[v].original, ids.size()).first->second;
  }
  std::size_t count = n == 0 ? 0 : *std::max_element(block.begin(), block.end()) + 1;

  using Signature =
      std::pair<std::size_t, std::set<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>>>;
  for (;;) {
    std::map<Signature, std::size_t> ids;
    std::vector<std::size_t> next(n);
    for (std::size_t v = 0; v < n; ++v) {
      Signature sig{block[v], {}};
      for (auto ci : clauses_of[v]) {
        const auto& o = s.origins[ci];
        std::vector<std::size_t> called;
        for (auto t : o.targets) called.push_back(block[t]);
        sig.second.emplace(o.path, std::move(called));
      }
      next[v] = ids.emplace(std::move(sig), ids.size()).first->second;
    }
    block = std::move(next);
    if (ids.size() == count) break;
    count = ids.size();
  }

  std::vector<std::vector<std::size_t>> members(count);
  for (std::size_t v = 0; v < n; ++v) members[block[v]].push_back(v);

  std::map<std::string, std::string> rename;
  for (const auto& m : members) {
    std::size_t rep = m.front();
    for (auto v : m)
      if (versions[v].from_s0) {
        rep = v;
        break;
      }
    for (auto v : m) rename[versions[v].name] = versions[rep].name;
  }
  auto rewrite = [&](Clause c) {
    c.head.predicate = rename.at(c.head.predicate);
    for (auto& b : c.body) b.predicate = rename.at(b.predicate);
    return c;
  };

  Minimized out;
  out.block_of = block;
  out.blocks = count;
  for (const auto& m : members) {
    std::optional<std::size_t> weakest;
    for (auto w : m) {
      bool all = std::all_of(m.begin(), m.end(), [&](std::size_t v) {
        return entails(versions[v].fact.constraint, versions[w].fact.constraint);
      });
      if (all) {
        weakest = w;
        break;
      }
    }
    std::size_t source = weakest.value_or(m.front());
    for (auto ci : clauses_of[source])
      out.program.add(rewrite(weakest ? s.program.clauses()[ci] : s.origins[ci].path_only));
  }
  return out;
}

namespace {

LinearExpr var_expr(const Var& v) { return LinearExpr::variable(v); }

AtomicConstraint eq(const LinearExpr& a, const LinearExpr& b) {
  return AtomicConstraint::linear(a - b, Rel::Eq);
}

AtomicConstraint le(const LinearExpr& a, const LinearExpr& b) {
  return AtomicConstraint::linear(a - b, Rel::Le);
}

}  // namespace

Program dimension_instrument(const Program& p) {
  Program out;
  for (const auto& c : p.clauses()) {
    Clause base = c;
    Var k = fresh_var("K");
    base.head.args.push_back(k);
    std::vector<Var> ks;
    for (std::size_t i = 0; i < base.body.size(); ++i) {
      ks.push_back(fresh_var("K" + std::to_string(i + 1)));
      base.body[i].args.push_back(ks.back());
    }
    Constraint nonneg;
    for (const auto& ki : ks) nonneg.add(le(LinearExpr(), var_expr(ki)));
    LinearExpr below = var_expr(k) - LinearExpr(Rational(1));

    std::vector<Constraint> cases;
    const std::size_t n = ks.size();
    if (n == 0) {
      cases.push_back(Constraint({eq(var_expr(k), LinearExpr())}));
    } else if (n == 1) {
      cases.push_back(Constraint({eq(var_expr(k), var_expr(ks[0]))}));
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        Constraint d({eq(var_expr(ks[i]), var_expr(k))});
        for (std::size_t j = 0; j < n; ++j)
          if (j != i) d.add(le(var_expr(ks[j]), below));
        cases.push_back(std::move(d));
      }
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
          Constraint d({eq(var_expr(ks[i]), below), eq(var_expr(ks[j]), below)});
          for (std::size_t m = 0; m < n; ++m)
            if (m != i && m != j) d.add(le(var_expr(ks[m]), below));
          cases.push_back(std::move(d));
        }
    }
    for (auto& d : cases) {
      Clause copy = base;
      copy.constraint = base.constraint && d && nonneg;
      out.add(rename_apart(copy));
    }
  }
  return out;
}

DimensionMode parse_dimension_mode(const std::string& text) {
  if (text == "exact") return DimensionMode::Exact;
  if (text == "atmost") return DimensionMode::AtMost;
  if (text == "above") return DimensionMode::Above;
  throw InputError("unknown dimension mode '" + text + "' (expected exact, atmost or above)");
}

DimensionSetup dimension_bound_setup(const Program& instrumented, const PredicateKey& entry,
                                     DimensionMode mode, std::size_t d) {
  if (entry.arity == 0) throw InputError("entry predicate has no dimension argument");
  Atom atom{entry.name, positional_vars(entry.arity)};
  LinearExpr c = var_expr(atom.args.back());
  LinearExpr bound(Rational(static_cast<long>(d)));
  AtomicConstraint k = mode == DimensionMode::Exact    ? eq(c, bound)
                       : mode == DimensionMode::AtMost ? le(c, bound)
                                                       : le(bound + LinearExpr(Rational(1)), c);
  DimensionSetup out;
  out.entry.push_back({atom, Constraint({k})});
  out.properties = dimension_ladder(instrumented, d);
  return out;
}

}  // namespace chcspec
