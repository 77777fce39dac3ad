#include "chcspec/derivation.hpp"

#include <map>
#include <sstream>

#include "chcspec/constraints.hpp"
#include "chcspec/printer.hpp"

namespace chcspec {

UnfoldingRule UnfoldingRule::parse(const std::string& text) {
  if (text == "one-step") return one_step();
  if (text == "branch-recursive" || text == "branch-or-recursive") return branch_or_recursive();
  if (text.rfind("depth:", 0) == 0) {
    std::string n = text.substr(6);
    if (!n.empty() && n.find_first_not_of("0123456789") == std::string::npos) {
      std::size_t k = std::stoul(n);
      if (k > 0) return up_to_depth(k);
    }
  }
  throw InputError("unknown unfolding rule '" + text +
                   "' (expected one-step, branch-recursive or depth:<k>)");
}

std::string UnfoldingRule::str() const {
  switch (kind) {
    case Kind::OneStep:
      return "one-step";
    case Kind::BranchOrRecursive:
      return "branch-recursive";
    default:
      return "depth:" + std::to_string(depth);
  }
}

std::set<PredicateKey> recursive_predicates(const Program& p,
                                            const std::vector<PredicateKey>& entries) {
  enum class Color { White, Gray, Black };
  std::map<PredicateKey, Color> color;
  std::set<PredicateKey> out;

  // Iterative DFS; each frame walks the (clause, body atom) successor list.
  struct Frame {
    PredicateKey pred;
    std::vector<PredicateKey> succ;
    std::size_t next = 0;
  };
  auto successors = [&](const PredicateKey& k) {
    std::vector<PredicateKey> s;
    if (!p.defines(k)) return s;
    for (auto ci : p.clauses_for(k))
      for (const auto& b : p.clauses()[ci].body) s.push_back(b.key());
    return s;
  };
  auto visit = [&](const PredicateKey& root) {
    if (color[root] != Color::White) return;
    std::vector<Frame> stack;
    color[root] = Color::Gray;
    stack.push_back({root, successors(root)});
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (f.next == f.succ.size()) {
        color[f.pred] = Color::Black;
        stack.pop_back();
        continue;
      }
      PredicateKey q = f.succ[f.next++];
      Color& c = color[q];
      if (c == Color::Gray) {
        out.insert(q);
      } else if (c == Color::White) {
        c = Color::Gray;
        stack.push_back({q, successors(q)});
      }
    }
  };
  for (const auto& e : entries) visit(e);
  for (const auto& k : p.predicates()) visit(k);
  return out;
}

namespace {

// Resolution of c1's i-th atom against c2; `local` receives c2's renamed
// constraint (plus head-linking equalities).
Clause resolve(const Clause& c1, const Clause& c2, std::size_t i, Constraint& local) {
  if (i >= c1.body.size()) throw InternalError("unfold: body index out of range");
  const Atom& call = c1.body[i];
  if (call.key() != c2.head.key())
    throw InternalError("unfold: " + call.key().str() + " does not match clause head " +
                        c2.head.key().str());
  Clause fresh = rename_apart(c2);
  VarMap m;
  Constraint links;
  for (std::size_t k = 0; k < call.args.size(); ++k) {
    auto [it, inserted] = m.emplace(fresh.head.args[k], call.args[k]);
    if (!inserted)
      links.add(AtomicConstraint::linear(
          LinearExpr::variable(call.args[k]) - LinearExpr::variable(it->second), Rel::Eq));
  }
  fresh = fresh.rename(m);
  local = fresh.constraint && links;

  Clause out;
  out.head = c1.head;
  out.constraint = c1.constraint && local;
  if (!satisfiable(out.constraint)) {
    out.constraint = Constraint::bottom();
    return out;
  }
  out.body.insert(out.body.end(), c1.body.begin(), c1.body.begin() + static_cast<std::ptrdiff_t>(i));
  out.body.insert(out.body.end(), fresh.body.begin(), fresh.body.end());
  out.body.insert(out.body.end(), c1.body.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                  c1.body.end());
  return out;
}

bool should_unfold(const TreeNode& n, const DerivationContext& ctx) {
  if (n.clause.body.empty()) return false;
  switch (ctx.rule.kind) {
    case UnfoldingRule::Kind::OneStep:
      return n.depth == 0;
    case UnfoldingRule::Kind::Depth:
      return n.depth < ctx.rule.depth;
    default: {
      if (n.depth == 0) return true;
      PredicateKey k = n.clause.body.front().key();
      if (ctx.recursive.count(k)) return false;
      return !ctx.program.defines(k) || ctx.program.clauses_for(k).size() <= 1;
    }
  }
}

const char* status_name(NodeStatus s) {
  switch (s) {
    case NodeStatus::Internal:
      return "internal";
    case NodeStatus::Complete:
      return "complete";
    case NodeStatus::Failed:
      return "failed";
    default:
      return "incomplete";
  }
}

}  // namespace

Clause unfold_step(const Clause& c1, const Clause& c2, std::size_t i) {
  Constraint local;
  return resolve(c1, c2, i, local);
}

std::vector<std::size_t> PartialTree::frontier() const {
  std::vector<std::size_t> out;
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    std::size_t n = stack.back();
    stack.pop_back();
    const TreeNode& node = nodes[n];
    if (node.status == NodeStatus::Internal) {
      for (auto it = node.children.rbegin(); it != node.children.rend(); ++it) stack.push_back(*it);
    } else if (node.status != NodeStatus::Failed) {
      out.push_back(n);
    }
  }
  return out;
}

std::string PartialTree::dump() const {
  std::ostringstream os;
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    std::size_t n = stack.back();
    stack.pop_back();
    const TreeNode& node = nodes[n];
    os << std::string(2 * node.depth, ' ') << '[' << status_name(node.status) << "] "
       << render_clause(node.clause) << '\n';
    for (auto it = node.children.rbegin(); it != node.children.rend(); ++it) stack.push_back(*it);
  }
  return os.str();
}

PartialTree build_partial_tree(const ConstrainedFact& a, const DerivationContext& ctx) {
  PartialTree tree;
  TreeNode root;
  root.clause = Clause{a.atom, a.constraint, {a.atom}};
  if (!satisfiable(a.constraint)) {
    root.clause.constraint = Constraint::bottom();
    root.clause.body.clear();
  }
  tree.nodes.push_back(std::move(root));

  std::vector<std::size_t> work{0};
  while (!work.empty()) {
    std::size_t n = work.back();
    work.pop_back();
    TreeNode& node = tree.nodes[n];
    if (node.clause.constraint.is_false()) {
      node.status = NodeStatus::Failed;
      continue;
    }
    if (!should_unfold(node, ctx)) {
      node.status = node.clause.body.empty() ? NodeStatus::Complete : NodeStatus::Incomplete;
      continue;
    }
    node.status = NodeStatus::Internal;
    PredicateKey k = node.clause.body.front().key();
    std::vector<TreeNode> kids;
    if (ctx.program.defines(k)) {
      for (auto ci : ctx.program.clauses_for(k)) {
        TreeNode child;
        Constraint local;
        child.clause = resolve(node.clause, ctx.program.clauses()[ci], 0, local);
        child.depth = node.depth + 1;
        child.path = node.path;
        child.path.push_back(ci);
        child.path_constraint = node.path_constraint && local;
        kids.push_back(std::move(child));
      }
    }
    if (tree.nodes.size() + kids.size() > ctx.node_budget)
      throw BudgetExceeded("partial derivation tree exceeded the node budget of " +
                           std::to_string(ctx.node_budget));
    // `node` may dangle after the push_backs below.
    std::vector<std::size_t> ids;
    for (auto& kid : kids) {
      ids.push_back(tree.nodes.size());
      tree.nodes.push_back(std::move(kid));
    }
    tree.nodes[n].children = ids;
    for (auto it = ids.rbegin(); it != ids.rend(); ++it) work.push_back(*it);
  }
  return tree;
}

std::vector<Resultant> partial_eval_resultants(const ConstrainedFact& a,
                                               const DerivationContext& ctx) {
  PartialTree tree = build_partial_tree(a, ctx);
  std::vector<Resultant> out;
  for (auto n : tree.frontier()) {
    auto& node = tree.nodes[n];
    out.push_back({std::move(node.clause), std::move(node.path), std::move(node.path_constraint)});
  }
  return out;
}

std::vector<Clause> partial_eval(const ConstrainedFact& a, const DerivationContext& ctx) {
  std::vector<Clause> out;
  for (auto& r : partial_eval_resultants(a, ctx)) out.push_back(std::move(r.clause));
  return out;
}

std::vector<ConstrainedFact> collect(const std::vector<Clause>& clauses) {
  std::vector<ConstrainedFact> out;
  for (const auto& c : clauses) {
    if (c.constraint.is_false()) continue;
    for (const auto& b : c.body) {
      VarSet keep(b.args.begin(), b.args.end());
      ConstrainedFact f = ConstrainedFact{b, project(c.constraint, keep)}.positional();
      f.constraint = canonicalize(f.constraint).constraint();
      bool seen = false;
      for (const auto& o : out)
        if (o.key() == f.key() && equivalent(o.constraint, f.constraint)) {
          seen = true;
          break;
        }
      if (!seen) out.push_back(std::move(f));
    }
  }
  return out;
}

}  // namespace chcspec
