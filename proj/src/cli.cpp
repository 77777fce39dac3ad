#include "chcspec/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "chcspec/analysis.hpp"
#include "chcspec/oracle.hpp"
#include "chcspec/parser.hpp"
#include "chcspec/printer.hpp"
#include "chcspec/specializer.hpp"

namespace chcspec {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Program read_program(const std::string& path) {
  try {
    return parse_program(read_file(path));
  } catch (const ParseError& e) {
    throw InputError(path + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) +
                     ": " + e.what());
  }
}

// Writes to `path`, or to `fallback` when the path is empty or "-".
void write_output(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty() || path == "-") {
    fallback << text;
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InputError("cannot write " + path);
  os << text;
}

std::size_t node_budget() {
  const char* env = std::getenv("CHCSPEC_NODE_BUDGET");
  if (!env || !*env) return kDefaultNodeBudget;
  std::string s(env);
  if (s.find_first_not_of("0123456789") != std::string::npos || std::stoull(s) == 0)
    throw InputError("CHCSPEC_NODE_BUDGET must be a positive integer, got '" + s + "'");
  return std::stoull(s);
}

PredicateKey parse_key(const std::string& text) {
  auto slash = text.rfind('/');
  std::string arity = slash == std::string::npos ? "" : text.substr(slash + 1);
  if (slash == 0 || arity.empty() || arity.find_first_not_of("0123456789") != std::string::npos)
    throw InputError("bad predicate '" + text + "' (expected name/arity)");
  return {text.substr(0, slash), std::stoul(arity)};
}

std::string trace_text(const std::vector<TraceStep>& trace) {
  std::string out;
  for (const auto& step : trace) {
    out += "iteration " + std::to_string(step.iteration) + ":";
    if (step.added.empty()) out += " fixpoint";
    for (const auto& f : step.added) out += " " + render_fact(f);
    out += "\n";
  }
  return out;
}

std::string trace_json(const std::vector<TraceStep>& trace) {
  std::string out;
  for (const auto& step : trace) {
    nlohmann::json j;
    j["iter"] = step.iteration;
    j["added"] = nlohmann::json::array();
    for (const auto& f : step.added) j["added"].push_back(render_fact(f));
    out += j.dump() + "\n";
  }
  return out;
}

struct SpecializeArgs {
  std::string program, entry = "start.", entry_file, props, gen_props;
  std::string unfold = "branch-recursive", abstract = "recursive";
  std::string output, dot, trace, trace_json, tree;
  bool minimize = false, frontier = false, verbose = false, keep_unproductive = false;
};

void write_results(const SpecializeArgs& a, const Specialization& s,
                   const std::vector<ConstrainedFact>& s0, std::ostream& out) {
  Program result = a.minimize ? minimize_versions(s).program : s.program;
  write_output(a.output, render_program(result), out);
  if (!a.dot.empty()) {
    std::set<std::string> entries;
    for (const auto& v : s.table.entries())
      for (const auto& f : s0)
        if (v.from_s0 && v.original == f.key()) entries.insert(v.name);
    write_output(a.dot, emit_dot(pred_dep_graph(result, entries)), out);
  }
  if (!a.trace.empty()) write_output(a.trace, trace_text(s.fixpoint.trace), out);
  if (!a.trace_json.empty()) write_output(a.trace_json, trace_json(s.fixpoint.trace), out);
}

void log_warnings(const PropertySet& psi, std::ostream& err) {
  for (const auto& w : psi.warnings()) err << "warning: " << w << "\n";
}

int do_specialize(const SpecializeArgs& a, std::ostream& out, std::ostream& err) {
  Program p = read_program(a.program);
  std::string entry_text = a.entry_file.empty() ? a.entry : read_file(a.entry_file);
  std::vector<ConstrainedFact> s0 = parse_constrained_facts(entry_text);
  if (s0.empty()) throw InputError("no entry facts given");

  PropertySet psi;
  if (!a.props.empty()) {
    psi = PropertySet(parse_constrained_facts(read_file(a.props)));
  } else if (a.gen_props == "guards") {
    psi = guard_properties(p);
  } else if (a.gen_props.rfind("dim:", 0) == 0) {
    std::string d = a.gen_props.substr(4);
    if (d.empty() || d.find_first_not_of("0123456789") != std::string::npos)
      throw InputError("bad generator '" + a.gen_props + "'");
    psi = dimension_ladder(p, std::stoul(d));
  } else if (!a.gen_props.empty()) {
    throw InputError("unknown property generator '" + a.gen_props + "' (expected guards or dim:<d>)");
  } else {
    throw InputError("no properties given (use --props or --gen-props)");
  }
  log_warnings(psi, err);

  SpecializeOptions opts;
  opts.rule = UnfoldingRule::parse(a.unfold);
  if (a.abstract == "all")
    opts.scope = AbstractionScope::All;
  else if (a.abstract == "recursive")
    opts.scope = AbstractionScope::RecursiveOnly;
  else
    throw InputError("unknown abstraction scope '" + a.abstract + "' (expected all or recursive)");
  opts.node_budget = node_budget();
  opts.frontier = a.frontier;
  opts.prune_unproductive = !a.keep_unproductive;

  Specialization s = specialize(p, s0, psi, opts);
  if (a.verbose)
    err << "info: fixpoint after " << s.fixpoint.trace.size() << " iterations, "
        << s.fixpoint.facts.size() << " facts, " << s.program.size() << " clauses\n";
  if (!check_closedness(s.fixpoint.facts, p, psi, opts, s.fixpoint.recursive))
    throw InternalError("fixpoint is not closed");

  if (!a.tree.empty()) {
    DerivationContext ctx(p, opts.rule, s.fixpoint.recursive, opts.node_budget);
    std::string dump;
    for (const auto& f : s.fixpoint.facts.facts())
      dump += build_partial_tree(f, ctx).dump() + "\n";
    write_output(a.tree, dump, out);
  }
  write_results(a, s, s0, out);
  return kExitOk;
}

void add_specialize_flags(CLI::App* cmd, SpecializeArgs& a) {
  cmd->add_option("-o,--output", a.output, "Output program (default: stdout)");
  cmd->add_option("--unfold", a.unfold, "one-step | branch-recursive | depth:<k>");
  cmd->add_flag("--minimize", a.minimize, "Merge indistinguishable versions");
  cmd->add_option("--dot", a.dot, "Write the predicate dependency graph of the result");
  cmd->add_option("--trace", a.trace, "Write the iteration trace as text");
  cmd->add_option("--trace-json", a.trace_json, "Write the iteration trace as JSON lines");
  cmd->add_option("--tree", a.tree, "Write the partial derivation tree of every fact");
  cmd->add_flag("--frontier", a.frontier, "Only partially evaluate newly added facts");
  cmd->add_flag("--keep-unproductive", a.keep_unproductive,
                "Keep versions that have no finite derivation");
  cmd->add_flag("-v,--verbose", a.verbose, "Log progress and warnings to stderr");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Polyvariant specialisation of constrained Horn clauses", "chcspec"};
  app.require_subcommand(1);

  SpecializeArgs spec;
  auto* sp = app.add_subcommand("specialize", "Specialise a program for its entry facts");
  sp->add_option("-p,--program", spec.program, "CHC program")->required();
  sp->add_option("-e,--entry", spec.entry, "Entry facts, e.g. \"start.\"");
  sp->add_option("--entry-file", spec.entry_file, "File with entry facts");
  auto* props = sp->add_option("--props", spec.props, "Property file (constrained facts)");
  sp->add_option("--gen-props", spec.gen_props, "guards | dim:<d>")->excludes(props);
  sp->add_option("--abstract", spec.abstract, "all | recursive");
  add_specialize_flags(sp, spec);

  std::string graph_program, graph_out;
  std::vector<std::string> graph_entries;
  auto* gr = app.add_subcommand("graph", "Predicate dependency graph in DOT");
  gr->add_option("-p,--program", graph_program, "CHC program")->required();
  gr->add_option("--entry", graph_entries, "Predicate names to mark as entries");
  gr->add_option("-o,--output", graph_out, "Output file (default: stdout)");

  SpecializeArgs dim;
  dim.unfold = "one-step";
  std::string dim_entry, dim_mode = "atmost";
  long dim_bound = -1;
  auto* di = app.add_subcommand(
      "dim-instrument", "Add dimension arguments; with --bound also specialise for a dimension bound");
  di->add_option("-p,--program", dim.program, "CHC program (uninstrumented)")->required();
  di->add_option("--bound", dim_bound, "Dimension bound d")->check(CLI::NonNegativeNumber);
  di->add_option("--mode", dim_mode, "exact | atmost | above");
  di->add_option("--entry", dim_entry, "Entry predicate of the original program, name/arity");
  add_specialize_flags(di, dim);

  std::string left, right, grid_text = "-5..5";
  std::vector<std::string> entry_maps;
  std::size_t iters = 12;
  auto* oracle = app.add_subcommand("oracle", "Ground evaluation over an integer grid");
  oracle->require_subcommand(1);
  auto* cmp = oracle->add_subcommand("compare", "Compare entry predicates of two programs");
  cmp->add_option("first", left, "First program")->required();
  cmp->add_option("second", right, "Second program")->required();
  cmp->add_option("--entry", entry_maps, "p/arity or p/arity=q")->required();
  cmp->add_option("--grid", grid_text, "lo..hi (default -5..5)");
  cmp->add_option("--iters", iters, "Iteration bound (default 12)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const CLI::App* shown = &app;
    for (auto* sub : {sp, gr, di, cmp})
      if (sub->parsed()) shown = sub;
    err << shown->help();
    return kExitInputError;
  }

  try {
    if (sp->parsed()) return do_specialize(spec, out, err);

    if (gr->parsed()) {
      Program p = read_program(graph_program);
      std::set<std::string> entries(graph_entries.begin(), graph_entries.end());
      write_output(graph_out, emit_dot(pred_dep_graph(p, entries)), out);
      return kExitOk;
    }

    if (di->parsed()) {
      Program p = read_program(dim.program);
      Program inst = dimension_instrument(p);
      if (dim_bound < 0) {
        write_output(dim.output, render_program(inst), out);
        return kExitOk;
      }
      if (dim_entry.empty()) throw InputError("--bound needs --entry name/arity");
      PredicateKey key = parse_key(dim_entry);
      key.arity += 1;
      auto setup = dimension_bound_setup(inst, key, parse_dimension_mode(dim_mode),
                                         static_cast<std::size_t>(dim_bound));
      log_warnings(setup.properties, err);
      SpecializeOptions opts;
      opts.rule = UnfoldingRule::parse(dim.unfold);
      opts.scope = AbstractionScope::All;
      opts.node_budget = node_budget();
      opts.frontier = dim.frontier;
      opts.prune_unproductive = !dim.keep_unproductive;
      Specialization s = specialize(inst, setup.entry, setup.properties, opts);
      write_results(dim, s, setup.entry, out);
      return kExitOk;
    }

    if (cmp->parsed()) {
      Program a = read_program(left), b = read_program(right);
      std::map<PredicateKey, std::string> entries;
      for (const auto& m : entry_maps) {
        auto eq = m.find('=');
        PredicateKey key = parse_key(m.substr(0, eq));
        entries[key] = eq == std::string::npos ? key.name : m.substr(eq + 1);
      }
      GridComparison c = equivalent_on_grid(a, b, entries, parse_grid(grid_text, iters));
      if (!c.converged)
        err << "warning: evaluation did not converge within " << iters << " iterations\n";
      if (c.equivalent) {
        out << "equivalent\n";
        return kExitOk;
      }
      out << "different: " << c.witness << "\n";
      return kExitNotEquivalent;
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInputError;
}

}  // namespace chcspec
