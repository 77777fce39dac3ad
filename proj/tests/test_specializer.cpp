#include <doctest.h>

#include "chcspec/constraints.hpp"
#include "chcspec/oracle.hpp"
#include "chcspec/parser.hpp"
#include "chcspec/printer.hpp"
#include "chcspec/specializer.hpp"
#include "support.hpp"

using namespace chcspec;
using namespace testsupport;

namespace {

SpecializeOptions options(UnfoldingRule rule, AbstractionScope scope) {
  SpecializeOptions o;
  o.rule = rule;
  o.scope = scope;
  return o;
}

SpecializeOptions golden_options() {
  return options(UnfoldingRule::branch_or_recursive(), AbstractionScope::RecursiveOnly);
}

std::string rendered(const std::vector<ConstrainedFact>& fs) {
  std::string out;
  for (const auto& f : fs) out += render_fact(f) + "\n";
  return out;
}

}  // namespace

TEST_CASE("fact set membership is by equivalence") {
  FactSet s;
  CHECK(s.add(facts("p(A) :- A>=1.")[0]));
  CHECK_FALSE(s.add(facts("p(A) :- 2*A>=2.")[0]));
  CHECK_FALSE(s.add(facts("p(A) :- A>1, A<1.")[0]));
  CHECK(s.add(facts("q(A) :- A>=1.")[0]));
  CHECK(s.size() == 2);
  CHECK(s.contains(facts("p(A) :- A>=1, A>=0.")[0]));
  CHECK(s.covers(facts("p(A) :- A>=4.")[0]));
  CHECK_FALSE(s.covers(facts("p(A) :- A>=0.")[0]));
}

TEST_CASE("golden trace") {
  FixpointResult fix = fixpoint_facts(load_program("nested_loop.chc"), facts("start."),
                                      load_props("nested_loop.props"), golden_options());
  REQUIRE(fix.trace.size() == 5);
  CHECK(rendered(fix.trace[0].added) == "while0(A,B,C).\n");
  CHECK(rendered(fix.trace[1].added) == "if0(A,B,C) :- A>0.\n");
  CHECK(rendered(fix.trace[2].added) == "while0(A,B,C) :- A>0.\nwhile0(A,B,C) :- B>=C.\n");
  CHECK(rendered(fix.trace[3].added) == "if0(A,B,C) :- A>0, B>=C.\n");
  CHECK(fix.trace[4].added.empty());
  CHECK(fix.facts.size() == 6);
  CHECK(fix.initial == 1);
  CHECK(fix.recursive == std::set<PredicateKey>{{"while0", 3}});
}

TEST_CASE("the trace is monotone") {
  Program p = load_program("precondition.chc");
  auto opts = options(UnfoldingRule::one_step(), AbstractionScope::RecursiveOnly);
  FixpointResult fix = fixpoint_facts(p, facts("false."), load_props("precondition.props"), opts);
  std::size_t seen = fix.initial;
  for (const auto& step : fix.trace) seen += step.added.size();
  CHECK(seen == fix.facts.size());
  std::size_t init = 0;
  for (const auto& f : fix.facts.facts()) init += f.key() == PredicateKey{"init", 2};
  CHECK(init >= 3);
}

TEST_CASE("a fact without clauses is its own fixpoint") {
  FixpointResult fix = fixpoint_facts(load_program("nested_loop.chc"), facts("other(A) :- A>0."),
                                      PropertySet{}, golden_options());
  CHECK(fix.facts.size() == 1);
}

TEST_CASE("frontier evaluation reaches the same fixpoint") {
  for (const char* props : {"nested_loop.props", "nested_loop_enlarged.props"}) {
    Program p = load_program("nested_loop.chc");
    SpecializeOptions all = golden_options(), frontier = golden_options();
    frontier.frontier = true;
    FixpointResult a = fixpoint_facts(p, facts("start."), load_props(props), all);
    FixpointResult b = fixpoint_facts(p, facts("start."), load_props(props), frontier);
    CHECK(rendered(a.facts.facts()) == rendered(b.facts.facts()));
  }
}

TEST_CASE("iteration budget") {
  // The golden run needs five iterations.
  SpecializeOptions opts = golden_options();
  opts.max_iterations = 3;
  CHECK_THROWS_AS(fixpoint_facts(load_program("nested_loop.chc"), facts("start."),
                                 load_props("nested_loop.props"), opts),
                  BudgetExceeded);
  opts.max_iterations = 5;
  CHECK_NOTHROW(fixpoint_facts(load_program("nested_loop.chc"), facts("start."),
                               load_props("nested_loop.props"), opts));
}

TEST_CASE("closedness") {
  Program p = load_program("nested_loop.chc");
  PropertySet psi = load_props("nested_loop.props");
  auto opts = golden_options();
  FixpointResult fix = fixpoint_facts(p, facts("start."), psi, opts);
  CHECK(check_closedness(fix.facts, p, psi, opts, fix.recursive));
  CHECK(covered(fix.facts, p, opts, fix.recursive));

  FactSet only_start(facts("start."));
  CHECK_FALSE(check_closedness(only_start, p, psi, opts, fix.recursive));
  CHECK_FALSE(covered(only_start, p, opts, fix.recursive));

  // Dropping an S0 fact keeps the rest closed; dropping any other does not.
  for (std::size_t i = fix.initial; i < fix.facts.size(); ++i) {
    FactSet smaller = fix.facts;
    smaller.erase(i);
    CHECK_FALSE(check_closedness(smaller, p, psi, opts, fix.recursive));
  }
}

TEST_CASE("definitions") {
  FixpointResult fix = fixpoint_facts(load_program("nested_loop.chc"), facts("start."),
                                      load_props("nested_loop.props"), golden_options());
  VersionTable t = make_definitions(fix.facts, fix.initial);
  REQUIRE(t.size() == 6);
  std::vector<std::string> names;
  for (const auto& v : t.entries()) names.push_back(v.name);
  CHECK(names == std::vector<std::string>{"start", "while0__v2", "if0__v3", "while0__v4",
                                          "while0__v5", "if0__v6"});
  CHECK(t.entries()[0].from_s0);
  CHECK_FALSE(t.entries()[1].from_s0);
  CHECK(t.versions_of({"while0", 3}) == std::vector<std::size_t>{1, 3, 4});

  CHECK(make_definitions(FactSet{}, 0).size() == 0);

  // Two S0 facts of one predicate both keep version names.
  FactSet two(facts("p(A) :- A>0.\np(A) :- A=<0."));
  VersionTable tt = make_definitions(two, 2);
  CHECK(tt.entries()[0].name == "p__v1");
  CHECK(tt.entries()[1].name == "p__v2");
}

TEST_CASE("golden specialisation") {
  Program p = load_program("nested_loop.chc");
  Specialization s = specialize(p, facts("start."), load_props("nested_loop.props"), golden_options());
  std::string why;
  CHECK_MESSAGE(same_up_to_renaming(s.program, load_program("nested_loop_specialised.chc"), &why), why);
  CHECK(s.program.size() == 9);
  CHECK(s.program.predicates().size() == 6);
  CHECK(s.origins.size() == s.program.size());
  CHECK(render_program(s.program).find(
            "if0__v6(A,B,C) :- A>0, B>=C, D=A-1, while0__v5(D,B,C).") != std::string::npos);
}

TEST_CASE("specialisation is deterministic") {
  Program p = load_program("nested_loop.chc");
  PropertySet psi = load_props("nested_loop_enlarged.props");
  std::string a = render_program(specialize(p, facts("start."), psi, golden_options()).program);
  std::string b = render_program(
      specialize(parse_program(render_program(p)), facts("start."), psi, golden_options()).program);
  CHECK(a == b);
}

TEST_CASE("a single version is renamed back") {
  Program p = parse_program("p(X) :- X=0.");
  Specialization s = specialize(p, facts("p(A)."), PropertySet{}, golden_options());
  CHECK(render_program(s.program) == "p(A) :- A=0.\n");
}

TEST_CASE("a false entry gives the empty program") {
  Specialization s = specialize(load_program("nested_loop.chc"), facts("start :- 1=<0."),
                                load_props("nested_loop.props"), golden_options());
  CHECK(s.program.empty());
}

TEST_CASE("reduced properties return the original clauses") {
  Program p = load_program("nested_loop.chc");
  Specialization s = specialize(p, facts("start."), load_props("nested_loop_reduced.props"),
                                options(UnfoldingRule::branch_or_recursive(), AbstractionScope::All));
  std::string why;
  CHECK_MESSAGE(same_up_to_renaming(s.program, p, &why), why);
}

TEST_CASE("specialisation preserves answers on the grid") {
  GridSpec g{-3, 3, 12};
  Program b = load_program("nested_loop.chc");
  Specialization sb = specialize(b, facts("start."), load_props("nested_loop.props"), golden_options());
  CHECK(equivalent_on_grid(b, sb.program, {{{"start", 0}, "start"}}, g).equivalent);

  Program a = load_program("power_loop.chc");
  Specialization sa = specialize(a, facts("start."), load_props("power_loop.props"), golden_options());
  GridSpec g3{0, 3, 12};
  CHECK(equivalent_on_grid(a, sa.program, {{{"start", 0}, "start"}}, g3).equivalent);
}

TEST_CASE("unproductive versions are pruned") {
  Program p = load_program("fib_dim.chc");
  auto opts = options(UnfoldingRule::one_step(), AbstractionScope::All);
  PropertySet psi = load_props("fib_dim.props");
  auto entry = facts("false(A) :- A=<2.");
  Specialization kept = [&] {
    auto o = opts;
    o.prune_unproductive = false;
    return specialize(p, entry, psi, o);
  }();
  Specialization pruned = specialize(p, entry, psi, opts);
  CHECK(pruned.program.size() < kept.program.size());
  CHECK(pruned.origins.size() == pruned.program.size());
  std::size_t fibs = 0;
  for (const auto& k : pruned.program.predicates()) fibs += k.name.rfind("fib", 0) == 0;
  CHECK(fibs == 3);
  GridSpec g{0, 6, 12};
  CHECK(equivalent_on_grid(kept.program, pruned.program, {{{"false", 1}, "false"}}, g).equivalent);
}
