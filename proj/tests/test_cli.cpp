#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "chcspec/cli.hpp"
#include "chcspec/parser.hpp"
#include "support.hpp"

using namespace chcspec;
using namespace testsupport;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(CHCSPEC_TEST_DATA) + "/" + name; }

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("chcspec_test_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> golden_args() {
  return {"specialize", "-p", data("nested_loop.chc"), "-e", "start.", "--props",
          data("nested_loop.props"), "--unfold", "branch-recursive", "--abstract", "recursive"};
}

}  // namespace

TEST_CASE("usage errors exit with 1") {
  Result r = invoke({"specialize"});
  CHECK(r.code == kExitInputError);
  CHECK(r.err.find("--program") != std::string::npos);
  CHECK(invoke({}).code == kExitInputError);
  CHECK(invoke({"frobnicate"}).code == kExitInputError);
  CHECK(invoke({"specialize", "-p", data("nested_loop.chc"), "--bogus"}).code == kExitInputError);
}

TEST_CASE("help exits with 0") {
  Result r = invoke({"--help"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("specialize") != std::string::npos);
}

TEST_CASE("input errors exit with 1") {
  CHECK(invoke({"specialize", "-p", data("missing.chc"), "--props", data("nested_loop.props")}).code ==
        kExitInputError);
  CHECK(invoke({"specialize", "-p", data("nested_loop.chc")}).code == kExitInputError);
  CHECK(invoke({"specialize", "-p", data("nested_loop.chc"), "--gen-props", "everything"}).code ==
        kExitInputError);
  CHECK(invoke({"specialize", "-p", data("nested_loop.chc"), "--props", data("nested_loop.props"),
                "--gen-props", "guards"})
            .code == kExitInputError);
  CHECK(invoke({"specialize", "-p", data("nested_loop.chc"), "--props", data("nested_loop.props"),
                "--unfold", "sideways"})
            .code == kExitInputError);
  Result bad = invoke({"specialize", "-p", data("nested_loop.chc"), "-e", "start :- .", "--props",
                       data("nested_loop.props")});
  CHECK(bad.code == kExitInputError);
  CHECK(bad.err.find("error") != std::string::npos);
}

TEST_CASE("golden specialisation through the command line") {
  std::string path = temp_path("golden.chc");
  auto args = golden_args();
  args.insert(args.end(), {"-o", path});
  Result r = invoke(args);
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.empty());
  Program got = parse_program(slurp(path));
  CHECK(got.size() == 9);
  std::string why;
  CHECK_MESSAGE(same_up_to_renaming(got, load_program("nested_loop_specialised.chc"), &why), why);

  Result again = invoke(golden_args());
  CHECK(again.out == slurp(path));
  std::filesystem::remove(path);

  Result cmp = invoke({"oracle", "compare", data("nested_loop.chc"), data("nested_loop_specialised.chc"), "--entry",
                       "start/0", "--grid", "-3..3"});
  CHECK(cmp.code == kExitOk);
  CHECK(cmp.out == "equivalent\n");
}

TEST_CASE("json trace") {
  auto args = golden_args();
  std::string path = temp_path("trace.jsonl");
  args.insert(args.end(), {"--trace-json", path, "-o", temp_path("unused.chc")});
  REQUIRE(invoke(args).code == kExitOk);
  std::istringstream lines(slurp(path));
  std::vector<nlohmann::json> steps;
  for (std::string line; std::getline(lines, line);) steps.push_back(nlohmann::json::parse(line));
  REQUIRE(steps.size() == 5);
  CHECK(steps[0]["iter"] == 1);
  CHECK(steps[0]["added"] == nlohmann::json::array({"while0(A,B,C)."}));
  CHECK(steps[2]["added"].size() == 2);
  CHECK(steps[4]["added"].empty());
  std::filesystem::remove(path);
  std::filesystem::remove(temp_path("unused.chc"));
}

TEST_CASE("text trace, dot and minimise") {
  auto args = golden_args();
  args.insert(args.end(), {"--trace", "-", "--dot", "-", "--minimize"});
  Result r = invoke(args);
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("iteration 5: fixpoint") != std::string::npos);
  CHECK(r.out.find("digraph g {") != std::string::npos);
  CHECK(r.out.find("\"start\" [peripheries=2];") != std::string::npos);
}

TEST_CASE("node budget from the environment") {
  auto args = golden_args();
  args[8] = "depth:30";
  setenv("CHCSPEC_NODE_BUDGET", "5", 1);
  Result r = invoke(args);
  CHECK(r.code == kExitInputError);
  setenv("CHCSPEC_NODE_BUDGET", "lots", 1);
  CHECK(invoke(golden_args()).code == kExitInputError);
  unsetenv("CHCSPEC_NODE_BUDGET");
  CHECK(invoke(golden_args()).code == kExitOk);
}

TEST_CASE("non-negatable properties are reported") {
  std::string props = temp_path("pair.props");
  std::ofstream(props) << "while0(A,B,C) :- A>0, B>0.\n";
  Result r = invoke({"specialize", "-p", data("nested_loop.chc"), "--props", props});
  CHECK(r.code == kExitOk);
  CHECK(r.err.find("warning") != std::string::npos);
  std::filesystem::remove(props);
}

TEST_CASE("graph subcommand") {
  Result r = invoke({"graph", "-p", data("nested_loop.chc"), "--entry", "start"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.rfind("digraph g {\n", 0) == 0);
  CHECK(r.out.find("\"while0\" -> \"if0\";") != std::string::npos);
}

TEST_CASE("dim-instrument subcommand") {
  Result plain = invoke({"dim-instrument", "-p", data("fib.chc")});
  REQUIRE(plain.code == kExitOk);
  CHECK(parse_program(plain.out).size() == 5);

  Result bounded = invoke({"dim-instrument", "-p", data("fib.chc"), "--bound", "2", "--mode", "atmost",
                           "--entry", "false/0"});
  REQUIRE(bounded.code == kExitOk);
  Program p = parse_program(bounded.out);
  std::size_t fibs = 0;
  for (const auto& k : p.predicates()) fibs += k.name.rfind("fib", 0) == 0;
  // Non-negative body dimensions let rho also negate C=<0, which adds the
  // (0,2] and (0,1] versions on top of C=<2, C=<1 and C=<0.
  CHECK(fibs == 5);

  CHECK(invoke({"dim-instrument", "-p", data("fib.chc"), "--bound", "2"}).code == kExitInputError);
  CHECK(invoke({"dim-instrument", "-p", data("fib.chc"), "--bound", "2", "--entry", "false"}).code ==
        kExitInputError);
}

TEST_CASE("oracle finds differences") {
  std::string path = temp_path("broken.chc");
  std::ofstream(path) << "start :- while0(X,Y,M).\nwhile0(X,Y,M) :- X=<0.\n";
  Result r = invoke({"oracle", "compare", data("nested_loop.chc"), path, "--entry", "while0/3", "--grid",
                     "-2..2"});
  CHECK(r.code == kExitNotEquivalent);
  CHECK(r.out.rfind("different: while0(", 0) == 0);
  CHECK(invoke({"oracle", "compare", data("nested_loop.chc"), path, "--entry", "start/0=start",
                "--grid", "-2..2"})
            .code == kExitOk);
  CHECK(invoke({"oracle", "compare", data("nested_loop.chc"), path, "--entry", "start"}).code ==
        kExitInputError);
  std::filesystem::remove(path);
}
