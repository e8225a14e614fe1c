#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <json.hpp>

#ifndef FIK_CLI_PATH
#define FIK_CLI_PATH "fik"
#endif
#ifndef FIK_DATA_DIR
#define FIK_DATA_DIR "data"
#endif

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_raw(const std::string& cmd) {
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

RunResult run(const std::string& args) {
  return run_raw("FIK_COLOR=never " + std::string(FIK_CLI_PATH) + " " + args);
}

std::string first_line(const std::string& s) {
  return s.substr(0, s.find('\n'));
}

std::string data(const std::string& name) { return std::string(FIK_DATA_DIR) + "/" + name; }

void write_tmp(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  REQUIRE(out.good());
  out << content;
}

}  // namespace

TEST_CASE("prove: exit codes and the versioned first line") {
  auto r = run("prove 'top' 2>/dev/null");
  CHECK(r.exit_code == 0);
  CHECK(first_line(r.out) == "PROVABLE");

  r = run("prove '[](p \\/ q) -> ((<>p -> []q) -> []q)' 2>/dev/null");
  CHECK(r.exit_code == 0);
  CHECK(first_line(r.out) == "PROVABLE");

  r = run("prove '(<>p -> []q) -> [](p -> q)' 2>/dev/null");
  CHECK(r.exit_code == 1);
  CHECK(first_line(r.out) == "UNPROVABLE");
  CHECK(r.out.find("countermodel-worlds: 4") != std::string::npos);

  r = run("prove 'p -> (' 2>/dev/null");
  CHECK(r.exit_code == 2);

  r = run("prove '(~[]bot -> []bot) -> []bot' --budget 2 2>/dev/null");
  CHECK(r.exit_code == 3);
}

TEST_CASE("prove: artifacts are written on request") {
  std::string model = "/tmp/fik_test_model.json";
  std::string dot = "/tmp/fik_test_model.dot";
  std::string deriv = "/tmp/fik_test_deriv.txt";
  std::remove(model.c_str());
  std::remove(dot.c_str());
  std::remove(deriv.c_str());

  auto r = run("prove '~~[]~p -> []~p' --model " + model + " --dot " + dot +
               " --derivation " + deriv + " 2>/dev/null");
  CHECK(r.exit_code == 1);

  std::ifstream m(model);
  REQUIRE(m.good());
  auto doc = nlohmann::json::parse(m);
  CHECK(doc.at("worlds").size() == 7);
  CHECK(doc.at("val").size() == 1);

  std::ifstream d(dot);
  REQUIRE(d.good());
  std::string dtext((std::istreambuf_iterator<char>(d)), std::istreambuf_iterator<char>());
  CHECK(dtext.find("digraph") != std::string::npos);

  std::ifstream dv(deriv);
  REQUIRE(dv.good());
  std::string dvtext((std::istreambuf_iterator<char>(dv)), std::istreambuf_iterator<char>());
  CHECK(dvtext.find("[saturated]") != std::string::npos);

  // the emitted countermodel feeds straight back into the model checker
  r = run("check-model " + model + " '~~[]~p -> []~p' x0 2>/dev/null");
  CHECK(r.exit_code == 1);
  CHECK(first_line(r.out) == "unforced");
  r = run("check-model " + model + " '~~[]~p' x0 2>/dev/null");
  CHECK(r.exit_code == 0);
  CHECK(first_line(r.out) == "forced");
}

TEST_CASE("prove: json output") {
  auto r = run("prove '<>(p \\/ q) -> <>p \\/ <>q' --format json 2>/dev/null");
  CHECK(r.exit_code == 0);
  auto doc = nlohmann::json::parse(r.out);
  CHECK(doc.at("version") == 1);
  CHECK(doc.at("result") == "PROVABLE");
  CHECK(doc.at("stats").contains("rule_applications"));

  r = run("prove '[]bot' --format json 2>/dev/null");
  CHECK(r.exit_code == 1);
  doc = nlohmann::json::parse(r.out);
  CHECK(doc.at("result") == "UNPROVABLE");
  CHECK(doc.at("countermodel").at("worlds").size() >= 1);

  std::string deriv = "/tmp/fik_test_deriv.json";
  std::remove(deriv.c_str());
  r = run("prove 'p & q -> q' --format json --derivation " + deriv + " 2>/dev/null");
  CHECK(r.exit_code == 0);
  std::ifstream d(deriv);
  REQUIRE(d.good());
  auto tree = nlohmann::json::parse(d);
  CHECK(tree.at("status") == "internal");
  CHECK(tree.at("children").size() >= 1);
}

TEST_CASE("prove: formula from @file and stdin") {
  std::string path = "/tmp/fik_test_formula.txt";
  write_tmp(path, "[](p -> q) -> ([]p -> []q)\n");
  auto r = run("prove @" + path + " 2>/dev/null");
  CHECK(r.exit_code == 0);
  CHECK(first_line(r.out) == "PROVABLE");

  r = run_raw("echo 'top' | FIK_COLOR=never " + std::string(FIK_CLI_PATH) +
              " prove 2>/dev/null");
  CHECK(r.exit_code == 0);
  CHECK(first_line(r.out) == "PROVABLE");
}

TEST_CASE("check-model: the four-world fixture") {
  auto r = run("check-model " + data("appendix_model1.json") + " '[]p' c 2>/dev/null");
  CHECK(r.exit_code == 0);
  CHECK(first_line(r.out) == "forced");

  r = run("check-model " + data("appendix_model1.json") + " '[]p' a 2>/dev/null");
  CHECK(r.exit_code == 1);
  CHECK(first_line(r.out) == "unforced");

  r = run("check-model " + data("appendix_model2.json") + " '<>p' c 2>/dev/null");
  CHECK(r.exit_code == 0);
  r = run("check-model " + data("appendix_model2.json") + " '<>p' a 2>/dev/null");
  CHECK(r.exit_code == 1);
}

TEST_CASE("check-model: validation gates the query") {
  std::string path = "/tmp/fik_test_badmodel.json";
  write_tmp(path, R"({"worlds": ["x","y","z"],
                      "leq": [["x","x"],["y","y"],["z","z"],["z","x"]],
                      "r": [["z","y"]], "val": {}})");
  auto r = run("check-model " + path + " 'p' x 2>/dev/null");
  CHECK(r.exit_code == 2);
  CHECK(r.out.find("forward confluence") != std::string::npos);

  r = run("check-model " + data("appendix_model1.json") + " 'p' nowhere 2>/dev/null");
  CHECK(r.exit_code == 2);
}

TEST_CASE("check-model: reflexive closure flag") {
  auto r = run("check-model " + data("appendix_model1_bare.json") + " '[]p' c 2>/dev/null");
  CHECK(r.exit_code == 2);
  r = run("check-model " + data("appendix_model1_bare.json") + " '[]p' c --close-leq 2>/dev/null");
  CHECK(r.exit_code == 0);
  CHECK(first_line(r.out) == "forced");
}

TEST_CASE("oracle") {
  auto r = run("oracle '[]bot' -n 1 2>/dev/null");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("countermodel found") != std::string::npos);

  r = run("oracle 'top' -n 3 2>/dev/null");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("none up to 3") != std::string::npos);

  r = run("oracle '(<>p -> []q) -> [](p -> q)' -n 4 2>/dev/null");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("countermodel found") != std::string::npos);

  r = run("oracle 'p' -n 9 2>/dev/null");
  CHECK(r.exit_code == 2);
}

TEST_CASE("bench: shipped corpus meets its expectations") {
  auto r = run("bench " + data("paper.fik") + " 2>/dev/null");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("unprovable") != std::string::npos);
  CHECK(r.out.find("NO") == std::string::npos);
}

TEST_CASE("bench: verdicts are independent of the concurrency level") {
  auto serial = run("bench " + data("paper.fik") + " --jobs 1 2>/dev/null");
  auto parallel = run("bench " + data("paper.fik") + " --jobs 4 2>/dev/null");
  CHECK(serial.exit_code == 0);
  CHECK(parallel.exit_code == 0);
  // timing columns differ between runs; verdict columns must not
  auto strip_timing = [](const std::string& s) {
    std::string out;
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line)) {
      auto pos = line.find_last_of(' ');
      out += line.substr(0, pos) + "\n";
    }
    return out;
  };
  CHECK(strip_timing(serial.out) == strip_timing(parallel.out));
}

TEST_CASE("bench: failures and malformed corpora") {
  std::string bad = "/tmp/fik_test_bad_corpus.fik";
  write_tmp(bad, "top # expect: unprovable\n");
  auto r = run("bench " + bad + " 2>&1");
  CHECK(r.exit_code == 1);
  CHECK(r.out.find("line 1") != std::string::npos);

  std::string empty = "/tmp/fik_test_empty_corpus.fik";
  write_tmp(empty, "# nothing here\n\n");
  r = run("bench " + empty + " 2>/dev/null");
  CHECK(r.exit_code == 0);

  std::string malformed = "/tmp/fik_test_malformed_corpus.fik";
  write_tmp(malformed, "top\n");
  r = run("bench " + malformed + " 2>/dev/null");
  CHECK(r.exit_code == 2);
}
