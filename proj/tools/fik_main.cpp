#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "fik/hilbert.hpp"
#include "fik/model_io.hpp"
#include "fik/prover.hpp"

namespace {

using namespace fik;

constexpr int kOutputVersion = 1;

enum ExitCode { kOk = 0, kNegative = 1, kUsage = 2, kBudget = 3 };

bool use_color() {
  const char* env = std::getenv("FIK_COLOR");
  if (env && std::string(env) == "never") return false;
  return isatty(fileno(stdout));
}

std::string verdict_line(bool provable) {
  const char* word = provable ? "PROVABLE" : "UNPROVABLE";
  if (!use_color()) return word;
  return provable ? std::string("\033[32m") + word + "\033[0m"
                  : std::string("\033[31m") + word + "\033[0m";
}

std::string read_text_arg(const std::string& arg) {
  if (arg.empty() || arg == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  if (arg.front() == '@') {
    std::ifstream in(arg.substr(1));
    if (!in) throw std::runtime_error("cannot open file: " + arg.substr(1));
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }
  return arg;
}

Formula parse_or_exit(const std::string& text) {
  try {
    return parse_formula(text);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "; expected ";
    for (std::size_t i = 0; i < e.expected.size(); ++i) {
      if (i) std::cerr << ", ";
      std::cerr << e.expected[i];
    }
    std::cerr << "\n";
    std::exit(kUsage);
  }
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

struct ProveArtifacts {
  std::string derivation_path;
  std::string model_path;
  std::string dot_path;
  std::string format = "human";
  bool elide_closure = false;
};

int run_prove(const std::string& formula_arg, std::uint64_t budget,
              const ProveArtifacts& art) {
  Formula goal = parse_or_exit(read_text_arg(formula_arg));
  ProveOptions opts;
  opts.step_budget = budget;
  auto t0 = std::chrono::steady_clock::now();
  ProofResult res;
  try {
    res = prove(goal, opts);
  } catch (const BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBudget;
  }
  double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                  .count();

  if (!art.derivation_path.empty()) {
    write_file(art.derivation_path, art.format == "json"
                                        ? derivation_to_json(*res.derivation)
                                        : render_derivation(*res.derivation));
  }
  if (res.countermodel) {
    if (!art.model_path.empty())
      write_file(art.model_path, annotated_model_json(*res.countermodel) + "\n");
    if (!art.dot_path.empty())
      write_file(art.dot_path, model_to_dot(*res.countermodel, art.elide_closure));
  }

  if (art.format == "json") {
    nlohmann::json j;
    j["version"] = kOutputVersion;
    j["formula"] = render(goal);
    j["result"] = res.provable ? "PROVABLE" : "UNPROVABLE";
    j["stats"] = {{"rule_applications", res.stats.rule_applications},
                  {"blocking_events", res.stats.blocking_events},
                  {"max_sequent_weight", res.stats.max_sequent_weight},
                  {"elapsed_ms", ms}};
    if (res.countermodel) {
      j["countermodel"] = nlohmann::json::parse(annotated_model_json(*res.countermodel));
    }
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << verdict_line(res.provable) << "\n";
    std::cout << "  rule-applications: " << res.stats.rule_applications << "\n";
    std::cout << "  max-sequent-weight: " << res.stats.max_sequent_weight << "\n";
    std::cout << "  elapsed-ms: " << ms << "\n";
    if (res.countermodel) {
      const auto& cm = *res.countermodel;
      std::cout << "  countermodel-worlds: " << cm.model.world_count() << "\n";
      std::cout << "  refuted-at: " << cm.model.worlds[cm.root_world] << "\n";
    }
  }
  return res.provable ? kOk : kNegative;
}

int run_check_model(const std::string& model_path, const std::string& formula_arg,
                    const std::string& world, bool close_leq) {
  Model m;
  try {
    m = load_model_file(model_path, close_leq);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  auto violations = validate_model(m);
  if (!violations.empty()) {
    std::cout << "invalid model:\n";
    for (const auto& v : violations) std::cout << "  " << v.describe(m) << "\n";
    return kUsage;
  }
  Formula f = parse_or_exit(read_text_arg(formula_arg));
  int w = m.world_index(world);
  if (w < 0) {
    std::cerr << "error: unknown world '" << world << "'\n";
    return kUsage;
  }
  bool ok = forces(m, w, f);
  std::cout << (ok ? "forced" : "unforced") << "\n";
  return ok ? kOk : kNegative;
}

int run_oracle(const std::string& formula_arg, int max_worlds, int cap) {
  if (max_worlds < 1 || max_worlds > cap) {
    std::cerr << "error: world bound must be between 1 and " << cap << "\n";
    return kUsage;
  }
  Formula f = parse_or_exit(read_text_arg(formula_arg));
  auto found = find_countermodel_bruteforce(f, max_worlds);
  if (found) {
    std::cout << "countermodel found (" << found->first.world_count() << " worlds, refuted at "
              << found->first.worlds[found->second] << "):\n";
    std::cout << model_to_json(found->first).dump(2) << "\n";
  } else {
    std::cout << "none up to " << max_worlds
              << " worlds (not a validity claim: the bound is exhaustive, not complete)\n";
  }
  return kOk;
}

struct BenchRow {
  int line_no = 0;
  std::string formula_text;
  bool expect_provable = false;
  bool got_provable = false;
  bool ok = false;
  std::uint64_t rule_applications = 0;
  std::size_t max_weight = 0;
  double ms = 0;
  std::string error;
};

int run_bench(const std::string& corpus_path, int jobs, std::uint64_t budget,
              const std::string& format) {
  std::ifstream in(corpus_path);
  if (!in) {
    std::cerr << "error: cannot open corpus: " << corpus_path << "\n";
    return kUsage;
  }
  std::vector<BenchRow> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = line;
    auto strip = [](std::string s) {
      std::size_t b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      std::size_t e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    t = strip(t);
    if (t.empty() || t.front() == '#') continue;
    std::size_t hash = t.find('#');
    if (hash == std::string::npos) {
      std::cerr << "error: corpus line " << line_no << ": missing '# expect:' annotation\n";
      return kUsage;
    }
    std::string formula_text = strip(t.substr(0, hash));
    std::string annot = strip(t.substr(hash + 1));
    BenchRow row;
    row.line_no = line_no;
    row.formula_text = formula_text;
    if (annot == "expect: provable") {
      row.expect_provable = true;
    } else if (annot == "expect: unprovable") {
      row.expect_provable = false;
    } else {
      std::cerr << "error: corpus line " << line_no
                << ": annotation must be 'expect: provable' or 'expect: unprovable'\n";
      return kUsage;
    }
    rows.push_back(std::move(row));
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= rows.size()) return;
      BenchRow& row = rows[i];
      try {
        Formula f = parse_formula(row.formula_text);
        ProveOptions opts;
        opts.step_budget = budget;
        auto t0 = std::chrono::steady_clock::now();
        ProofResult r = prove(f, opts);
        row.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                           t0)
                     .count();
        row.got_provable = r.provable;
        row.rule_applications = r.stats.rule_applications;
        row.max_weight = r.stats.max_sequent_weight;
        row.ok = row.got_provable == row.expect_provable;
      } catch (const std::exception& e) {
        row.error = e.what();
        row.ok = false;
      }
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  bool all_ok = true;
  if (format == "json") {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& row : rows) {
      all_ok = all_ok && row.ok;
      arr.push_back({{"line", row.line_no},
                     {"formula", row.formula_text},
                     {"expect", row.expect_provable ? "provable" : "unprovable"},
                     {"verdict", row.error.empty()
                                     ? (row.got_provable ? "provable" : "unprovable")
                                     : "error"},
                     {"ok", row.ok},
                     {"rule_applications", row.rule_applications},
                     {"max_sequent_weight", row.max_weight},
                     {"elapsed_ms", row.ms}});
    }
    nlohmann::json j = {{"version", kOutputVersion}, {"rows", arr}, {"all_ok", all_ok}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::printf("%-5s %-44s %-11s %-11s %-5s %10s %8s\n", "line", "formula", "expect", "got",
                "ok", "steps", "ms");
    for (const auto& row : rows) {
      all_ok = all_ok && row.ok;
      std::string shown = row.formula_text.size() > 42
                              ? row.formula_text.substr(0, 39) + "..."
                              : row.formula_text;
      std::printf("%-5d %-44s %-11s %-11s %-5s %10llu %8.2f\n", row.line_no, shown.c_str(),
                  row.expect_provable ? "provable" : "unprovable",
                  row.error.empty() ? (row.got_provable ? "provable" : "unprovable")
                                    : "error",
                  row.ok ? "yes" : "NO",
                  static_cast<unsigned long long>(row.rule_applications), row.ms);
    }
  }
  if (!all_ok) {
    for (const auto& row : rows)
      if (!row.ok)
        std::cerr << "expectation failed at corpus line " << row.line_no << ": "
                  << row.formula_text
                  << (row.error.empty() ? "" : " (" + row.error + ")") << "\n";
    return kNegative;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fik — decision procedure and countermodel extractor for the intuitionistic "
               "modal logic FIK"};
  app.require_subcommand(1);

  // prove
  std::string prove_formula;
  std::uint64_t budget = 1'000'000;
  ProveArtifacts art;
  auto* prove_cmd = app.add_subcommand("prove", "decide a formula; extract a countermodel when unprovable");
  prove_cmd->add_option("formula", prove_formula,
                        "formula text, @file, or '-' for stdin");
  prove_cmd->add_option("--budget", budget, "rule-application budget (0 = unlimited)");
  prove_cmd->add_option("--derivation", art.derivation_path, "write the derivation tree here");
  prove_cmd->add_option("--model", art.model_path, "write the countermodel document here");
  prove_cmd->add_option("--dot", art.dot_path, "write a DOT rendering of the countermodel");
  prove_cmd->add_option("--format", art.format, "human|json")
      ->check(CLI::IsMember({"human", "json"}));
  prove_cmd->add_flag("--elide-preorder-closure", art.elide_closure,
                      "omit reflexive and transitively implied preorder edges in DOT output");

  // check-model
  std::string cm_model, cm_formula, cm_world;
  bool close_leq = false;
  auto* check_cmd = app.add_subcommand("check-model", "evaluate a formula at a world of a model");
  check_cmd->add_option("model", cm_model, "model document path")->required();
  check_cmd->add_option("formula", cm_formula, "formula text, @file, or '-' for stdin")
      ->required();
  check_cmd->add_option("world", cm_world, "world name")->required();
  check_cmd->add_flag("--close-leq", close_leq,
                      "apply the reflexive closure to leq before validating");

  // oracle
  std::string oracle_formula;
  int oracle_n = 3;
  int oracle_cap = 4;
  auto* oracle_cmd =
      app.add_subcommand("oracle", "exhaustive countermodel search over small models");
  oracle_cmd->add_option("formula", oracle_formula, "formula text, @file, or '-' for stdin");
  oracle_cmd->add_option("-n,--max-worlds", oracle_n, "world bound (default 3)");
  oracle_cmd->add_option("--cap", oracle_cap, "upper limit for -n (default 4)");

  // bench
  std::string corpus_path, bench_format = "human";
  int jobs = 1;
  auto* bench_cmd = app.add_subcommand("bench", "run a corpus with expected verdicts");
  bench_cmd->add_option("corpus", corpus_path, "corpus file")->required();
  bench_cmd->add_option("--jobs", jobs, "concurrent prover runs");
  bench_cmd->add_option("--budget", budget, "rule-application budget per formula");
  bench_cmd->add_option("--format", bench_format, "human|json")
      ->check(CLI::IsMember({"human", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (prove_cmd->parsed()) return run_prove(prove_formula, budget, art);
    if (check_cmd->parsed()) return run_check_model(cm_model, cm_formula, cm_world, close_leq);
    if (oracle_cmd->parsed()) return run_oracle(oracle_formula, oracle_n, oracle_cap);
    if (bench_cmd->parsed()) return run_bench(corpus_path, jobs, budget, bench_format);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
