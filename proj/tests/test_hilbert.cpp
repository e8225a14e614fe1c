#include <doctest.h>

#include <random>

#include "fik/hilbert.hpp"
#include "fik/kripke.hpp"
#include "fik/prover.hpp"
#include "test_util.hpp"

using namespace fik;
using testutil::F;

#ifndef FIK_DATA_DIR
#define FIK_DATA_DIR "data"
#endif

TEST_CASE("match_axiom: modal schemas") {
  auto m = match_axiom(F("[](a -> b) -> ([]a -> []b)"));
  REQUIRE(m.has_value());
  CHECK(m->first == SchemaId::KBox);
  CHECK(m->second.at("p") == F("a"));
  CHECK(m->second.at("q") == F("b"));

  m = match_axiom(F("<>bot -> bot"));
  REQUIRE(m.has_value());
  CHECK(m->first == SchemaId::N);
  CHECK(m->second.empty());

  CHECK(!match_axiom(F("p -> q")).has_value());
}

TEST_CASE("match_axiom: substitution must be consistent across occurrences") {
  CHECK(match_axiom(F("a & b -> a")).has_value());
  CHECK(!match_axiom(F("a & b -> c")).has_value());
  // first match in schema order wins: p -> q -> p with q := p is IPL1
  auto m = match_axiom(F("a -> a -> a"));
  REQUIRE(m.has_value());
  CHECK(m->first == SchemaId::IPL1);
}

TEST_CASE("check_derivation: identity formula, the textbook route") {
  Derivation d = parse_derivation(
      "1. p -> (p -> p) -> p ; ax IPL1 {p := p, q := p -> p}\n"
      "2. (p -> (p -> p) -> p) -> (p -> p -> p) -> p -> p ; ax IPL2 {p := p, q := p -> p, "
      "r := p}\n"
      "3. (p -> p -> p) -> p -> p ; mp 1 2\n"
      "4. p -> p -> p ; ax IPL1 {p := p, q := p}\n"
      "5. p -> p ; mp 4 3\n");
  auto outcome = check_derivation(d);
  CHECK(outcome.ok);
  CHECK(outcome.first_failure == 0);
}

TEST_CASE("check_derivation: non-axiom first step fails at index 1") {
  Derivation d;
  d.steps.push_back({F("p"), AxiomJust{SchemaId::IPL1, {}}});
  auto outcome = check_derivation(d);
  CHECK(!outcome.ok);
  CHECK(outcome.first_failure == 1);
}

TEST_CASE("check_derivation: necessitation applies to any derived step") {
  Derivation d;
  Substitution subst{{"p", F("a")}, {"q", F("b")}};
  Formula kbox = F("[](a -> b) -> ([]a -> []b)");
  d.steps.push_back({kbox, AxiomJust{SchemaId::KBox, subst}});
  d.steps.push_back({Formula::box(kbox), NecJust{1}});
  CHECK(check_derivation(d).ok);

  // forward references are rejected
  Derivation bad;
  bad.steps.push_back({Formula::box(kbox), NecJust{1}});
  auto outcome = check_derivation(bad);
  CHECK(!outcome.ok);
  CHECK(outcome.first_failure == 1);
}

TEST_CASE("check_derivation: misdirected modus ponens") {
  Derivation d = parse_derivation(
      "1. bot -> p ; ax IPL9 {p := p}\n"
      "2. (bot -> p) -> q -> bot -> p ; ax IPL1 {p := bot -> p, q := q}\n"
      "3. q -> bot -> p ; mp 2 1\n");
  auto outcome = check_derivation(d);
  CHECK(!outcome.ok);
  CHECK(outcome.first_failure == 3);
}

TEST_CASE("derivation files: shipped examples") {
  auto n_file = load_derivation_file(std::string(FIK_DATA_DIR) + "/n_axiom.drv");
  CHECK(check_derivation(n_file).ok);
  CHECK(n_file.steps.size() == 1);
  CHECK(n_file.steps[0].formula == F("<>bot -> bot"));

  auto mp_file = load_derivation_file(std::string(FIK_DATA_DIR) + "/mp_exercise.drv");
  CHECK(mp_file.steps.size() == 3);
  CHECK(check_derivation(mp_file).ok);

  auto bad = load_derivation_file(std::string(FIK_DATA_DIR) + "/mp_exercise_bad.drv");
  auto outcome = check_derivation(bad);
  CHECK(!outcome.ok);
  CHECK(outcome.first_failure == 3);
}

TEST_CASE("derivation files: malformed lines are rejected with the line number") {
  CHECK_THROWS_WITH_AS(parse_derivation("1. p -> p\n"),
                       doctest::Contains("line 1"), std::runtime_error);
  CHECK_THROWS_AS(parse_derivation("2. p ; ax IPL1 {}\n"), std::runtime_error);
  CHECK_THROWS_AS(parse_derivation("1. p ; zap 1\n"), std::runtime_error);
}

TEST_CASE("axiom instances hold in every small model") {
  std::mt19937 rng(101);
  for (const auto& schema : axiom_schemas()) {
    for (int round = 0; round < 2; ++round) {
      Substitution subst;
      for (const auto& var : atoms_of(schema.shape))
        subst.emplace(var, testutil::random_formula(rng, 3, {"p", "q"}));
      Formula inst = apply_substitution(schema.shape, subst);
      CAPTURE(render(inst));
      CHECK(!find_countermodel_bruteforce(inst, 3).has_value());
    }
  }
}

TEST_CASE("axiom instances are provable in the calculus") {
  std::mt19937 rng(102);
  for (const auto& schema : axiom_schemas()) {
    Substitution subst;
    for (const auto& var : atoms_of(schema.shape))
      subst.emplace(var, testutil::random_formula(rng, 3, {"p", "q"}));
    Formula inst = apply_substitution(schema.shape, subst);
    CAPTURE(render(inst));
    CHECK(prove(inst).provable);
  }
}
