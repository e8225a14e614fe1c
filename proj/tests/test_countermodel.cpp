#include <doctest.h>

#include <random>

#include "fik/countermodel.hpp"
#include "fik/prover.hpp"
#include "test_util.hpp"

using namespace fik;
using testutil::F;
using testutil::SB;

namespace {

int world_of(const ExtractionReport& r, const Sequent& s) {
  for (std::size_t i = 0; i < r.world_sequents.size(); ++i)
    if (r.world_sequents[i] == s) return static_cast<int>(i);
  return -1;
}

bool leq(const ExtractionReport& r, int a, int b) {
  return r.model.leq[a] >> b & 1u;
}

}  // namespace

TEST_CASE("extract_model: an atomic goal gives the one-world refutation") {
  Sequent leaf = SB{}.f("p");
  REQUIRE(global_saturated(leaf));
  ExtractionReport r = extract_model(leaf);
  CHECK(r.model.world_count() == 1);
  CHECK(r.model.val[0].empty());
  CHECK(verify_countermodel(r, F("p")));
}

TEST_CASE("extract_model: requires a global-saturated leaf") {
  CHECK_THROWS_AS(extract_model(SB{}.a("a & b").done()), std::invalid_argument);
}

TEST_CASE("countermodel of the box-over-implication formula matches the expected shape") {
  Formula goal = F("(<>p -> []q) -> [](p -> q)");
  ProofResult res = prove(goal);
  REQUIRE(!res.provable);
  REQUIRE(res.countermodel.has_value());
  ExtractionReport& r = *res.countermodel;

  REQUIRE(r.model.world_count() == 4);
  // worlds: the saturated root, its implication child, the modal child
  // below that, and the p => q leaf
  int s0 = r.root_world;
  CHECK(s0 == 0);
  REQUIRE(r.world_sequents[s0].succ().imp_blocks.size() == 1);
  int s1 = world_of(r, r.world_sequents[s0].succ().imp_blocks[0]);
  REQUIRE(s1 >= 0);
  REQUIRE(r.world_sequents[s1].succ().modal_blocks.size() == 1);
  int s2 = world_of(r, r.world_sequents[s1].succ().modal_blocks[0]);
  REQUIRE(s2 >= 0);
  int s3 = world_of(r, SB{}.a("p").f("q").done());
  REQUIRE(s3 >= 0);

  CHECK(leq(r, s0, s1));
  CHECK(leq(r, s2, s0));
  CHECK(leq(r, s2, s3));
  CHECK((r.model.acc[s1] >> s2 & 1u));

  // valuation: only the p => q world carries an atom
  for (int w = 0; w < 4; ++w) {
    if (w == s3)
      CHECK(r.model.val[w] == std::vector<std::string>{"p"});
    else
      CHECK(r.model.val[w].empty());
  }

  CHECK(verify_countermodel(r, goal));
  CHECK(r.preorder.pass);
  CHECK(r.hereditary.pass);
  CHECK(r.forward_confluence.pass);
  CHECK(r.truth_lemma.pass);
  CHECK(r.root_refutation.pass);
}

TEST_CASE("countermodel of the double-negated box formula has seven worlds") {
  Formula goal = F("~~[]~p -> []~p");
  ProofResult res = prove(goal);
  REQUIRE(!res.provable);
  REQUIRE(res.countermodel.has_value());
  ExtractionReport& r = *res.countermodel;

  REQUIRE(r.model.world_count() == 7);
  int nonempty = 0;
  int p_world = -1;
  for (int w = 0; w < 7; ++w) {
    if (!r.model.val[w].empty()) {
      ++nonempty;
      p_world = w;
    }
  }
  CHECK(nonempty == 1);
  REQUIRE(p_world >= 0);
  CHECK(r.model.val[p_world] == std::vector<std::string>{"p"});
  CHECK(r.world_sequents[p_world] == SB{}.a("p").f("bot").done());

  CHECK(verify_countermodel(r, goal));
}

TEST_CASE("verification notices a hand-broken model") {
  Formula goal = F("(<>p -> []q) -> [](p -> q)");
  ProofResult res = prove(goal);
  ExtractionReport r = *res.countermodel;
  int s2 = -1, s3 = -1;
  for (int w = 0; w < 4; ++w) {
    if (r.world_sequents[w] == SB{}.a("p").f("q").done()) s3 = w;
    if (r.world_sequents[w].ante().empty() &&
        r.world_sequents[w].succ().imp_blocks.size() == 1 &&
        !r.world_sequents[w].succ().formulas.empty())
      s2 = w;
  }
  REQUIRE(s2 >= 0);
  REQUIRE(s3 >= 0);
  r.model.leq[s2] &= ~(1u << s3);

  CHECK(!verify_countermodel(r, goal));
  // The damage is semantic, not frame-level: the only world above s2 that
  // carried p is gone, so the truth lemma (and with it the refutation at
  // the root) breaks while the frame conditions still hold.
  CHECK(r.preorder.pass);
  CHECK(r.forward_confluence.pass);
  CHECK(!r.truth_lemma.pass);
  CHECK(!r.root_refutation.pass);
}

TEST_CASE("verification reports forward-confluence failures with a witness") {
  ExtractionReport r;
  r.model = testutil::make_model({"x0", "x1", "x2"}, {{"x2", "x0"}}, {{"x2", "x1"}}, {});
  r.world_sequents = {SB{}.f("q").done(), SB{}.f("q").done(), SB{}.f("q").done()};
  r.root_world = 0;
  CHECK(!verify_countermodel(r, F("q")));
  CHECK(!r.forward_confluence.pass);
  CHECK(r.forward_confluence.detail.find("forward confluence") != std::string::npos);
}

TEST_CASE("extracted preorders are reflexive and transitive by construction") {
  std::mt19937 rng(55);
  int unprovable = 0;
  for (int i = 0; i < 40 && unprovable < 12; ++i) {
    Formula f = testutil::random_formula(rng, 8, {"p", "q"});
    ProofResult res = prove(f);
    if (res.provable) continue;
    ++unprovable;
    const Model& m = res.countermodel->model;
    int n = m.world_count();
    for (int x = 0; x < n; ++x) {
      CHECK((m.leq[x] >> x & 1u));
      for (int y = 0; y < n; ++y)
        if (m.leq[x] >> y & 1u) CHECK((m.leq[y] & ~m.leq[x]) == 0);
    }
    // implication children are worlds above their hosts
    const ExtractionReport& r = *res.countermodel;
    for (int x = 0; x < n; ++x) {
      for (const auto& imp : r.world_sequents[x].succ().imp_blocks) {
        int y = world_of(r, imp);
        REQUIRE(y >= 0);
        CHECK(leq(r, x, y));
      }
    }
  }
  CHECK(unprovable >= 12);
}

TEST_CASE("DOT output renders both relations") {
  ProofResult res = prove(F("(<>p -> []q) -> [](p -> q)"));
  std::string dot = model_to_dot(*res.countermodel);
  CHECK(dot.find("style=solid") != std::string::npos);
  CHECK(dot.find("style=dashed") != std::string::npos);
  CHECK(dot.find("x0 -> x0") != std::string::npos);

  std::string elided = model_to_dot(*res.countermodel, true);
  CHECK(elided.find("x0 -> x0") == std::string::npos);
  CHECK(elided.find("style=solid") != std::string::npos);
}

TEST_CASE("annotated model document carries the world sequents") {
  ProofResult res = prove(F("(<>p -> []q) -> [](p -> q)"));
  std::string doc = annotated_model_json(*res.countermodel);
  CHECK(doc.find("\"sequents\"") != std::string::npos);
  CHECK(doc.find("p => q") != std::string::npos);
  CHECK(doc.find("\"root\": \"x0\"") != std::string::npos);
}
