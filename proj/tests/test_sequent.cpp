#include <doctest.h>

#include <random>

#include "fik/kripke.hpp"
#include "fik/sequent.hpp"
#include "test_util.hpp"

using namespace fik;
using testutil::F;
using testutil::SB;

namespace {

// The running succedent example: b, [c => d, [e => f], <g => h>],
// <t => [p => q]>, [m => n].
Succedent example_succedent() {
  Sequent inner_ef = SB{}.a("e").f("f");
  Sequent inner_gh = SB{}.a("g").f("h");
  Sequent big = SB{}.a("c").f("d").m(inner_ef).i(inner_gh);
  Sequent pq = SB{}.a("p").f("q");
  Sequent tpq = SB{}.a("t").m(pq);
  Sequent mn = SB{}.a("m").f("n");
  SB root;
  root.f("b").m(big).i(tpq).m(mn);
  return root.succ;
}

using testutil::grow_sequent;
using testutil::sprinkle_imp_blocks;

}  // namespace

TEST_CASE("set semantics: duplicates collapse, order is canonical") {
  Sequent a = Sequent::make({F("q"), F("p"), F("q")}, {{F("r"), F("r")}, {}, {}});
  Sequent b = Sequent::make({F("p"), F("q")}, {{F("r")}, {}, {}});
  CHECK(a == b);
  CHECK(a.ante().size() == 2);

  Sequent blk = SB{}.a("p");
  Sequent two = Sequent::make({}, {{}, {blk, blk}, {}});
  CHECK(two.succ().modal_blocks.size() == 1);
}

TEST_CASE("render") {
  CHECK(render(Sequent()) == "=>");
  CHECK(render(SB{}.a("p").f("q").done()) == "p => q");
  Sequent inner = SB{}.a("e");
  CHECK(render(SB{}.a("c").m(inner).done()) == "c => [e =>]");
}

TEST_CASE("sharp: worked example, bit-exact") {
  Succedent d = example_succedent();
  CHECK(render_succedent(sharp(d)) == "b, [c => d, [e => f]], [m => n]");
  SUBCASE("block-free succedents are fixed points") {
    Succedent flat{{F("a"), F("b")}, {}, {}};
    CHECK(Sequent::make({}, sharp(flat)) == Sequent::make({}, flat));
  }
}

TEST_CASE("star: worked example, bit-exact") {
  Succedent d = example_succedent();
  CHECK(render_succedent(star(d)) == "[c => [e =>]], [m =>]");
  SUBCASE("implication-block-free-and-formula-only succedent stars to empty") {
    Sequent pq_chain = SB{}.a("t").m(SB{}.a("p").f("q").done());
    Succedent imp_free{{F("b")}, {}, {pq_chain}};
    CHECK(star(imp_free).modal_blocks.empty());
    CHECK(star(imp_free).formulas.empty());
    CHECK(star(imp_free).imp_blocks.empty());
  }
  SUBCASE("fixed point") {
    Sequent x = SB{}.a("x");
    Succedent just_block{{}, {x}, {}};
    CHECK(Sequent::make({}, star(just_block)) == Sequent::make({}, just_block));
  }
}

TEST_CASE("star and sharp are idempotent on random sequents") {
  std::mt19937 rng(11);
  for (int i = 0; i < 300; ++i) {
    Sequent s = testutil::random_sequent(rng, 3, {"p", "q"});
    Succedent st = star(s.succ());
    CHECK(Sequent::make({}, star(st)) == Sequent::make({}, st));
    Succedent sh = sharp(s.succ());
    CHECK(Sequent::make({}, sharp(sh)) == Sequent::make({}, sh));
  }
}

TEST_CASE("structural inclusion: examples") {
  Sequent ef = SB{}.a("e").f("f");
  Sequent lhs = SB{}.a("c").f("d").m(ef);          // c => d, [e => f]
  Sequent rhs = SB{}.a("c").m(SB{}.a("e").done()); // c => [e =>]
  CHECK(structurally_included(lhs, rhs));
  CHECK(!structurally_included(SB{}.a("p").done(), SB{}.a("q").done()));
}

TEST_CASE("structural inclusion: reflexivity, transitivity, antecedent projection") {
  std::mt19937 rng(13);
  int related = 0;
  for (int i = 0; i < 400; ++i) {
    Sequent s1 = testutil::random_sequent(rng, 2, {"p", "q"});
    CHECK(structurally_included(s1, s1));
    Sequent s2 = grow_sequent(rng, s1);
    Sequent s3 = grow_sequent(rng, s2);
    CHECK(structurally_included(s1, s2));
    CHECK(structurally_included(s2, s3));
    CHECK(structurally_included(s1, s3));
    if (structurally_included(s1, s2)) {
      ++related;
      for (const auto& f : s1.ante()) CHECK(s2.ante_contains(f));
    }
    // every sequent is structurally included in its starred self
    Sequent starred = Sequent::make(s1.ante(), star(s1.succ()));
    CHECK(structurally_included(s1, starred));
  }
  CHECK(related == 400);
}

TEST_CASE("block equivalence: examples") {
  std::mt19937 rng(3);
  Sequent core = SB{}.a("g").f("ba").f("bb").m(SB{}.f("a").done());
  Sequent with_imp = Sequent::make(
      core.ante(), {core.succ().formulas, core.succ().modal_blocks,
                    {testutil::random_sequent(rng, 1, {"p"})}});
  CHECK(block_equivalent(core, core));
  CHECK(block_equivalent(core, with_imp));
  Sequent pa = SB{}.m(SB{}.a("p").done());
  Sequent qa = SB{}.m(SB{}.a("q").done());
  CHECK(!block_equivalent(pa, qa));
}

TEST_CASE("block equivalence is an equivalence relation") {
  std::mt19937 rng(17);
  for (int i = 0; i < 300; ++i) {
    Sequent s = testutil::random_sequent(rng, 2, {"p", "q"});
    Sequent s2 = sprinkle_imp_blocks(rng, s);
    Sequent s3 = sprinkle_imp_blocks(rng, s2);
    CHECK(block_equivalent(s, s));
    CHECK(block_equivalent(s, s2));
    CHECK(block_equivalent(s2, s));  // symmetry
    CHECK(block_equivalent(s2, s3));
    CHECK(block_equivalent(s, s3));  // transitivity
  }
}

TEST_CASE("nested occurrences") {
  CHECK(nested_occurrences(SB{}.f("a").done()).size() == 1);

  // => <p => [q =>]> has three occurrences
  Sequent q = SB{}.a("q");
  Sequent p_imp = SB{}.a("p").m(q);
  Sequent root = SB{}.i(p_imp);
  auto occs = nested_occurrences(root);
  REQUIRE(occs.size() == 3);
  CHECK(occs[0].kind == OccKind::Root);
  CHECK(occs[1].kind == OccKind::Imp);
  CHECK(occs[1].seq == p_imp);
  CHECK(occs[2].kind == OccKind::Modal);
  CHECK(occs[2].seq == Sequent(q));

  // the loop sequent: G => p, []a, []b, <G => []a, []b, [=> a]>,
  //                                     <G => []a, []b, [=> b]>
  SB gamma_side;
  gamma_side.a("[]a -> bot").a("[]b -> bot");
  Sequent block_a = SB{}.f("a");
  Sequent block_b = SB{}.f("b");
  Sequent imp_a = SB{}.a("[]a -> bot").a("[]b -> bot").f("[]a").f("[]b").m(block_a);
  Sequent imp_b = SB{}.a("[]a -> bot").a("[]b -> bot").f("[]a").f("[]b").m(block_b);
  Sequent loop1 = gamma_side.f("p").f("[]a").f("[]b").i(imp_a).i(imp_b).done();
  CHECK(nested_occurrences(loop1).size() == 5);
}

TEST_CASE("addresses resolve and rewrite") {
  Sequent q = SB{}.a("q");
  Sequent p_imp = SB{}.a("p").m(q);
  Sequent root = SB{}.i(p_imp);
  Address addr{{BlockKind::Imp, p_imp}, {BlockKind::Modal, q}};
  CHECK(resolve(root, addr) == Sequent(q));
  CHECK(try_resolve(root, {{BlockKind::Modal, q}}) == nullptr);

  auto rr = rewrite_at(root, addr, [](const Sequent& s) {
    return s.with_succ_formulas_added({F("r")});
  });
  Address naddr = {{BlockKind::Imp, rr.path_map[1].second},
                   {BlockKind::Modal, rr.path_map[2].second}};
  CHECK(resolve(rr.root, naddr).succ_formula_contains(F("r")));
  CHECK(rr.path_map.size() == 3);
  CHECK(rr.path_map[0].first == root);
  CHECK(rr.path_map[0].second == rr.root);
}

TEST_CASE("modal degree of sequents") {
  CHECK(seq_modal_degree(SB{}.f("p").done()) == 0);
  CHECK(seq_modal_degree(SB{}.m(SB{}.f("p").done()).done()) == 1);
  CHECK(seq_modal_degree(SB{}.i(SB{}.m(SB{}.f("p").done()).done()).done()) == 1);
  CHECK(seq_modal_degree(SB{}.f("[][]p").done()) == 2);
}

TEST_CASE("modal tree") {
  CHECK(modal_tree(SB{}.a("p").done()).children.empty());

  Sequent inner = SB{}.a("q");
  Sequent mid = SB{}.a("p").m(inner);
  Sequent root = SB{}.m(mid);
  ModalTree t = modal_tree(root);
  CHECK(modal_tree_height(t) == 2);
  REQUIRE(t.children.size() == 1);
  CHECK(t.children[0].node == mid);

  std::mt19937 rng(23);
  for (int i = 0; i < 300; ++i) {
    Sequent s = testutil::random_sequent(rng, 3, {"p", "q"});
    CHECK(modal_tree_height(modal_tree(s)) <= seq_modal_degree(s));
  }
}

TEST_CASE("star transfers unforced succedents upward in forward-confluent models") {
  std::mt19937 rng(29);
  std::vector<Sequent> samples;
  for (int i = 0; i < 60; ++i) samples.push_back(testutil::random_sequent(rng, 2, {"p"}));

  ModelEnumerator en(2, {"p"});
  int checked = 0;
  while (auto m = en.next()) {
    int n = m->world_count();
    for (const auto& s : samples) {
      Succedent starred = star(s.succ());
      for (int x = 0; x < n; ++x) {
        if (forces_succedent(*m, x, s.succ())) continue;
        for (int y = 0; y < n; ++y) {
          if (!(m->leq[x] >> y & 1u)) continue;
          CHECK(!forces_succedent(*m, y, starred));
          ++checked;
        }
      }
    }
  }
  CHECK(checked > 1000);
}
