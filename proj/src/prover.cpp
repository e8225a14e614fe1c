#include "fik/prover.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace fik {

Sequent initial_sequent(const Formula& goal) {
  std::vector<Formula> ante;
  Formula c = goal;
  while (c.is(Conn::Imp)) {
    ante.push_back(c.left());
    c = c.right();
  }
  return Sequent::make(std::move(ante), {{c}, {}, {}});
}

// ---------------------------------------------------------------------------
// Instrumented self-checks: cumulative saturation persistence
// ---------------------------------------------------------------------------

namespace {

// Saturation conditions satisfied at one occurrence, keyed so they can be
// located again after a rule application.
struct SatisfiedConditions {
  std::set<std::string> formula_keyed;                    // e.g. "AndL|a & b"
  std::vector<std::pair<Formula, Sequent>> boxl;          // ([]A, modal block)
  std::vector<std::pair<Formula, Sequent>> diar;          // (<>A, modal block)
  std::vector<Sequent> trans_ok;                          // imp children covering the antecedent
  std::vector<std::pair<Sequent, Sequent>> inter_ok;      // (imp child, modal child)
};

bool impr_cond(const Sequent& t, const Formula& a, const Formula& b) {
  if (t.ante_contains(a) && t.succ_formula_contains(b)) return true;
  for (const auto& blk : t.succ().imp_blocks)
    if (blk.ante_contains(a) && blk.succ_formula_contains(b)) return true;
  return false;
}

bool boxr_cond(const Sequent& t, const Formula& a) {
  for (const auto& blk : t.succ().modal_blocks)
    if (blk.succ_formula_contains(a)) return true;
  for (const auto& imp : t.succ().imp_blocks)
    for (const auto& blk : imp.succ().modal_blocks)
      if (blk.succ_formula_contains(a)) return true;
  return false;
}

bool trans_cond(const Sequent& t, const Sequent& imp_child) {
  for (const auto& f : t.ante())
    if (!imp_child.ante_contains(f)) return false;
  return true;
}

bool inter_cond(const Sequent& imp_child, const Sequent& modal_child) {
  for (const auto& blk : imp_child.succ().modal_blocks)
    if (structurally_included(modal_child, blk)) return true;
  return false;
}

SatisfiedConditions satisfied_conditions(const Sequent& t) {
  SatisfiedConditions out;
  auto key = [](const char* rule, const Formula& f) {
    return std::string(rule) + "|" + render(f);
  };
  for (const auto& f : t.ante()) {
    switch (f.kind()) {
      case Conn::And:
        if (t.ante_contains(f.left()) && t.ante_contains(f.right()))
          out.formula_keyed.insert(key("AndL", f));
        break;
      case Conn::Or:
        if (t.ante_contains(f.left()) || t.ante_contains(f.right()))
          out.formula_keyed.insert(key("OrL", f));
        break;
      case Conn::Imp:
        if (t.succ_formula_contains(f.left()) || t.ante_contains(f.right()))
          out.formula_keyed.insert(key("ImpL", f));
        break;
      case Conn::Dia: {
        bool ok = false;
        for (const auto& blk : t.succ().modal_blocks)
          if (blk.ante_contains(f.left())) ok = true;
        if (ok) out.formula_keyed.insert(key("DiaL", f));
        break;
      }
      case Conn::Box:
        for (const auto& blk : t.succ().modal_blocks)
          if (blk.ante_contains(f.left())) out.boxl.emplace_back(f, blk);
        break;
      default:
        break;
    }
  }
  for (const auto& f : t.succ().formulas) {
    switch (f.kind()) {
      case Conn::And:
        if (t.succ_formula_contains(f.left()) || t.succ_formula_contains(f.right()))
          out.formula_keyed.insert(key("AndR", f));
        break;
      case Conn::Or:
        if (t.succ_formula_contains(f.left()) && t.succ_formula_contains(f.right()))
          out.formula_keyed.insert(key("OrR", f));
        break;
      case Conn::Imp:
        if (impr_cond(t, f.left(), f.right())) out.formula_keyed.insert(key("ImpR", f));
        break;
      case Conn::Box:
        if (boxr_cond(t, f.left())) out.formula_keyed.insert(key("BoxR", f));
        break;
      case Conn::Dia:
        for (const auto& blk : t.succ().modal_blocks)
          if (blk.succ_formula_contains(f.left())) out.diar.emplace_back(f, blk);
        break;
      default:
        break;
    }
  }
  for (const auto& imp : t.succ().imp_blocks) {
    if (trans_cond(t, imp)) out.trans_ok.push_back(imp);
    for (const auto& modal : t.succ().modal_blocks)
      if (inter_cond(imp, modal)) out.inter_ok.emplace_back(imp, modal);
  }
  return out;
}

[[noreturn]] void invariant_failure(const std::string& what, const Sequent& conclusion,
                                    const RuleInstance& inst) {
  std::ostringstream os;
  os << "saturation persistence violated: " << what << " after " << inst.describe()
     << " on " << render(conclusion);
  throw std::logic_error(os.str());
}

// After one rule application, every saturation condition satisfied at any
// occurrence of the conclusion must still be satisfied at its image in each
// premise (the calculus is cumulative).
void check_saturation_persistence(const Sequent& s, const RuleInstance& inst,
                                  const AppliedStep& step) {
  auto old_occs = nested_occurrences(s);
  for (std::size_t pi = 0; pi < step.premises.size(); ++pi) {
    const Sequent& premise = step.premises[pi];
    const auto& spine = step.path_maps[pi];  // root .. rewrite target
    auto remap = spine;
    // Occurrences inside a replaced block sit one level below the rewrite
    // target; extend the spine map so their addresses remap too.
    if (step.block_replacement) remap.push_back(*step.block_replacement);
    for (const auto& occ : old_occs) {
      Address naddr = remap_address(occ.addr, remap);
      const Sequent* img = try_resolve(premise, naddr);
      if (!img) invariant_failure("occurrence image lost", s, inst);
      // The child replacement visible from this occurrence, if any: the
      // next path step when the occurrence lies on the rewritten spine, or
      // the rule's block replacement when it is the target itself.
      std::optional<std::pair<Sequent, Sequent>> child_repl;
      bool on_spine = occ.addr.size() <= inst.at.size() &&
                      std::equal(occ.addr.begin(), occ.addr.end(), inst.at.begin());
      if (on_spine && occ.addr.size() + 1 < spine.size())
        child_repl = spine[occ.addr.size() + 1];
      else if (on_spine && occ.addr.size() + 1 == spine.size())
        child_repl = step.block_replacement;
      auto map_child = [&](const Sequent& c) {
        return (child_repl && c == child_repl->first) ? child_repl->second : c;
      };

      SatisfiedConditions before = satisfied_conditions(occ.seq);
      SatisfiedConditions after = satisfied_conditions(*img);
      for (const auto& k : before.formula_keyed)
        if (!after.formula_keyed.count(k)) invariant_failure(k, s, inst);
      for (const auto& [f, blk] : before.boxl) {
        Sequent nb = map_child(blk);
        if (!nb.ante_contains(f.left()))
          invariant_failure("BoxL|" + render(f), s, inst);
      }
      for (const auto& [f, blk] : before.diar) {
        Sequent nb = map_child(blk);
        if (!nb.succ_formula_contains(f.left()))
          invariant_failure("DiaR|" + render(f), s, inst);
      }
      for (const auto& blk : before.trans_ok) {
        if (!trans_cond(*img, map_child(blk)))
          invariant_failure("Trans|<" + render(blk) + ">", s, inst);
      }
      for (const auto& [imp, modal] : before.inter_ok) {
        if (!inter_cond(map_child(imp), map_child(modal)))
          invariant_failure("Inter", s, inst);
      }
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Proof search
// ---------------------------------------------------------------------------

namespace {

struct Driver {
  const ProveOptions& opts;
  ProveStats& stats;
  ExpandContext ctx;

  explicit Driver(const ProveOptions& o, ProveStats& st) : opts(o), stats(st) {
    ctx.budget = o.step_budget;
    ctx.observer = [this](const Sequent& s, const RuleInstance& inst,
                          const std::vector<Sequent>& premises) {
      if (opts.check_invariants)
        check_saturation_persistence(s, inst, apply_tracked(inst, s));
      if (opts.observer) opts.observer(s, inst, premises);
    };
  }

  // Expands the open leaf by one phase step. Phase priority re-derived
  // from scratch: basic saturation first, then transfer/interaction, then
  // block creation with the blocking check.
  void expand_once(DerivationNode* node) {
    const Sequent& s = node->seq;
    auto occs = nested_occurrences(s);

    if (!global_r1_saturated(s)) {
      for (const auto& occ : occs) {
        if (!r1_saturated(occ.seq)) {
          exp1(*node, occ.addr, ctx);
          return;
        }
      }
      throw std::logic_error("no basic-level target in a non-R1-saturated sequent");
    }
    if (!global_r2_saturated(s)) {
      for (const auto& occ : occs) {
        if (!r2_saturated(occ.seq)) {
          exp2(*node, occ.addr, ctx);
          return;
        }
      }
      throw std::logic_error("no transfer-level target in a non-R2-saturated sequent");
    }

    // Block-creation phase: pick the first outermost occurrence that is not
    // R3-saturated, has no non-R3-saturated ancestor through implication
    // blocks, and is not blocked by an equivalent saturated ancestor.
    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < occs.size(); ++i)
      if (!r3_saturated(occs[i].seq)) pending.push_back(i);
    for (std::size_t i : pending) {
      bool minimal = true;
      for (std::size_t j : pending) {
        if (i != j && imp_only_extension(occs[j].addr, occs[i].addr)) {
          minimal = false;
          break;
        }
      }
      if (!minimal) continue;
      if (auto blocker = blocked(occs[i].addr, s)) {
        ++stats.blocking_events;
        if (opts.check_invariants && !r2_saturated(occs[i].seq))
          throw std::logic_error("blocked occurrence is not saturated for transfer rules");
        continue;
      }
      exp3(*node, occs[i].addr, ctx);
      return;
    }
    throw std::logic_error("no expandable occurrence in a non-global-saturated leaf");
  }

  // Depth-first, left premise first. Returns the first global-saturated
  // leaf, or nullptr when every explored leaf closed.
  DerivationNode* run(DerivationNode* root) {
    std::vector<DerivationNode*> stack{root};
    while (!stack.empty()) {
      DerivationNode* node = stack.back();
      stack.pop_back();
      if (node->status == NodeStatus::Axiomatic) continue;
      if (node->status == NodeStatus::Internal) {
        for (auto it = node->children.rbegin(); it != node->children.rend(); ++it)
          stack.push_back(it->get());
        continue;
      }
      // Open leaf.
      if (auto ax = is_axiomatic(node->seq)) {
        node->status = NodeStatus::Axiomatic;
        node->axiom = std::move(ax);
        continue;
      }
      if (global_saturated(node->seq)) {
        node->status = NodeStatus::Saturated;
        return node;
      }
      expand_once(node);
      if (node->status == NodeStatus::Open)
        throw std::logic_error("expansion step did not progress");
      stack.push_back(node);
    }
    return nullptr;
  }
};

}  // namespace

ProofResult prove_sequent(const Sequent& root_sequent, const ProveOptions& opts) {
  ProofResult result;
  result.derivation = std::make_unique<DerivationNode>();
  result.derivation->seq = root_sequent;
  result.stats.max_sequent_weight = sequent_weight(root_sequent);

  Driver driver(opts, result.stats);
  driver.ctx.max_sequent_weight = result.stats.max_sequent_weight;
  DerivationNode* saturated = driver.run(result.derivation.get());

  result.stats.rule_applications = driver.ctx.rule_applications;
  result.stats.max_sequent_weight = driver.ctx.max_sequent_weight;
  result.provable = saturated == nullptr;
  if (saturated) {
    result.saturated_leaf = saturated->seq;
    if (opts.check_invariants) {
      for (const auto& occ : nested_occurrences(saturated->seq))
        if (!r2_saturated(occ.seq))
          throw std::logic_error(
              "global-saturated leaf contains an occurrence unsaturated for transfer rules");
    }
  }
  return result;
}

ProofResult prove(const Formula& goal, const ProveOptions& opts) {
  ProofResult result = prove_sequent(initial_sequent(goal), opts);
  if (!result.provable) {
    ExtractionReport report = extract_model(*result.saturated_leaf);
    if (!verify_countermodel(report, goal)) {
      std::string why;
      for (const auto* c : {&report.preorder, &report.hereditary, &report.forward_confluence,
                            &report.truth_lemma, &report.root_refutation})
        if (c->ran && !c->pass) {
          why = c->detail;
          break;
        }
      throw std::logic_error("extracted countermodel failed verification: " + why);
    }
    result.countermodel = std::move(report);
  }
  return result;
}

}  // namespace fik
