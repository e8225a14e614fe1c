#include "fik/calculus.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

namespace fik {

std::string rule_name(RuleId r) {
  switch (r) {
    case RuleId::BotL: return "BotL";
    case RuleId::TopR: return "TopR";
    case RuleId::Id: return "Id";
    case RuleId::AndL: return "AndL";
    case RuleId::AndR: return "AndR";
    case RuleId::OrL: return "OrL";
    case RuleId::OrR: return "OrR";
    case RuleId::ImpL: return "ImpL";
    case RuleId::ImpR1: return "ImpR1";
    case RuleId::ImpR2: return "ImpR2";
    case RuleId::BoxL: return "BoxL";
    case RuleId::BoxR: return "BoxR";
    case RuleId::DiaL: return "DiaL";
    case RuleId::DiaR: return "DiaR";
    case RuleId::Trans: return "Trans";
    case RuleId::Inter: return "Inter";
  }
  return "?";
}

bool is_r1_rule(RuleId r) {
  switch (r) {
    case RuleId::AndL:
    case RuleId::AndR:
    case RuleId::OrL:
    case RuleId::OrR:
    case RuleId::ImpL:
    case RuleId::BoxL:
    case RuleId::DiaL:
    case RuleId::DiaR:
      return true;
    default:
      return false;
  }
}

bool is_r2_rule(RuleId r) { return r == RuleId::Trans || r == RuleId::Inter; }

bool is_r3_rule(RuleId r) {
  return r == RuleId::ImpR1 || r == RuleId::ImpR2 || r == RuleId::BoxR;
}

std::string RuleInstance::describe() const {
  std::string out = rule_name(rule);
  if (principal) out += " " + render(*principal);
  if (block) out += (rule == RuleId::Trans || rule == RuleId::Inter)
                        ? " <" + render(*block) + ">"
                        : " [" + render(*block) + "]";
  if (block2) out += " [" + render(*block2) + "]";
  return out;
}

// ---------------------------------------------------------------------------
// Axioms
// ---------------------------------------------------------------------------

std::optional<AxiomHit> is_axiomatic(const Sequent& s) {
  for (const auto& occ : nested_occurrences(s)) {
    const Sequent& t = occ.seq;
    if (t.ante_contains(Formula::bot()))
      return AxiomHit{AxiomHit::Kind::BotL, occ.addr, std::nullopt};
    if (t.succ_formula_contains(Formula::top()))
      return AxiomHit{AxiomHit::Kind::TopR, occ.addr, std::nullopt};
    for (const auto& f : t.ante())
      if (t.succ_formula_contains(f)) return AxiomHit{AxiomHit::Kind::Id, occ.addr, f};
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Saturation conditions, per occurrence
// ---------------------------------------------------------------------------

namespace {

bool impr_condition_holds(const Sequent& t, const Formula& a, const Formula& b) {
  if (t.ante_contains(a) && t.succ_formula_contains(b)) return true;
  for (const auto& blk : t.succ().imp_blocks)
    if (blk.ante_contains(a) && blk.succ_formula_contains(b)) return true;
  return false;
}

bool boxr_condition_holds(const Sequent& t, const Formula& a) {
  for (const auto& blk : t.succ().modal_blocks)
    if (blk.succ_formula_contains(a)) return true;
  for (const auto& imp : t.succ().imp_blocks)
    for (const auto& blk : imp.succ().modal_blocks)
      if (blk.succ_formula_contains(a)) return true;
  return false;
}

bool dial_condition_holds(const Sequent& t, const Formula& a) {
  for (const auto& blk : t.succ().modal_blocks)
    if (blk.ante_contains(a)) return true;
  return false;
}

bool trans_condition_holds(const Sequent& t, const Sequent& imp_child) {
  for (const auto& f : t.ante())
    if (!imp_child.ante_contains(f)) return false;
  return true;
}

bool inter_condition_holds(const Sequent& imp_child, const Sequent& modal_child) {
  for (const auto& blk : imp_child.succ().modal_blocks)
    if (structurally_included(modal_child, blk)) return true;
  return false;
}

}  // namespace

bool r1_saturated(const Sequent& t) {
  for (const auto& f : t.ante()) {
    switch (f.kind()) {
      case Conn::And:
        if (!t.ante_contains(f.left()) || !t.ante_contains(f.right())) return false;
        break;
      case Conn::Or:
        if (!t.ante_contains(f.left()) && !t.ante_contains(f.right())) return false;
        break;
      case Conn::Imp:
        if (!t.succ_formula_contains(f.left()) && !t.ante_contains(f.right())) return false;
        break;
      case Conn::Dia:
        if (!dial_condition_holds(t, f.left())) return false;
        break;
      case Conn::Box:
        for (const auto& blk : t.succ().modal_blocks)
          if (!blk.ante_contains(f.left())) return false;
        break;
      default:
        break;
    }
  }
  for (const auto& f : t.succ().formulas) {
    switch (f.kind()) {
      case Conn::And:
        if (!t.succ_formula_contains(f.left()) && !t.succ_formula_contains(f.right()))
          return false;
        break;
      case Conn::Or:
        if (!t.succ_formula_contains(f.left()) || !t.succ_formula_contains(f.right()))
          return false;
        break;
      case Conn::Dia:
        for (const auto& blk : t.succ().modal_blocks)
          if (!blk.succ_formula_contains(f.left())) return false;
        break;
      default:
        break;
    }
  }
  return true;
}

bool r2_saturated(const Sequent& t) {
  if (!r1_saturated(t)) return false;
  for (const auto& imp : t.succ().imp_blocks) {
    if (!trans_condition_holds(t, imp)) return false;
    for (const auto& modal : t.succ().modal_blocks)
      if (!inter_condition_holds(imp, modal)) return false;
  }
  return true;
}

bool r3_saturated(const Sequent& t) {
  if (!r2_saturated(t)) return false;
  for (const auto& f : t.succ().formulas) {
    if (f.is(Conn::Box) && !boxr_condition_holds(t, f.left())) return false;
    if (f.is(Conn::Imp) && !impr_condition_holds(t, f.left(), f.right())) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Blocking and global saturation
// ---------------------------------------------------------------------------

std::optional<Address> blocked(const Address& t_addr, const Sequent& s) {
  Sequent t = resolve(s, t_addr);
  for (const auto& occ : nested_occurrences(s)) {
    if (!imp_only_extension(occ.addr, t_addr)) continue;
    if (r3_saturated(occ.seq) && block_equivalent(occ.seq, t)) return occ.addr;
  }
  return std::nullopt;
}

namespace {

std::vector<bool> blocked_flags(const std::vector<Occurrence>& occs) {
  std::vector<bool> r3(occs.size());
  for (std::size_t i = 0; i < occs.size(); ++i) r3[i] = r3_saturated(occs[i].seq);
  std::vector<bool> out(occs.size(), false);
  for (std::size_t i = 0; i < occs.size(); ++i) {
    for (std::size_t j = 0; j < occs.size(); ++j) {
      if (i == j || !r3[j]) continue;
      if (imp_only_extension(occs[j].addr, occs[i].addr) &&
          block_equivalent(occs[j].seq, occs[i].seq)) {
        out[i] = true;
        break;
      }
    }
  }
  return out;
}

}  // namespace

bool global_r1_saturated(const Sequent& s) {
  auto occs = nested_occurrences(s);
  auto blk = blocked_flags(occs);
  for (std::size_t i = 0; i < occs.size(); ++i)
    if (!blk[i] && !r1_saturated(occs[i].seq)) return false;
  return true;
}

bool global_r2_saturated(const Sequent& s) {
  auto occs = nested_occurrences(s);
  auto blk = blocked_flags(occs);
  for (std::size_t i = 0; i < occs.size(); ++i)
    if (!blk[i] && !r2_saturated(occs[i].seq)) return false;
  return true;
}

bool global_saturated(const Sequent& s) {
  auto occs = nested_occurrences(s);
  auto blk = blocked_flags(occs);
  for (std::size_t i = 0; i < occs.size(); ++i)
    if (!blk[i] && !r3_saturated(occs[i].seq)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Rule instances
// ---------------------------------------------------------------------------

namespace {

void instances_at(RuleId rule, const Occurrence& occ, std::vector<RuleInstance>& out) {
  const Sequent& t = occ.seq;
  const Address& at = occ.addr;
  switch (rule) {
    case RuleId::BotL:
    case RuleId::TopR:
    case RuleId::Id:
      return;  // axioms are detected, not applied
    case RuleId::AndL:
      for (const auto& f : t.ante())
        if (f.is(Conn::And) && !(t.ante_contains(f.left()) && t.ante_contains(f.right())))
          out.push_back({rule, at, f, std::nullopt, std::nullopt});
      return;
    case RuleId::OrL:
      for (const auto& f : t.ante())
        if (f.is(Conn::Or) && !t.ante_contains(f.left()) && !t.ante_contains(f.right()))
          out.push_back({rule, at, f, std::nullopt, std::nullopt});
      return;
    case RuleId::ImpL:
      for (const auto& f : t.ante())
        if (f.is(Conn::Imp) && !t.succ_formula_contains(f.left()) &&
            !t.ante_contains(f.right()))
          out.push_back({rule, at, f, std::nullopt, std::nullopt});
      return;
    case RuleId::AndR:
      for (const auto& f : t.succ().formulas)
        if (f.is(Conn::And) && !t.succ_formula_contains(f.left()) &&
            !t.succ_formula_contains(f.right()))
          out.push_back({rule, at, f, std::nullopt, std::nullopt});
      return;
    case RuleId::OrR:
      for (const auto& f : t.succ().formulas)
        if (f.is(Conn::Or) && !(t.succ_formula_contains(f.left()) &&
                                t.succ_formula_contains(f.right())))
          out.push_back({rule, at, f, std::nullopt, std::nullopt});
      return;
    case RuleId::ImpR1:
      for (const auto& f : t.succ().formulas)
        if (f.is(Conn::Imp) && t.ante_contains(f.left()) &&
            !impr_condition_holds(t, f.left(), f.right()))
          out.push_back({rule, at, f, std::nullopt, std::nullopt});
      return;
    case RuleId::ImpR2:
      for (const auto& f : t.succ().formulas)
        if (f.is(Conn::Imp) && !t.ante_contains(f.left()) &&
            !impr_condition_holds(t, f.left(), f.right()))
          out.push_back({rule, at, f, std::nullopt, std::nullopt});
      return;
    case RuleId::BoxL:
      for (const auto& f : t.ante()) {
        if (!f.is(Conn::Box)) continue;
        for (const auto& blk : t.succ().modal_blocks)
          if (!blk.ante_contains(f.left()))
            out.push_back({rule, at, f, blk, std::nullopt});
      }
      return;
    case RuleId::BoxR:
      for (const auto& f : t.succ().formulas)
        if (f.is(Conn::Box) && !boxr_condition_holds(t, f.left()))
          out.push_back({rule, at, f, std::nullopt, std::nullopt});
      return;
    case RuleId::DiaL:
      for (const auto& f : t.ante())
        if (f.is(Conn::Dia) && !dial_condition_holds(t, f.left()))
          out.push_back({rule, at, f, std::nullopt, std::nullopt});
      return;
    case RuleId::DiaR:
      for (const auto& f : t.succ().formulas) {
        if (!f.is(Conn::Dia)) continue;
        for (const auto& blk : t.succ().modal_blocks)
          if (!blk.succ_formula_contains(f.left()))
            out.push_back({rule, at, f, blk, std::nullopt});
      }
      return;
    case RuleId::Trans:
      for (const auto& imp : t.succ().imp_blocks)
        if (!trans_condition_holds(t, imp))
          out.push_back({rule, at, std::nullopt, imp, std::nullopt});
      return;
    case RuleId::Inter:
      for (const auto& imp : t.succ().imp_blocks)
        for (const auto& modal : t.succ().modal_blocks)
          if (!inter_condition_holds(imp, modal))
            out.push_back({rule, at, std::nullopt, imp, modal});
      return;
  }
}

}  // namespace

std::vector<RuleInstance> applicable(RuleId rule, const Sequent& s) {
  std::vector<RuleInstance> out;
  for (const auto& occ : nested_occurrences(s)) instances_at(rule, occ, out);
  return out;
}

// ---------------------------------------------------------------------------
// Rule application
// ---------------------------------------------------------------------------

namespace {

struct PremiseSpec {
  std::vector<Sequent> contents;
  std::optional<std::pair<Sequent, Sequent>> block_replacement;
};

PremiseSpec premise_contents(const RuleInstance& inst, const Sequent& t) {
  auto need_principal = [&]() -> const Formula& {
    if (!inst.principal) throw std::invalid_argument("rule instance lacks its principal");
    return *inst.principal;
  };
  switch (inst.rule) {
    case RuleId::AndL: {
      const Formula& f = need_principal();
      return {{t.with_ante_added({f.left(), f.right()})}, std::nullopt};
    }
    case RuleId::AndR: {
      const Formula& f = need_principal();
      return {{t.with_succ_formulas_added({f.left()}),
               t.with_succ_formulas_added({f.right()})},
              std::nullopt};
    }
    case RuleId::OrL: {
      const Formula& f = need_principal();
      return {{t.with_ante_added({f.left()}), t.with_ante_added({f.right()})}, std::nullopt};
    }
    case RuleId::OrR: {
      const Formula& f = need_principal();
      return {{t.with_succ_formulas_added({f.left(), f.right()})}, std::nullopt};
    }
    case RuleId::ImpL: {
      const Formula& f = need_principal();
      return {{t.with_succ_formulas_added({f.left()}), t.with_ante_added({f.right()})},
              std::nullopt};
    }
    case RuleId::ImpR1: {
      const Formula& f = need_principal();
      if (!t.ante_contains(f.left()))
        throw std::invalid_argument("ImpR1 requires the antecedent to contain A");
      return {{t.with_succ_formulas_added({f.right()})}, std::nullopt};
    }
    case RuleId::ImpR2: {
      const Formula& f = need_principal();
      if (t.ante_contains(f.left()))
        throw std::invalid_argument("ImpR2 requires the antecedent to omit A");
      return {{t.with_imp_block_added(Sequent::make({f.left()}, {{f.right()}, {}, {}}))},
              std::nullopt};
    }
    case RuleId::BoxL: {
      const Formula& f = need_principal();
      if (!inst.block) throw std::invalid_argument("BoxL needs a target modal block");
      Sequent nb = inst.block->with_ante_added({f.left()});
      return {{t.with_modal_block_replaced(*inst.block, nb)},
              std::make_pair(*inst.block, nb)};
    }
    case RuleId::BoxR: {
      const Formula& f = need_principal();
      Sequent inner = Sequent::make({}, {{f.left()}, {}, {}});
      Sequent block = Sequent::make({}, {{}, {inner}, {}});
      return {{t.with_imp_block_added(block)}, std::nullopt};
    }
    case RuleId::DiaL: {
      const Formula& f = need_principal();
      return {{t.with_modal_block_added(Sequent::make({f.left()}, {}))}, std::nullopt};
    }
    case RuleId::DiaR: {
      const Formula& f = need_principal();
      if (!inst.block) throw std::invalid_argument("DiaR needs a target modal block");
      Sequent nb = inst.block->with_succ_formulas_added({f.left()});
      return {{t.with_modal_block_replaced(*inst.block, nb)},
              std::make_pair(*inst.block, nb)};
    }
    case RuleId::Trans: {
      if (!inst.block) throw std::invalid_argument("Trans needs a target implication block");
      Sequent nb = inst.block->with_ante_added(t.ante());
      return {{t.with_imp_block_replaced(*inst.block, nb)},
              std::make_pair(*inst.block, nb)};
    }
    case RuleId::Inter: {
      if (!inst.block || !inst.block2)
        throw std::invalid_argument("Inter needs an implication and a modal block");
      Sequent transferred = Sequent::make(inst.block2->ante(), star(inst.block2->succ()));
      Sequent nb = inst.block->with_modal_block_added(transferred);
      return {{t.with_imp_block_replaced(*inst.block, nb)},
              std::make_pair(*inst.block, nb)};
    }
    default:
      throw std::invalid_argument("axiom rules have no premises");
  }
}

}  // namespace

AppliedStep apply_tracked(const RuleInstance& inst, const Sequent& s) {
  Sequent t = resolve(s, inst.at);
  PremiseSpec spec = premise_contents(inst, t);
  AppliedStep out;
  out.block_replacement = std::move(spec.block_replacement);
  for (const auto& content : spec.contents) {
    RewriteResult rr = rewrite_at(s, inst.at, [&](const Sequent&) { return content; });
    out.premises.push_back(rr.root);
    out.path_maps.push_back(std::move(rr.path_map));
  }
  return out;
}

std::vector<Sequent> apply(const RuleInstance& inst, const Sequent& s) {
  auto step = apply_tracked(inst, s);
  return std::move(step.premises);
}

Address remap_address(const Address& addr,
                      const std::vector<std::pair<Sequent, Sequent>>& path_map) {
  Address out;
  out.reserve(addr.size());
  bool on_path = true;
  for (std::size_t i = 0; i < addr.size(); ++i) {
    if (on_path && i + 1 < path_map.size() && addr[i].child == path_map[i + 1].first) {
      out.push_back({addr[i].kind, path_map[i + 1].second});
    } else {
      on_path = false;
      out.push_back(addr[i]);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Expansion macro-steps
// ---------------------------------------------------------------------------

namespace {

const RuleId kR1Order[] = {RuleId::AndL, RuleId::AndR, RuleId::OrL, RuleId::OrR,
                           RuleId::ImpL, RuleId::BoxL, RuleId::DiaL, RuleId::DiaR};
const RuleId kR2Order[] = {RuleId::Trans, RuleId::Inter};
const RuleId kR3Order[] = {RuleId::ImpR1, RuleId::ImpR2, RuleId::BoxR};

template <std::size_t N>
std::optional<RuleInstance> first_instance_at(const RuleId (&order)[N], const Sequent& s,
                                              const Address& at) {
  const Sequent* t = try_resolve(s, at);
  if (!t) throw std::logic_error("expansion target address no longer resolves");
  Occurrence occ{at, *t, at.empty() ? OccKind::Root
                                    : (at.back().kind == BlockKind::Imp ? OccKind::Imp
                                                                        : OccKind::Modal)};
  for (RuleId r : order) {
    std::vector<RuleInstance> found;
    instances_at(r, occ, found);
    if (!found.empty()) return found.front();
  }
  return std::nullopt;
}

template <std::size_t N>
void expand(const RuleId (&order)[N], DerivationNode& leaf, const Address& t_addr,
            ExpandContext& ctx) {
  if (leaf.status != NodeStatus::Open)
    throw std::invalid_argument("expansion target is not an open leaf");
  struct Item {
    DerivationNode* node;
    Address t;
  };
  std::vector<Item> work{{&leaf, t_addr}};
  while (!work.empty()) {
    Item item = work.back();
    work.pop_back();
    DerivationNode* node = item.node;
    if (auto ax = is_axiomatic(node->seq)) {
      node->status = NodeStatus::Axiomatic;
      node->axiom = std::move(ax);
      continue;
    }
    auto inst = first_instance_at(order, node->seq, item.t);
    if (!inst) continue;  // saturated for this level at the target
    AppliedStep step = apply_tracked(*inst, node->seq);
    ++ctx.rule_applications;
    if (ctx.budget != 0 && ctx.rule_applications > ctx.budget)
      throw BudgetExceeded(ctx.rule_applications);
    node->applied = *inst;
    node->status = NodeStatus::Internal;
    if (ctx.observer) ctx.observer(node->seq, *inst, step.premises);
    for (std::size_t i = 0; i < step.premises.size(); ++i) {
      auto child = std::make_unique<DerivationNode>();
      child->seq = step.premises[i];
      ctx.max_sequent_weight = std::max(ctx.max_sequent_weight, sequent_weight(child->seq));
      Address nt = remap_address(item.t, step.path_maps[i]);
      work.push_back({child.get(), std::move(nt)});
      node->children.push_back(std::move(child));
    }
  }
}

}  // namespace

void exp1(DerivationNode& leaf, const Address& t_addr, ExpandContext& ctx) {
  expand(kR1Order, leaf, t_addr, ctx);
}

void exp2(DerivationNode& leaf, const Address& t_addr, ExpandContext& ctx) {
  expand(kR2Order, leaf, t_addr, ctx);
}

void exp3(DerivationNode& leaf, const Address& t_addr, ExpandContext& ctx) {
  expand(kR3Order, leaf, t_addr, ctx);
}

// ---------------------------------------------------------------------------
// Derivation output
// ---------------------------------------------------------------------------

namespace {

const char* status_marker(const DerivationNode& n) {
  switch (n.status) {
    case NodeStatus::Axiomatic:
      switch (n.axiom->kind) {
        case AxiomHit::Kind::BotL: return "  [axiom BotL]";
        case AxiomHit::Kind::TopR: return "  [axiom TopR]";
        case AxiomHit::Kind::Id: return "  [axiom Id]";
      }
      return "";
    case NodeStatus::Saturated: return "  [saturated]";
    case NodeStatus::Open: return "  [open]";
    case NodeStatus::Internal: return "";
  }
  return "";
}

void render_node(const DerivationNode& n, int depth, std::string& out) {
  out.append(2 * depth, ' ');
  out += render(n.seq);
  out += status_marker(n);
  out += '\n';
  if (n.applied) {
    out.append(2 * depth, ' ');
    out += "(" + n.applied->describe() + ")\n";
  }
  for (const auto& c : n.children) render_node(*c, depth + 1, out);
}

nlohmann::json node_to_json(const DerivationNode& n) {
  nlohmann::json j;
  j["sequent"] = render(n.seq);
  switch (n.status) {
    case NodeStatus::Internal: j["status"] = "internal"; break;
    case NodeStatus::Open: j["status"] = "open"; break;
    case NodeStatus::Axiomatic: j["status"] = "axiomatic"; break;
    case NodeStatus::Saturated: j["status"] = "global-saturated"; break;
  }
  if (n.applied) {
    j["rule"] = rule_name(n.applied->rule);
    if (n.applied->principal) j["principal"] = render(*n.applied->principal);
    if (n.applied->block) j["block"] = render(*n.applied->block);
    if (n.applied->block2) j["block2"] = render(*n.applied->block2);
  }
  if (n.axiom && n.axiom->witness) j["witness"] = render(*n.axiom->witness);
  auto children = nlohmann::json::array();
  for (const auto& c : n.children) children.push_back(node_to_json(*c));
  j["children"] = std::move(children);
  return j;
}

}  // namespace

std::string render_derivation(const DerivationNode& root) {
  std::string out;
  render_node(root, 0, out);
  return out;
}

std::string derivation_to_json(const DerivationNode& root) {
  return node_to_json(root).dump(2);
}

}  // namespace fik
