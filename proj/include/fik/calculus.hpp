#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fik/sequent.hpp"

namespace fik {

// Rules of the set-based cumulative calculus. ImpR1/ImpR2 split the
// right-implication rule on whether the antecedent already holds A;
// BotL/TopR/Id are the axioms and are never applied backward.
enum class RuleId : std::uint8_t {
  BotL, TopR, Id,
  AndL, AndR, OrL, OrR, ImpL, ImpR1, ImpR2, BoxL, BoxR, DiaL, DiaR,
  Trans, Inter,
};

std::string rule_name(RuleId r);

bool is_r1_rule(RuleId r);
bool is_r2_rule(RuleId r);
bool is_r3_rule(RuleId r);

/// One backward rule application: the nested occurrence played as the
/// context hole, plus the principal formula and/or blocks consumed.
struct RuleInstance {
  RuleId rule;
  Address at;
  std::optional<Formula> principal;    // logical rules; empty for Trans/Inter
  std::optional<Sequent> block;        // BoxL/DiaR: modal target; Trans/Inter: imp block
  std::optional<Sequent> block2;       // Inter: modal block
  std::string describe() const;
};

struct AxiomHit {
  enum class Kind { BotL, TopR, Id };
  Kind kind;
  Address addr;
  std::optional<Formula> witness;  // the shared formula for Id
};

/// Present iff some nested occurrence has bot in its antecedent, top among
/// its succedent formulas, or shares a formula (of any shape) between the
/// two sides.
std::optional<AxiomHit> is_axiomatic(const Sequent& s);

/// Exactly the non-redundant instances of the rule anywhere in s: those
/// whose saturation condition is violated at their address. Deterministic
/// order: occurrence pre-order, then principal, then target block.
std::vector<RuleInstance> applicable(RuleId rule, const Sequent& s);

/// Premises of the instance (1 or 2), in left-to-right order.
std::vector<Sequent> apply(const RuleInstance& inst, const Sequent& s);

/// apply() plus bookkeeping: the rewritten path per premise (for address
/// remapping) and, for block-targeting rules, the (old block, new block)
/// pair inside the target occurrence. Lets callers track occurrences and
/// blocks across the step.
struct AppliedStep {
  std::vector<Sequent> premises;
  std::vector<std::vector<std::pair<Sequent, Sequent>>> path_maps;  // per premise
  std::optional<std::pair<Sequent, Sequent>> block_replacement;     // BoxL/DiaR/Trans/Inter
};
AppliedStep apply_tracked(const RuleInstance& inst, const Sequent& s);

/// Maps an address through the rewritten path of one premise.
Address remap_address(const Address& addr,
                      const std::vector<std::pair<Sequent, Sequent>>& path_map);

// Saturation levels. All three expect a non-axiomatic sequent.
bool r1_saturated(const Sequent& t);
bool r2_saturated(const Sequent& t);
bool r3_saturated(const Sequent& t);

/// The blocker's address when the occurrence at t_addr is block-equivalent
/// to an R3-saturated strict ancestor reachable through implication blocks
/// only.
std::optional<Address> blocked(const Address& t_addr, const Sequent& s);

// Global saturation: quantifies the level over every nested occurrence,
// treating blocked occurrences as satisfied.
bool global_r1_saturated(const Sequent& s);
bool global_r2_saturated(const Sequent& s);
bool global_saturated(const Sequent& s);

enum class NodeStatus : std::uint8_t { Internal, Open, Axiomatic, Saturated };

struct DerivationNode {
  Sequent seq;
  NodeStatus status = NodeStatus::Open;
  std::optional<RuleInstance> applied;  // rule producing the children
  std::optional<AxiomHit> axiom;        // when Axiomatic
  std::vector<std::unique_ptr<DerivationNode>> children;
};

/// Observer invoked on every rule application: conclusion, instance,
/// premises. Used for statistics, tracing, and test instrumentation.
using RuleObserver =
    std::function<void(const Sequent&, const RuleInstance&, const std::vector<Sequent>&)>;

struct ExpandContext {
  std::uint64_t budget = 0;            // 0 = unlimited
  std::uint64_t rule_applications = 0;
  std::size_t max_sequent_weight = 0;
  RuleObserver observer;
};

struct BudgetExceeded : std::runtime_error {
  explicit BudgetExceeded(std::uint64_t steps)
      : std::runtime_error("step budget exceeded after " + std::to_string(steps) +
                           " rule applications") {}
};

/// Expansion macro-steps. Each extends the open leaf by applying its
/// level's rules non-redundantly at the occurrence t_addr until the
/// corresponding saturation condition holds for t's image in every
/// produced leaf (or the leaf closes as an axiom).
///   exp1: basic rules     exp2: trans/inter     exp3: box-right/imp-right
void exp1(DerivationNode& leaf, const Address& t_addr, ExpandContext& ctx);
void exp2(DerivationNode& leaf, const Address& t_addr, ExpandContext& ctx);
void exp3(DerivationNode& leaf, const Address& t_addr, ExpandContext& ctx);

std::string render_derivation(const DerivationNode& root);
std::string derivation_to_json(const DerivationNode& root);

}  // namespace fik
