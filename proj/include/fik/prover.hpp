#pragma once

#include <cstdint>
#include <memory>
#include <optional>

#include "fik/calculus.hpp"
#include "fik/countermodel.hpp"

namespace fik {

struct ProveStats {
  std::uint64_t rule_applications = 0;
  std::uint64_t blocking_events = 0;  // times an occurrence was found blocked
  std::size_t max_sequent_weight = 0;
};

struct ProveOptions {
  /// Rule-application cap, diagnostic only; 0 disables it. Proof search
  /// terminates on its own, the budget just bounds runaway regressions.
  std::uint64_t step_budget = 1'000'000;

  /// Expensive self-checks: cumulative saturation persistence across every
  /// rule application, and saturation sanity of blocked occurrences.
  bool check_invariants = false;

  RuleObserver observer;
};

struct ProofResult {
  bool provable = false;
  std::unique_ptr<DerivationNode> derivation;
  ProveStats stats;

  // Unprovable payload: the first global-saturated leaf in depth-first,
  // left-premise-first order, with its extracted and verified countermodel.
  std::optional<Sequent> saturated_leaf;
  std::optional<ExtractionReport> countermodel;
};

/// Initial sequent for a goal formula: the antecedents of a top-level
/// implication chain go to the left, the final consequent to the right
/// (B1 -> ... -> Bn -> C starts from B1, ..., Bn => C). This is verdict-
/// preserving and keeps extracted countermodels at their natural size; the
/// countermodel still refutes the original goal at the root world.
Sequent initial_sequent(const Formula& goal);

/// Backward proof search in the cumulative calculus. Expands one leaf at a
/// time depth first; per leaf, applies basic rules first, then the
/// transfer/interaction rules, then the block-creating rules, re-deriving
/// saturation and blocking from the current leaf each round. Terminates on
/// every input; the step budget is a diagnostic guard only.
ProofResult prove_sequent(const Sequent& root, const ProveOptions& opts = {});

/// prove_sequent over initial_sequent(goal). On the unprovable side the
/// extracted model is verified against the original goal; a verification
/// failure is an internal error and throws std::logic_error.
ProofResult prove(const Formula& goal, const ProveOptions& opts = {});

}  // namespace fik
