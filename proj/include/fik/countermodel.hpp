#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fik/calculus.hpp"
#include "fik/kripke.hpp"
#include "fik/sequent.hpp"

namespace fik {

/// Finite model read off a global-saturated leaf: worlds are the nested
/// occurrences (structurally identical contents collapse to one world),
/// <= is structural inclusion, R is direct modal-block membership, and the
/// valuation collects antecedent atoms.
struct ExtractionReport {
  Model model;
  std::vector<Sequent> world_sequents;              // index-aligned with model.worlds
  std::vector<std::pair<Address, int>> world_index;  // occurrence -> world
  int root_world = 0;

  struct Check {
    bool ran = false;
    bool pass = false;
    std::string detail;
  };
  Check preorder, hereditary, forward_confluence, truth_lemma, root_refutation;
};

/// Throws std::invalid_argument when the leaf is not global-saturated.
/// The frame checks (pre-order, hereditary, forward confluence) are run
/// immediately; truth lemma and refutation are left to verify_countermodel.
ExtractionReport extract_model(const Sequent& leaf);

/// Re-checks everything: (1) pre-order, (2) hereditary, (3) forward
/// confluence, (4) truth lemma at every world over every antecedent and
/// succedent formula, (5) the goal unforced at the root world. Returns
/// true iff all five pass; failures land in the report's check fields.
bool verify_countermodel(ExtractionReport& report, const Formula& goal);

/// DOT rendering: solid arrows for R, dashed for <=. Optionally elides
/// reflexive <= loops and transitively implied <= edges.
std::string model_to_dot(const ExtractionReport& report, bool elide_preorder_closure = false);

/// Model document plus a world -> sequent-text annotation map.
std::string annotated_model_json(const ExtractionReport& report);

}  // namespace fik
