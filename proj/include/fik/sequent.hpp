#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "fik/formula.hpp"

namespace fik {

class Sequent;

enum class BlockKind : std::uint8_t { Imp, Modal };

/// Right-hand side of a sequent: formulas plus nested blocks, kept in
/// canonical order (formulas, then modal blocks, then implication blocks;
/// each group sorted and deduplicated).
struct Succedent {
  std::vector<Formula> formulas;
  std::vector<Sequent> modal_blocks;
  std::vector<Sequent> imp_blocks;
};

/// Set-based bi-nested sequent Γ => Δ. Immutable and cheap to copy;
/// all "mutators" return a fresh sequent with the change applied and
/// canonical form restored.
class Sequent {
 public:
  Sequent();  // the empty sequent  =>
  static Sequent make(std::vector<Formula> antecedent, Succedent succedent);

  const std::vector<Formula>& ante() const;
  const Succedent& succ() const;

  bool ante_contains(const Formula& f) const;
  bool succ_formula_contains(const Formula& f) const;

  Sequent with_ante_added(const std::vector<Formula>& fs) const;
  Sequent with_succ_formulas_added(const std::vector<Formula>& fs) const;
  Sequent with_modal_block_added(const Sequent& block) const;
  Sequent with_imp_block_added(const Sequent& block) const;
  Sequent with_modal_block_replaced(const Sequent& from, const Sequent& to) const;
  Sequent with_imp_block_replaced(const Sequent& from, const Sequent& to) const;

  std::size_t hash() const;

  friend bool operator==(const Sequent& a, const Sequent& b);
  friend bool operator!=(const Sequent& a, const Sequent& b) { return !(a == b); }
  friend int compare(const Sequent& a, const Sequent& b);

 private:
  struct Rep;
  explicit Sequent(std::shared_ptr<const Rep> r) : rep_(std::move(r)) {}
  std::shared_ptr<const Rep> rep_;
};

int compare(const Sequent& a, const Sequent& b);
inline bool operator<(const Sequent& a, const Sequent& b) { return compare(a, b) < 0; }

// ---------------------------------------------------------------------------
// Addresses: a path of (block kind, block content) steps from the root.
// Block contents are unique per kind within one succedent (set semantics),
// so content is a stable child key.
// ---------------------------------------------------------------------------

struct AddressStep {
  BlockKind kind;
  Sequent child;
};
inline bool operator==(const AddressStep& a, const AddressStep& b) {
  return a.kind == b.kind && a.child == b.child;
}
using Address = std::vector<AddressStep>;

const Sequent* try_resolve(const Sequent& root, const Address& addr);
Sequent resolve(const Sequent& root, const Address& addr);  // throws std::invalid_argument

/// Replaces the sequent at `addr` by fn(old) and rebuilds the spine.
/// path_map records (old content, new content) per level, outermost first,
/// starting with the root pair.
struct RewriteResult {
  Sequent root;
  std::vector<std::pair<Sequent, Sequent>> path_map;
};
RewriteResult rewrite_at(const Sequent& root, const Address& addr,
                         const std::function<Sequent(const Sequent&)>& fn);

// ---------------------------------------------------------------------------
// Structural operators
// ---------------------------------------------------------------------------

/// Keeps only modal blocks, recursively starred; drops all formulas and
/// implication blocks.
Succedent star(const Succedent& delta);

/// Removes implication blocks at every depth; keeps formulas and modal
/// blocks (recursively sharped).
Succedent sharp(const Succedent& delta);

/// Antecedent containment plus recursive modal-block coverage; succedent
/// formulas and implication blocks are ignored. Reflexive and transitive.
bool structurally_included(const Sequent& s1, const Sequent& s2);

/// Equal antecedents and equal sharped succedents.
bool block_equivalent(const Sequent& s1, const Sequent& s2);

enum class OccKind : std::uint8_t { Root, Imp, Modal };

struct Occurrence {
  Address addr;
  Sequent seq;
  OccKind kind;  // kind of the last step into this occurrence
};

/// Every nested sequent of s (including s itself), in deterministic
/// pre-order: the occurrence first, then its modal blocks, then its
/// implication blocks, each group in canonical order.
std::vector<Occurrence> nested_occurrences(const Sequent& s);

/// True when every step of the path from ancestor to descendant passes
/// through implication blocks only (and the path is nonempty).
bool imp_only_extension(const Address& ancestor, const Address& descendant);

int seq_modal_degree(const Sequent& s);

struct ModalTree {
  Sequent node;
  std::vector<ModalTree> children;
};
ModalTree modal_tree(const Sequent& s);
int modal_tree_height(const ModalTree& t);

/// Symbol-count measure used for size-envelope sanity checks: formula
/// sizes summed over all nesting levels plus one per block.
std::size_t sequent_weight(const Sequent& s);

std::string render(const Sequent& s);
std::string render_succedent(const Succedent& d);

}  // namespace fik
