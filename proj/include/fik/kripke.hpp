#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fik/formula.hpp"
#include "fik/sequent.hpp"

namespace fik {

/// Finite bi-relational model (W, <=, R, V). Relations are stored as row
/// bitmasks: bit y of leq[x] means x <= y. At most 32 worlds.
struct Model {
  std::vector<std::string> worlds;              // names, index-aligned
  std::vector<std::uint32_t> leq;               // pre-order rows
  std::vector<std::uint32_t> acc;               // accessibility rows
  std::vector<std::vector<std::string>> val;    // sorted atoms per world

  int world_count() const { return static_cast<int>(worlds.size()); }
  int world_index(const std::string& name) const;  // -1 when absent
  bool has_atom(int w, const std::string& atom) const;
  std::uint32_t full_mask() const { return world_count() == 32 ? ~0u : (1u << world_count()) - 1u; }
};

struct Violation {
  enum class Kind { NotReflexive, NotTransitive, NonHereditary, ForwardConfluence };
  Kind kind;
  int x = -1, y = -1, z = -1;
  std::string atom;
  std::string describe(const Model& m) const;
};

/// Empty iff the model is a pre-order with hereditary valuation satisfying
/// forward confluence. Violations are data, not errors.
std::vector<Violation> validate_model(const Model& m);

/// Worlds forcing f, as a bitmask, computed bottom-up over subformulas.
/// Implication and box quantify over <=-successors; diamond is a local
/// existential over R.
std::uint32_t forcing_mask(const Model& m, const Formula& f);

bool forces(const Model& m, int world, const Formula& f);  // throws std::out_of_range

std::uint32_t sequent_mask(const Model& m, const Sequent& s);
bool forces_sequent(const Model& m, int world, const Sequent& s);

/// Extended forcing for a standalone succedent: true iff some entry holds.
bool forces_succedent(const Model& m, int world, const Succedent& d);

bool valid_in_model(const Model& m, const Formula& f);

/// Deterministic stream of every valid model with up to max_worlds worlds
/// over the given atoms. World labels are fixed 0..n-1; relation bitmasks
/// and valuation masks are iterated in numeric order and invalid structures
/// filtered out. No isomorphism reduction.
class ModelEnumerator {
 public:
  ModelEnumerator(int max_worlds, std::vector<std::string> atoms);
  std::optional<Model> next();

 private:
  bool advance();
  bool leq_valid() const;
  bool fc_valid() const;
  bool val_valid() const;
  Model build() const;

  int max_worlds_;
  std::vector<std::string> atoms_;
  int n_ = 1;
  std::uint64_t leq_ = 0;   // candidate relation bitmask over n*n bits
  std::uint64_t acc_ = 0;
  std::uint64_t val_ = 0;   // atom a occupies bits [a*n, (a+1)*n)
  bool fresh_ = true;
  bool done_ = false;
};

/// First enumerated (model, world) refuting f, scanning models over the
/// atoms of f with up to max_worlds worlds; world index is minor order.
/// Absence does not prove validity.
std::optional<std::pair<Model, int>> find_countermodel_bruteforce(const Formula& f,
                                                                  int max_worlds);

}  // namespace fik
