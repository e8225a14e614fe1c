#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fik/formula.hpp"

namespace fik {

/// Axiom schemas of the Hilbert system: a fixed ten-schema intuitionistic
/// base plus the five modal axioms. Schema shapes are formulas whose atoms
/// (p, q, r) are schematic: matching binds them to arbitrary formulas.
///
/// The intuitionistic base (a repo convention, documented in the README):
///   IPL1   p -> q -> p
///   IPL2   (p -> q -> r) -> (p -> q) -> p -> r
///   IPL3   p & q -> p
///   IPL4   p & q -> q
///   IPL5   p -> q -> p & q
///   IPL6   p -> p \/ q
///   IPL7   q -> p \/ q
///   IPL8   (p -> r) -> (q -> r) -> p \/ q -> r
///   IPL9   bot -> p
///   IPL10  top
enum class SchemaId {
  IPL1, IPL2, IPL3, IPL4, IPL5, IPL6, IPL7, IPL8, IPL9, IPL10,
  KBox, KDia, N, DP, WCD,
};

struct AxiomSchema {
  SchemaId id;
  Formula shape;
};

const std::vector<AxiomSchema>& axiom_schemas();
std::string schema_name(SchemaId id);
std::optional<SchemaId> schema_from_name(const std::string& name);

using Substitution = std::map<std::string, Formula>;

Formula apply_substitution(const Formula& shape, const Substitution& subst);

/// First schema (in declaration order) that f instantiates, with the
/// witnessing substitution.
std::optional<std::pair<SchemaId, Substitution>> match_axiom(const Formula& f);

struct AxiomJust {
  SchemaId schema;
  Substitution subst;
};
struct MpJust {
  int minor;  // 1-based index of A
  int major;  // 1-based index of A -> B
};
struct NecJust {
  int from;  // 1-based index of A, this step being []A
};

struct Step {
  Formula formula;
  std::variant<AxiomJust, MpJust, NecJust> just;
};

struct Derivation {
  std::vector<Step> steps;
};

struct CheckOutcome {
  bool ok = false;
  int first_failure = 0;  // 1-based step index, 0 when ok
  std::string reason;
};

/// Checks every step: axiom steps must equal the schema shape under the
/// given substitution; mp i j needs step j == (step i -> this); nec i needs
/// this == [] step i; justification indices must strictly precede the step.
CheckOutcome check_derivation(const Derivation& d);

/// Line format:  INDEX. FORMULA ; JUSTIFICATION
/// with justification one of
///   ax SCHEMA {p := FORMULA, q := FORMULA}
///   mp I J
///   nec I
/// Blank lines and lines starting with '#' are skipped. Indices must be
/// 1, 2, 3, ... in order.
Derivation parse_derivation(const std::string& text);
Derivation load_derivation_file(const std::string& path);

}  // namespace fik
