#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fik {

// Connectives of the modal language. Negation is not a connective:
// ~A is represented as A -> bot, and A <-> B as (A -> B) & (B -> A).
enum class Conn : std::uint8_t { Atom, Bot, Top, And, Or, Imp, Box, Dia };

/// Immutable formula tree with structural equality and a canonical total
/// order. Cheap to copy (shared representation); safe to share across
/// threads once built.
class Formula {
 public:
  static Formula atom(std::string name);
  static Formula bot();
  static Formula top();
  static Formula conj(Formula lhs, Formula rhs);
  static Formula disj(Formula lhs, Formula rhs);
  static Formula imp(Formula lhs, Formula rhs);
  static Formula box(Formula body);
  static Formula dia(Formula body);

  // Sugar, expanded on construction.
  static Formula neg(Formula a) { return imp(std::move(a), bot()); }
  static Formula iff(Formula lhs, Formula rhs);

  Conn kind() const { return node_->kind; }
  bool is(Conn c) const { return node_->kind == c; }
  const std::string& atom_name() const;
  Formula left() const;
  Formula right() const;
  Formula body() const { return left(); }

  std::size_t hash() const { return node_->hash; }

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }
  friend int compare(const Formula& a, const Formula& b);

 private:
  struct Node {
    Conn kind;
    std::string name;                  // Atom only
    std::shared_ptr<const Node> lhs;   // And/Or/Imp/Box/Dia
    std::shared_ptr<const Node> rhs;   // And/Or/Imp
    std::size_t hash = 0;
  };
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  std::shared_ptr<const Node> node_;
};

/// Canonical total order on formulas (by connective rank, then contents).
/// The order is structural, so it is stable across runs.
int compare(const Formula& a, const Formula& b);
inline bool operator<(const Formula& a, const Formula& b) { return compare(a, b) < 0; }

struct ParseError : std::runtime_error {
  ParseError(std::string msg, std::size_t ofs, std::vector<std::string> exp);
  std::size_t offset;                  // byte offset into the input
  std::vector<std::string> expected;   // token categories acceptable here
};

/// Parses the ASCII concrete syntax:
///   atoms  [a-z][a-z0-9_]*       constants  bot, top
///   prefix ~  []  <>             (tightest, stack to the right)
///   infix  &   then  \/ (or |)   then  ->  (weakest, right-associative)
///   A <-> B  expands to  (A -> B) & (B -> A)
/// Throws ParseError with a byte offset and the expected-token set.
Formula parse_formula(std::string_view text);

/// Minimal-parenthesis rendering; parse_formula(render(f)) == f.
/// A -> bot renders as ~A.
std::string render(const Formula& f);

int modal_degree(const Formula& f);
int formula_size(const Formula& f);

/// All subformulas of f including f itself, as a sorted set.
std::vector<Formula> subformulas(const Formula& f);

/// Atom names occurring in f, sorted, unique.
std::vector<std::string> atoms_of(const Formula& f);

}  // namespace fik
