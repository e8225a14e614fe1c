#include "fik/formula.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace fik {

namespace {

std::size_t hash_combine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

Formula Formula::atom(std::string name) {
  if (name.empty()) throw std::invalid_argument("atom name must be nonempty");
  auto n = std::make_shared<Node>();
  n->kind = Conn::Atom;
  n->name = std::move(name);
  n->hash = hash_combine(static_cast<std::size_t>(Conn::Atom),
                         std::hash<std::string>{}(n->name));
  return Formula(std::move(n));
}

Formula Formula::bot() {
  static const Formula f = [] {
    auto n = std::make_shared<Node>();
    n->kind = Conn::Bot;
    n->hash = hash_combine(static_cast<std::size_t>(Conn::Bot), 0x42);
    return Formula(std::move(n));
  }();
  return f;
}

Formula Formula::top() {
  static const Formula f = [] {
    auto n = std::make_shared<Node>();
    n->kind = Conn::Top;
    n->hash = hash_combine(static_cast<std::size_t>(Conn::Top), 0x24);
    return Formula(std::move(n));
  }();
  return f;
}

Formula Formula::conj(Formula l, Formula r) {
  auto n = std::make_shared<Node>();
  n->kind = Conn::And;
  n->hash = hash_combine(hash_combine(static_cast<std::size_t>(Conn::And), l.hash()), r.hash());
  n->lhs = std::move(l.node_);
  n->rhs = std::move(r.node_);
  return Formula(std::move(n));
}

Formula Formula::disj(Formula l, Formula r) {
  auto n = std::make_shared<Node>();
  n->kind = Conn::Or;
  n->hash = hash_combine(hash_combine(static_cast<std::size_t>(Conn::Or), l.hash()), r.hash());
  n->lhs = std::move(l.node_);
  n->rhs = std::move(r.node_);
  return Formula(std::move(n));
}

Formula Formula::imp(Formula l, Formula r) {
  auto n = std::make_shared<Node>();
  n->kind = Conn::Imp;
  n->hash = hash_combine(hash_combine(static_cast<std::size_t>(Conn::Imp), l.hash()), r.hash());
  n->lhs = std::move(l.node_);
  n->rhs = std::move(r.node_);
  return Formula(std::move(n));
}

Formula Formula::box(Formula b) {
  auto n = std::make_shared<Node>();
  n->kind = Conn::Box;
  n->hash = hash_combine(static_cast<std::size_t>(Conn::Box), b.hash());
  n->lhs = std::move(b.node_);
  return Formula(std::move(n));
}

Formula Formula::dia(Formula b) {
  auto n = std::make_shared<Node>();
  n->kind = Conn::Dia;
  n->hash = hash_combine(static_cast<std::size_t>(Conn::Dia), b.hash());
  n->lhs = std::move(b.node_);
  return Formula(std::move(n));
}

Formula Formula::iff(Formula l, Formula r) {
  return conj(imp(l, r), imp(r, l));
}

const std::string& Formula::atom_name() const {
  if (node_->kind != Conn::Atom) throw std::logic_error("atom_name on non-atom");
  return node_->name;
}

Formula Formula::left() const {
  if (!node_->lhs) throw std::logic_error("left() on a leaf formula");
  return Formula(node_->lhs);
}

Formula Formula::right() const {
  if (!node_->rhs) throw std::logic_error("right() on a non-binary formula");
  return Formula(node_->rhs);
}

bool operator==(const Formula& a, const Formula& b) {
  return compare(a, b) == 0;
}

int compare(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return 0;
  if (a.kind() != b.kind())
    return static_cast<int>(a.kind()) < static_cast<int>(b.kind()) ? -1 : 1;
  switch (a.kind()) {
    case Conn::Bot:
    case Conn::Top:
      return 0;
    case Conn::Atom:
      return a.node_->name.compare(b.node_->name);
    case Conn::Box:
    case Conn::Dia:
      return compare(a.left(), b.left());
    default: {
      int c = compare(a.left(), b.left());
      if (c != 0) return c;
      return compare(a.right(), b.right());
    }
  }
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

ParseError::ParseError(std::string msg, std::size_t ofs, std::vector<std::string> exp)
    : std::runtime_error(std::move(msg)), offset(ofs), expected(std::move(exp)) {}

namespace {

struct Parser {
  std::string_view text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool eat(std::string_view tok) {
    skip_ws();
    if (text.substr(pos, tok.size()) == tok) {
      pos += tok.size();
      return true;
    }
    return false;
  }

  // "<->" must not be swallowed by "<" of "<>", and "->" is two chars;
  // peeking is done longest-first where it matters.
  bool peek(std::string_view tok) {
    skip_ws();
    return text.substr(pos, tok.size()) == tok;
  }

  [[noreturn]] void fail(const std::string& what, std::vector<std::string> expected) {
    skip_ws();
    std::ostringstream os;
    os << "syntax error at byte " << pos << ": " << what;
    throw ParseError(os.str(), pos, std::move(expected));
  }

  static const std::vector<std::string>& formula_start() {
    static const std::vector<std::string> kStart = {
        "atom", "'bot'", "'top'", "'('", "'~'", "'[]'", "'<>'"};
    return kStart;
  }

  Formula parse_iff() {
    Formula lhs = parse_imp();
    if (peek("<->")) {
      eat("<->");
      Formula rhs = parse_iff();
      return Formula::iff(std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  Formula parse_imp() {
    Formula lhs = parse_or();
    if (peek("->")) {
      eat("->");
      Formula rhs = parse_imp();
      return Formula::imp(std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  Formula parse_or() {
    Formula lhs = parse_and();
    skip_ws();
    if (peek("\\/")) {
      eat("\\/");
      return Formula::disj(std::move(lhs), parse_or());
    }
    if (peek("|")) {
      eat("|");
      return Formula::disj(std::move(lhs), parse_or());
    }
    return lhs;
  }

  Formula parse_and() {
    Formula lhs = parse_unary();
    if (peek("&")) {
      eat("&");
      return Formula::conj(std::move(lhs), parse_and());
    }
    return lhs;
  }

  Formula parse_unary() {
    skip_ws();
    if (eat("~")) return Formula::neg(parse_unary());
    if (eat("[]")) return Formula::box(parse_unary());
    // Guard: "<->" here would be a stray infix operator, not a diamond.
    if (peek("<>")) {
      eat("<>");
      return Formula::dia(parse_unary());
    }
    return parse_primary();
  }

  Formula parse_primary() {
    skip_ws();
    if (eat("(")) {
      Formula f = parse_iff();
      skip_ws();
      if (!eat(")")) fail("unbalanced parenthesis", {"')'"});
      return f;
    }
    if (pos < text.size() && text[pos] >= 'a' && text[pos] <= 'z') {
      std::size_t start = pos;
      ++pos;
      while (pos < text.size() &&
             ((text[pos] >= 'a' && text[pos] <= 'z') ||
              (text[pos] >= '0' && text[pos] <= '9') || text[pos] == '_'))
        ++pos;
      std::string name(text.substr(start, pos - start));
      if (name == "bot") return Formula::bot();
      if (name == "top") return Formula::top();
      return Formula::atom(std::move(name));
    }
    fail("expected a formula", formula_start());
  }

  Formula parse_all() {
    Formula f = parse_iff();
    skip_ws();
    if (pos != text.size())
      fail("trailing input", {"end of input", "'&'", "'\\/'", "'->'", "'<->'"});
    return f;
  }
};

}  // namespace

Formula parse_formula(std::string_view text) {
  Parser p{text};
  return p.parse_all();
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

namespace {

// Precedence: -> is 1, \/ is 2, & is 3, prefix operators 4, leaves 5.
// All binary operators render right-associatively.
int prec(const Formula& f) {
  switch (f.kind()) {
    case Conn::Imp:
      return f.right().is(Conn::Bot) ? 4 : 1;  // A -> bot prints as ~A
    case Conn::Or:
      return 2;
    case Conn::And:
      return 3;
    case Conn::Box:
    case Conn::Dia:
      return 4;
    default:
      return 5;
  }
}

void render_rec(const Formula& f, int min_prec, std::string& out) {
  int p = prec(f);
  bool parens = p < min_prec;
  if (parens) out += '(';
  switch (f.kind()) {
    case Conn::Atom:
      out += f.atom_name();
      break;
    case Conn::Bot:
      out += "bot";
      break;
    case Conn::Top:
      out += "top";
      break;
    case Conn::And:
      render_rec(f.left(), 4, out);
      out += " & ";
      render_rec(f.right(), 3, out);
      break;
    case Conn::Or:
      render_rec(f.left(), 3, out);
      out += " \\/ ";
      render_rec(f.right(), 2, out);
      break;
    case Conn::Imp:
      if (f.right().is(Conn::Bot)) {
        out += '~';
        render_rec(f.left(), 4, out);
      } else {
        render_rec(f.left(), 2, out);
        out += " -> ";
        render_rec(f.right(), 1, out);
      }
      break;
    case Conn::Box:
      out += "[]";
      render_rec(f.left(), 4, out);
      break;
    case Conn::Dia:
      out += "<>";
      render_rec(f.left(), 4, out);
      break;
  }
  if (parens) out += ')';
}

}  // namespace

std::string render(const Formula& f) {
  std::string out;
  render_rec(f, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// Measures
// ---------------------------------------------------------------------------

int modal_degree(const Formula& f) {
  switch (f.kind()) {
    case Conn::Atom:
    case Conn::Bot:
    case Conn::Top:
      return 0;
    case Conn::Box:
    case Conn::Dia:
      return modal_degree(f.left()) + 1;
    default:
      return std::max(modal_degree(f.left()), modal_degree(f.right()));
  }
}

int formula_size(const Formula& f) {
  switch (f.kind()) {
    case Conn::Atom:
    case Conn::Bot:
    case Conn::Top:
      return 1;
    case Conn::Box:
    case Conn::Dia:
      return 1 + formula_size(f.left());
    default:
      return 1 + formula_size(f.left()) + formula_size(f.right());
  }
}

namespace {

void collect_subformulas(const Formula& f, std::set<Formula>& out) {
  if (!out.insert(f).second) return;
  switch (f.kind()) {
    case Conn::Atom:
    case Conn::Bot:
    case Conn::Top:
      return;
    case Conn::Box:
    case Conn::Dia:
      collect_subformulas(f.left(), out);
      return;
    default:
      collect_subformulas(f.left(), out);
      collect_subformulas(f.right(), out);
      return;
  }
}

void collect_atoms(const Formula& f, std::set<std::string>& out) {
  switch (f.kind()) {
    case Conn::Atom:
      out.insert(f.atom_name());
      return;
    case Conn::Bot:
    case Conn::Top:
      return;
    case Conn::Box:
    case Conn::Dia:
      collect_atoms(f.left(), out);
      return;
    default:
      collect_atoms(f.left(), out);
      collect_atoms(f.right(), out);
      return;
  }
}

}  // namespace

std::vector<Formula> subformulas(const Formula& f) {
  std::set<Formula> acc;
  collect_subformulas(f, acc);
  return {acc.begin(), acc.end()};
}

std::vector<std::string> atoms_of(const Formula& f) {
  std::set<std::string> acc;
  collect_atoms(f, acc);
  return {acc.begin(), acc.end()};
}

}  // namespace fik
