#include "fik/hilbert.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace fik {

const std::vector<AxiomSchema>& axiom_schemas() {
  static const std::vector<AxiomSchema> schemas = [] {
    auto P = Formula::atom("p");
    auto Q = Formula::atom("q");
    auto R = Formula::atom("r");
    using F = Formula;
    std::vector<AxiomSchema> v;
    v.push_back({SchemaId::IPL1, F::imp(P, F::imp(Q, P))});
    v.push_back({SchemaId::IPL2,
                 F::imp(F::imp(P, F::imp(Q, R)), F::imp(F::imp(P, Q), F::imp(P, R)))});
    v.push_back({SchemaId::IPL3, F::imp(F::conj(P, Q), P)});
    v.push_back({SchemaId::IPL4, F::imp(F::conj(P, Q), Q)});
    v.push_back({SchemaId::IPL5, F::imp(P, F::imp(Q, F::conj(P, Q)))});
    v.push_back({SchemaId::IPL6, F::imp(P, F::disj(P, Q))});
    v.push_back({SchemaId::IPL7, F::imp(Q, F::disj(P, Q))});
    v.push_back({SchemaId::IPL8,
                 F::imp(F::imp(P, R), F::imp(F::imp(Q, R), F::imp(F::disj(P, Q), R)))});
    v.push_back({SchemaId::IPL9, F::imp(F::bot(), P)});
    v.push_back({SchemaId::IPL10, F::top()});
    v.push_back({SchemaId::KBox,
                 F::imp(F::box(F::imp(P, Q)), F::imp(F::box(P), F::box(Q)))});
    v.push_back({SchemaId::KDia,
                 F::imp(F::box(F::imp(P, Q)), F::imp(F::dia(P), F::dia(Q)))});
    v.push_back({SchemaId::N, F::neg(F::dia(F::bot()))});
    v.push_back({SchemaId::DP,
                 F::imp(F::dia(F::disj(P, Q)), F::disj(F::dia(P), F::dia(Q)))});
    v.push_back({SchemaId::WCD,
                 F::imp(F::box(F::disj(P, Q)),
                        F::imp(F::imp(F::dia(P), F::box(Q)), F::box(Q)))});
    return v;
  }();
  return schemas;
}

std::string schema_name(SchemaId id) {
  switch (id) {
    case SchemaId::IPL1: return "IPL1";
    case SchemaId::IPL2: return "IPL2";
    case SchemaId::IPL3: return "IPL3";
    case SchemaId::IPL4: return "IPL4";
    case SchemaId::IPL5: return "IPL5";
    case SchemaId::IPL6: return "IPL6";
    case SchemaId::IPL7: return "IPL7";
    case SchemaId::IPL8: return "IPL8";
    case SchemaId::IPL9: return "IPL9";
    case SchemaId::IPL10: return "IPL10";
    case SchemaId::KBox: return "K_box";
    case SchemaId::KDia: return "K_dia";
    case SchemaId::N: return "N";
    case SchemaId::DP: return "DP";
    case SchemaId::WCD: return "wCD";
  }
  return "?";
}

std::optional<SchemaId> schema_from_name(const std::string& name) {
  for (const auto& s : axiom_schemas())
    if (schema_name(s.id) == name) return s.id;
  return std::nullopt;
}

Formula apply_substitution(const Formula& shape, const Substitution& subst) {
  switch (shape.kind()) {
    case Conn::Atom: {
      auto it = subst.find(shape.atom_name());
      return it != subst.end() ? it->second : shape;
    }
    case Conn::Bot:
    case Conn::Top:
      return shape;
    case Conn::Box:
      return Formula::box(apply_substitution(shape.left(), subst));
    case Conn::Dia:
      return Formula::dia(apply_substitution(shape.left(), subst));
    case Conn::And:
      return Formula::conj(apply_substitution(shape.left(), subst),
                           apply_substitution(shape.right(), subst));
    case Conn::Or:
      return Formula::disj(apply_substitution(shape.left(), subst),
                           apply_substitution(shape.right(), subst));
    case Conn::Imp:
      return Formula::imp(apply_substitution(shape.left(), subst),
                          apply_substitution(shape.right(), subst));
  }
  return shape;
}

namespace {

// First-order matching over schematic atoms: every atom of the shape may
// bind to any formula, consistently across occurrences.
bool match_rec(const Formula& shape, const Formula& target, Substitution& subst) {
  if (shape.is(Conn::Atom)) {
    auto [it, inserted] = subst.try_emplace(shape.atom_name(), target);
    return inserted || it->second == target;
  }
  if (shape.kind() != target.kind()) return false;
  switch (shape.kind()) {
    case Conn::Bot:
    case Conn::Top:
      return true;
    case Conn::Box:
    case Conn::Dia:
      return match_rec(shape.left(), target.left(), subst);
    default:
      return match_rec(shape.left(), target.left(), subst) &&
             match_rec(shape.right(), target.right(), subst);
  }
}

}  // namespace

std::optional<std::pair<SchemaId, Substitution>> match_axiom(const Formula& f) {
  for (const auto& schema : axiom_schemas()) {
    Substitution subst;
    if (match_rec(schema.shape, f, subst)) return std::make_pair(schema.id, subst);
  }
  return std::nullopt;
}

CheckOutcome check_derivation(const Derivation& d) {
  for (std::size_t i = 0; i < d.steps.size(); ++i) {
    const Step& step = d.steps[i];
    int index = static_cast<int>(i) + 1;
    auto fail = [&](const std::string& why) {
      return CheckOutcome{false, index, why};
    };
    auto in_range = [&](int j) { return j >= 1 && j <= static_cast<int>(i); };
    if (const auto* ax = std::get_if<AxiomJust>(&step.just)) {
      const auto& schemas = axiom_schemas();
      auto it = std::find_if(schemas.begin(), schemas.end(),
                             [&](const AxiomSchema& s) { return s.id == ax->schema; });
      if (it == schemas.end()) return fail("unknown schema");
      if (apply_substitution(it->shape, ax->subst) != step.formula)
        return fail("formula is not the stated instance of " + schema_name(ax->schema));
    } else if (const auto* mp = std::get_if<MpJust>(&step.just)) {
      if (!in_range(mp->minor) || !in_range(mp->major))
        return fail("mp premise index out of range");
      const Formula& minor = d.steps[mp->minor - 1].formula;
      const Formula& major = d.steps[mp->major - 1].formula;
      if (!major.is(Conn::Imp) || major.left() != minor || major.right() != step.formula)
        return fail("mp premises do not yield this formula");
    } else {
      const auto& nec = std::get<NecJust>(step.just);
      if (!in_range(nec.from)) return fail("nec premise index out of range");
      if (step.formula != Formula::box(d.steps[nec.from - 1].formula))
        return fail("nec premise does not yield this formula");
    }
  }
  return {true, 0, {}};
}

// ---------------------------------------------------------------------------
// Derivation file parsing
// ---------------------------------------------------------------------------

namespace {

[[noreturn]] void line_error(int line_no, const std::string& why) {
  throw std::runtime_error("derivation line " + std::to_string(line_no) + ": " + why);
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

Substitution parse_substitution(const std::string& text, int line_no) {
  Substitution subst;
  std::string body = trim(text);
  if (body.empty() || body.front() != '{' || body.back() != '}')
    line_error(line_no, "expected a {p := FORMULA, ...} substitution");
  body = body.substr(1, body.size() - 2);
  std::size_t pos = 0;
  while (pos < body.size()) {
    // split on commas at depth zero
    int depth = 0;
    std::size_t end = pos;
    while (end < body.size() && (depth > 0 || body[end] != ',')) {
      if (body[end] == '(') ++depth;
      if (body[end] == ')') --depth;
      ++end;
    }
    std::string item = trim(body.substr(pos, end - pos));
    if (!item.empty()) {
      std::size_t eq = item.find(":=");
      if (eq == std::string::npos) line_error(line_no, "substitution item without ':='");
      std::string var = trim(item.substr(0, eq));
      std::string rhs = trim(item.substr(eq + 2));
      try {
        subst.emplace(var, parse_formula(rhs));
      } catch (const ParseError& e) {
        line_error(line_no, std::string("bad substitution formula: ") + e.what());
      }
    }
    pos = end + 1;
  }
  return subst;
}

}  // namespace

Derivation parse_derivation(const std::string& text) {
  Derivation d;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  int expected_index = 1;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::size_t dot = t.find('.');
    if (dot == std::string::npos) line_error(line_no, "missing 'INDEX.' prefix");
    int index = 0;
    try {
      index = std::stoi(t.substr(0, dot));
    } catch (...) {
      line_error(line_no, "bad step index");
    }
    if (index != expected_index)
      line_error(line_no, "expected step index " + std::to_string(expected_index));
    ++expected_index;
    std::size_t semi = t.find(';', dot);
    if (semi == std::string::npos) line_error(line_no, "missing ';' before justification");
    std::string formula_text = trim(t.substr(dot + 1, semi - dot - 1));
    std::string just_text = trim(t.substr(semi + 1));
    Formula f = [&] {
      try {
        return parse_formula(formula_text);
      } catch (const ParseError& e) {
        line_error(line_no, std::string("bad formula: ") + e.what());
      }
    }();
    std::istringstream js(just_text);
    std::string kw;
    js >> kw;
    if (kw == "ax") {
      std::string name;
      js >> name;
      auto id = schema_from_name(name);
      if (!id) line_error(line_no, "unknown schema '" + name + "'");
      std::string rest;
      std::getline(js, rest);
      Substitution subst;
      if (!trim(rest).empty()) subst = parse_substitution(rest, line_no);
      d.steps.push_back({std::move(f), AxiomJust{*id, std::move(subst)}});
    } else if (kw == "mp") {
      int i = 0, j = 0;
      if (!(js >> i >> j)) line_error(line_no, "mp needs two indices");
      d.steps.push_back({std::move(f), MpJust{i, j}});
    } else if (kw == "nec") {
      int i = 0;
      if (!(js >> i)) line_error(line_no, "nec needs one index");
      d.steps.push_back({std::move(f), NecJust{i}});
    } else {
      line_error(line_no, "unknown justification '" + kw + "'");
    }
  }
  return d;
}

Derivation load_derivation_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open derivation file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_derivation(buf.str());
}

}  // namespace fik
