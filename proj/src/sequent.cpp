#include "fik/sequent.hpp"

#include <algorithm>
#include <sstream>

namespace fik {

namespace {

std::size_t hash_combine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

void sort_unique_formulas(std::vector<Formula>& fs) {
  std::sort(fs.begin(), fs.end());
  fs.erase(std::unique(fs.begin(), fs.end()), fs.end());
}

void sort_unique_sequents(std::vector<Sequent>& ss) {
  std::sort(ss.begin(), ss.end());
  ss.erase(std::unique(ss.begin(), ss.end()), ss.end());
}

bool contains_formula(const std::vector<Formula>& fs, const Formula& f) {
  return std::binary_search(fs.begin(), fs.end(), f);
}

}  // namespace

struct Sequent::Rep {
  std::vector<Formula> ante;
  Succedent succ;
  std::size_t hash = 0;
};

Sequent::Sequent() : Sequent(make({}, {})) {}

Sequent Sequent::make(std::vector<Formula> antecedent, Succedent succedent) {
  auto rep = std::make_shared<Rep>();
  sort_unique_formulas(antecedent);
  sort_unique_formulas(succedent.formulas);
  sort_unique_sequents(succedent.modal_blocks);
  sort_unique_sequents(succedent.imp_blocks);
  rep->ante = std::move(antecedent);
  rep->succ = std::move(succedent);

  std::size_t h = 0;
  for (const auto& f : rep->ante) h = hash_combine(h, f.hash());
  h = hash_combine(h, 0x515);
  for (const auto& f : rep->succ.formulas) h = hash_combine(h, f.hash());
  h = hash_combine(h, 0x5e9);
  for (const auto& s : rep->succ.modal_blocks) h = hash_combine(h, s.hash());
  h = hash_combine(h, 0x5eb);
  for (const auto& s : rep->succ.imp_blocks) h = hash_combine(h, s.hash());
  rep->hash = h;
  return Sequent(std::move(rep));
}

const std::vector<Formula>& Sequent::ante() const { return rep_->ante; }
const Succedent& Sequent::succ() const { return rep_->succ; }
std::size_t Sequent::hash() const { return rep_->hash; }

bool Sequent::ante_contains(const Formula& f) const {
  return contains_formula(rep_->ante, f);
}

bool Sequent::succ_formula_contains(const Formula& f) const {
  return contains_formula(rep_->succ.formulas, f);
}

Sequent Sequent::with_ante_added(const std::vector<Formula>& fs) const {
  std::vector<Formula> na = rep_->ante;
  na.insert(na.end(), fs.begin(), fs.end());
  return make(std::move(na), rep_->succ);
}

Sequent Sequent::with_succ_formulas_added(const std::vector<Formula>& fs) const {
  Succedent ns = rep_->succ;
  ns.formulas.insert(ns.formulas.end(), fs.begin(), fs.end());
  return make(rep_->ante, std::move(ns));
}

Sequent Sequent::with_modal_block_added(const Sequent& block) const {
  Succedent ns = rep_->succ;
  ns.modal_blocks.push_back(block);
  return make(rep_->ante, std::move(ns));
}

Sequent Sequent::with_imp_block_added(const Sequent& block) const {
  Succedent ns = rep_->succ;
  ns.imp_blocks.push_back(block);
  return make(rep_->ante, std::move(ns));
}

namespace {

void replace_in(std::vector<Sequent>& blocks, const Sequent& from, const Sequent& to) {
  auto it = std::find(blocks.begin(), blocks.end(), from);
  if (it == blocks.end()) throw std::invalid_argument("block to replace not present");
  *it = to;
}

}  // namespace

Sequent Sequent::with_modal_block_replaced(const Sequent& from, const Sequent& to) const {
  Succedent ns = rep_->succ;
  replace_in(ns.modal_blocks, from, to);
  return make(rep_->ante, std::move(ns));
}

Sequent Sequent::with_imp_block_replaced(const Sequent& from, const Sequent& to) const {
  Succedent ns = rep_->succ;
  replace_in(ns.imp_blocks, from, to);
  return make(rep_->ante, std::move(ns));
}

bool operator==(const Sequent& a, const Sequent& b) {
  if (a.rep_ == b.rep_) return true;
  if (a.hash() != b.hash()) return false;
  return compare(a, b) == 0;
}

namespace {

int compare_formula_lists(const std::vector<Formula>& a, const std::vector<Formula>& b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = compare(a[i], b[i]);
    if (c != 0) return c;
  }
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

int compare_sequent_lists(const std::vector<Sequent>& a, const std::vector<Sequent>& b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = compare(a[i], b[i]);
    if (c != 0) return c;
  }
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

}  // namespace

int compare(const Sequent& a, const Sequent& b) {
  if (a.rep_ == b.rep_) return 0;
  int c = compare_formula_lists(a.ante(), b.ante());
  if (c != 0) return c;
  c = compare_formula_lists(a.succ().formulas, b.succ().formulas);
  if (c != 0) return c;
  c = compare_sequent_lists(a.succ().modal_blocks, b.succ().modal_blocks);
  if (c != 0) return c;
  return compare_sequent_lists(a.succ().imp_blocks, b.succ().imp_blocks);
}

// ---------------------------------------------------------------------------
// Addresses
// ---------------------------------------------------------------------------

const Sequent* try_resolve(const Sequent& root, const Address& addr) {
  const Sequent* cur = &root;
  for (const auto& step : addr) {
    const auto& blocks = step.kind == BlockKind::Modal ? cur->succ().modal_blocks
                                                       : cur->succ().imp_blocks;
    auto it = std::find(blocks.begin(), blocks.end(), step.child);
    if (it == blocks.end()) return nullptr;
    cur = &*it;
  }
  return cur;
}

Sequent resolve(const Sequent& root, const Address& addr) {
  const Sequent* s = try_resolve(root, addr);
  if (!s) throw std::invalid_argument("address does not resolve in sequent");
  return *s;
}

RewriteResult rewrite_at(const Sequent& root, const Address& addr,
                         const std::function<Sequent(const Sequent&)>& fn) {
  if (addr.empty()) {
    Sequent nr = fn(root);
    return {nr, {{root, nr}}};
  }
  const auto& step = addr.front();
  Address rest(addr.begin() + 1, addr.end());
  Sequent child = [&] {
    const auto& blocks = step.kind == BlockKind::Modal ? root.succ().modal_blocks
                                                       : root.succ().imp_blocks;
    auto it = std::find(blocks.begin(), blocks.end(), step.child);
    if (it == blocks.end()) throw std::invalid_argument("address does not resolve in sequent");
    return *it;
  }();
  RewriteResult inner = rewrite_at(child, rest, fn);
  Sequent nr = step.kind == BlockKind::Modal
                   ? root.with_modal_block_replaced(child, inner.root)
                   : root.with_imp_block_replaced(child, inner.root);
  RewriteResult out;
  out.root = nr;
  out.path_map.emplace_back(root, nr);
  out.path_map.insert(out.path_map.end(), inner.path_map.begin(), inner.path_map.end());
  return out;
}

// ---------------------------------------------------------------------------
// Structural operators
// ---------------------------------------------------------------------------

Succedent star(const Succedent& delta) {
  Succedent out;
  for (const auto& m : delta.modal_blocks)
    out.modal_blocks.push_back(Sequent::make(m.ante(), star(m.succ())));
  sort_unique_sequents(out.modal_blocks);
  return out;
}

Succedent sharp(const Succedent& delta) {
  Succedent out;
  out.formulas = delta.formulas;
  for (const auto& m : delta.modal_blocks)
    out.modal_blocks.push_back(Sequent::make(m.ante(), sharp(m.succ())));
  sort_unique_sequents(out.modal_blocks);
  return out;
}

bool structurally_included(const Sequent& s1, const Sequent& s2) {
  for (const auto& f : s1.ante())
    if (!s2.ante_contains(f)) return false;
  for (const auto& m1 : s1.succ().modal_blocks) {
    bool covered = false;
    for (const auto& m2 : s2.succ().modal_blocks) {
      if (structurally_included(m1, m2)) {
        covered = true;
        break;
      }
    }
    if (!covered) return false;
  }
  return true;
}

bool block_equivalent(const Sequent& s1, const Sequent& s2) {
  if (s1.ante() != s2.ante()) return false;
  return Sequent::make({}, sharp(s1.succ())) == Sequent::make({}, sharp(s2.succ()));
}

namespace {

void collect_occurrences(const Sequent& s, Address& path, OccKind kind,
                         std::vector<Occurrence>& out) {
  out.push_back({path, s, kind});
  for (const auto& m : s.succ().modal_blocks) {
    path.push_back({BlockKind::Modal, m});
    collect_occurrences(m, path, OccKind::Modal, out);
    path.pop_back();
  }
  for (const auto& i : s.succ().imp_blocks) {
    path.push_back({BlockKind::Imp, i});
    collect_occurrences(i, path, OccKind::Imp, out);
    path.pop_back();
  }
}

}  // namespace

std::vector<Occurrence> nested_occurrences(const Sequent& s) {
  std::vector<Occurrence> out;
  Address path;
  collect_occurrences(s, path, OccKind::Root, out);
  return out;
}

bool imp_only_extension(const Address& ancestor, const Address& descendant) {
  if (descendant.size() <= ancestor.size()) return false;
  for (std::size_t i = 0; i < ancestor.size(); ++i) {
    if (ancestor[i].kind != descendant[i].kind ||
        ancestor[i].child != descendant[i].child)
      return false;
  }
  for (std::size_t i = ancestor.size(); i < descendant.size(); ++i)
    if (descendant[i].kind != BlockKind::Imp) return false;
  return true;
}

int seq_modal_degree(const Sequent& s) {
  int md = 0;
  for (const auto& f : s.ante()) md = std::max(md, modal_degree(f));
  for (const auto& f : s.succ().formulas) md = std::max(md, modal_degree(f));
  for (const auto& m : s.succ().modal_blocks) md = std::max(md, seq_modal_degree(m) + 1);
  for (const auto& i : s.succ().imp_blocks) md = std::max(md, seq_modal_degree(i));
  return md;
}

ModalTree modal_tree(const Sequent& s) {
  ModalTree t{s, {}};
  for (const auto& m : s.succ().modal_blocks) t.children.push_back(modal_tree(m));
  return t;
}

int modal_tree_height(const ModalTree& t) {
  int h = 0;
  for (const auto& c : t.children) h = std::max(h, modal_tree_height(c) + 1);
  return h;
}

std::size_t sequent_weight(const Sequent& s) {
  std::size_t w = 0;
  for (const auto& f : s.ante()) w += static_cast<std::size_t>(formula_size(f));
  for (const auto& f : s.succ().formulas) w += static_cast<std::size_t>(formula_size(f));
  for (const auto& m : s.succ().modal_blocks) w += 1 + sequent_weight(m);
  for (const auto& i : s.succ().imp_blocks) w += 1 + sequent_weight(i);
  return w;
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

namespace {

void render_entries(const Succedent& d, std::string& out) {
  bool first = true;
  auto sep = [&] {
    if (!first) out += ", ";
    first = false;
  };
  for (const auto& f : d.formulas) {
    sep();
    out += render(f);
  }
  for (const auto& m : d.modal_blocks) {
    sep();
    out += "[" + render(m) + "]";
  }
  for (const auto& i : d.imp_blocks) {
    sep();
    out += "<" + render(i) + ">";
  }
}

}  // namespace

std::string render(const Sequent& s) {
  std::string out;
  bool first = true;
  for (const auto& f : s.ante()) {
    if (!first) out += ", ";
    first = false;
    out += render(f);
  }
  out += first ? "=>" : " =>";
  std::string rhs;
  render_entries(s.succ(), rhs);
  if (!rhs.empty()) out += " " + rhs;
  return out;
}

std::string render_succedent(const Succedent& d) {
  std::string out;
  render_entries(d, out);
  return out;
}

}  // namespace fik
