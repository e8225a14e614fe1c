#include "fik/countermodel.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include <json.hpp>

#include "fik/model_io.hpp"

namespace fik {

namespace {

void run_frame_checks(ExtractionReport& r) {
  auto violations = validate_model(r.model);
  auto fill = [&](ExtractionReport::Check& c, std::initializer_list<Violation::Kind> kinds) {
    c.ran = true;
    c.pass = true;
    for (const auto& v : violations) {
      if (std::find(kinds.begin(), kinds.end(), v.kind) != kinds.end()) {
        c.pass = false;
        if (!c.detail.empty()) c.detail += "; ";
        c.detail += v.describe(r.model);
      }
    }
  };
  fill(r.preorder, {Violation::Kind::NotReflexive, Violation::Kind::NotTransitive});
  fill(r.hereditary, {Violation::Kind::NonHereditary});
  fill(r.forward_confluence, {Violation::Kind::ForwardConfluence});
}

}  // namespace

ExtractionReport extract_model(const Sequent& leaf) {
  if (!global_saturated(leaf))
    throw std::invalid_argument("countermodel extraction requires a global-saturated leaf");

  ExtractionReport r;
  auto occs = nested_occurrences(leaf);

  // Deduplicate occurrence contents, first appearance (pre-order) wins.
  std::map<Sequent, int> index_of;
  for (const auto& occ : occs) {
    auto it = index_of.find(occ.seq);
    int idx;
    if (it == index_of.end()) {
      idx = static_cast<int>(r.world_sequents.size());
      index_of.emplace(occ.seq, idx);
      r.world_sequents.push_back(occ.seq);
    } else {
      idx = it->second;
    }
    r.world_index.emplace_back(occ.addr, idx);
  }

  int n = static_cast<int>(r.world_sequents.size());
  r.model.worlds.reserve(n);
  for (int i = 0; i < n; ++i) r.model.worlds.push_back("x" + std::to_string(i));
  r.model.leq.assign(n, 0);
  r.model.acc.assign(n, 0);
  r.model.val.assign(n, {});

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      if (structurally_included(r.world_sequents[i], r.world_sequents[j]))
        r.model.leq[i] |= 1u << j;
    for (const auto& blk : r.world_sequents[i].succ().modal_blocks)
      r.model.acc[i] |= 1u << index_of.at(blk);
    for (const auto& f : r.world_sequents[i].ante())
      if (f.is(Conn::Atom)) r.model.val[i].push_back(f.atom_name());
    std::sort(r.model.val[i].begin(), r.model.val[i].end());
  }

  r.root_world = 0;  // the root occurrence is first in pre-order
  run_frame_checks(r);
  return r;
}

bool verify_countermodel(ExtractionReport& r, const Formula& goal) {
  run_frame_checks(r);

  auto& tl = r.truth_lemma;
  tl.ran = true;
  tl.pass = true;
  tl.detail.clear();
  int n = r.model.world_count();
  for (int w = 0; w < n && tl.pass; ++w) {
    const Sequent& s = r.world_sequents[w];
    for (const auto& f : s.ante()) {
      if (!forces(r.model, w, f)) {
        tl.pass = false;
        tl.detail = "antecedent formula " + render(f) + " unforced at " + r.model.worlds[w];
        break;
      }
    }
    if (!tl.pass) break;
    for (const auto& f : s.succ().formulas) {
      if (forces(r.model, w, f)) {
        tl.pass = false;
        tl.detail = "succedent formula " + render(f) + " forced at " + r.model.worlds[w];
        break;
      }
    }
  }

  auto& rr = r.root_refutation;
  rr.ran = true;
  rr.pass = !forces(r.model, r.root_world, goal);
  if (!rr.pass)
    rr.detail = "goal " + render(goal) + " is forced at root world " +
                r.model.worlds[r.root_world];

  return r.preorder.pass && r.hereditary.pass && r.forward_confluence.pass && tl.pass &&
         rr.pass;
}

std::string model_to_dot(const ExtractionReport& r, bool elide_preorder_closure) {
  const Model& m = r.model;
  int n = m.world_count();
  std::vector<std::uint32_t> leq = m.leq;
  if (elide_preorder_closure) {
    // Drop reflexive loops, then transitively implied edges.
    for (int x = 0; x < n; ++x) leq[x] &= ~(1u << x);
    std::vector<std::uint32_t> reduced = leq;
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        if (!(leq[x] >> y & 1u)) continue;
        for (int z = 0; z < n; ++z)
          if (z != x && z != y && (leq[x] >> z & 1u) && (leq[z] >> y & 1u))
            reduced[x] &= ~(1u << y);
      }
    leq = reduced;
  }
  std::ostringstream os;
  os << "digraph countermodel {\n";
  os << "  rankdir=BT;\n";
  for (int i = 0; i < n; ++i) {
    os << "  " << m.worlds[i] << " [shape=box,label=\"" << m.worlds[i];
    if (!m.val[i].empty()) {
      os << "\\n{";
      for (std::size_t k = 0; k < m.val[i].size(); ++k) {
        if (k) os << ",";
        os << m.val[i][k];
      }
      os << "}";
    }
    os << "\"];\n";
  }
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (m.acc[x] >> y & 1u)
        os << "  " << m.worlds[x] << " -> " << m.worlds[y] << " [style=solid];\n";
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (leq[x] >> y & 1u)
        os << "  " << m.worlds[x] << " -> " << m.worlds[y] << " [style=dashed];\n";
  os << "}\n";
  return os.str();
}

std::string annotated_model_json(const ExtractionReport& r) {
  nlohmann::json doc = model_to_json(r.model);
  nlohmann::json ann = nlohmann::json::object();
  for (int i = 0; i < r.model.world_count(); ++i)
    ann[r.model.worlds[i]] = render(r.world_sequents[i]);
  doc["sequents"] = std::move(ann);
  doc["root"] = r.model.worlds[r.root_world];
  return doc.dump(2);
}

}  // namespace fik
