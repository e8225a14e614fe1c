#include "fik/kripke.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace fik {

int Model::world_index(const std::string& name) const {
  for (int i = 0; i < world_count(); ++i)
    if (worlds[i] == name) return i;
  return -1;
}

bool Model::has_atom(int w, const std::string& atom) const {
  const auto& v = val[w];
  return std::binary_search(v.begin(), v.end(), atom);
}

std::string Violation::describe(const Model& m) const {
  std::ostringstream os;
  auto w = [&](int i) { return i >= 0 ? m.worlds[i] : std::string("?"); };
  switch (kind) {
    case Kind::NotReflexive:
      os << "pre-order not reflexive at " << w(x);
      break;
    case Kind::NotTransitive:
      os << "pre-order not transitive: " << w(x) << " <= " << w(y) << " <= " << w(z)
         << " but not " << w(x) << " <= " << w(z);
      break;
    case Kind::NonHereditary:
      os << "valuation not hereditary: " << w(x) << " <= " << w(y) << " but '" << atom
         << "' holds only below";
      break;
    case Kind::ForwardConfluence:
      os << "forward confluence fails: " << w(z) << " <= " << w(x) << ", R " << w(z) << " "
         << w(y) << ", but no t with R " << w(x) << " t and " << w(y) << " <= t";
      break;
  }
  return os.str();
}

std::vector<Violation> validate_model(const Model& m) {
  std::vector<Violation> out;
  int n = m.world_count();
  for (int x = 0; x < n; ++x)
    if (!(m.leq[x] >> x & 1u))
      out.push_back({Violation::Kind::NotReflexive, x, -1, -1, {}});
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (!(m.leq[x] >> y & 1u)) continue;
      // x <= y: require row(y) subset of row(x)
      std::uint32_t missing = m.leq[y] & ~m.leq[x];
      for (int z = 0; z < n; ++z)
        if (missing >> z & 1u)
          out.push_back({Violation::Kind::NotTransitive, x, y, z, {}});
    }
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (x == y || !(m.leq[x] >> y & 1u)) continue;
      for (const auto& atom : m.val[x])
        if (!m.has_atom(y, atom))
          out.push_back({Violation::Kind::NonHereditary, x, y, -1, atom});
    }
  // (FC): z <= x and R z y imply some t with R x t and y <= t.
  for (int z = 0; z < n; ++z)
    for (int y = 0; y < n; ++y) {
      if (!(m.acc[z] >> y & 1u)) continue;
      std::uint32_t up_y = 0;
      for (int t = 0; t < n; ++t)
        if (m.leq[y] >> t & 1u) up_y |= 1u << t;
      for (int x = 0; x < n; ++x) {
        if (!(m.leq[z] >> x & 1u)) continue;
        if ((m.acc[x] & up_y) == 0)
          out.push_back({Violation::Kind::ForwardConfluence, x, y, z, {}});
      }
    }
  return out;
}

namespace {

std::uint32_t atom_mask(const Model& m, const std::string& name) {
  std::uint32_t mask = 0;
  for (int w = 0; w < m.world_count(); ++w)
    if (m.has_atom(w, name)) mask |= 1u << w;
  return mask;
}

}  // namespace

std::uint32_t forcing_mask(const Model& m, const Formula& f) {
  int n = m.world_count();
  std::uint32_t full = m.full_mask();
  switch (f.kind()) {
    case Conn::Atom:
      return atom_mask(m, f.atom_name());
    case Conn::Bot:
      return 0;
    case Conn::Top:
      return full;
    case Conn::And:
      return forcing_mask(m, f.left()) & forcing_mask(m, f.right());
    case Conn::Or:
      return forcing_mask(m, f.left()) | forcing_mask(m, f.right());
    case Conn::Imp: {
      std::uint32_t ok = ~forcing_mask(m, f.left()) | forcing_mask(m, f.right());
      std::uint32_t out = 0;
      for (int w = 0; w < n; ++w)
        if ((m.leq[w] & ~ok) == 0) out |= 1u << w;
      return out;
    }
    case Conn::Box: {
      std::uint32_t body = forcing_mask(m, f.left());
      std::uint32_t locally = 0;  // worlds whose R-successors all force body
      for (int w = 0; w < n; ++w)
        if ((m.acc[w] & ~body) == 0) locally |= 1u << w;
      std::uint32_t out = 0;
      for (int w = 0; w < n; ++w)
        if ((m.leq[w] & ~locally) == 0) out |= 1u << w;
      return out;
    }
    case Conn::Dia: {
      std::uint32_t body = forcing_mask(m, f.left());
      std::uint32_t out = 0;
      for (int w = 0; w < n; ++w)
        if (m.acc[w] & body) out |= 1u << w;
      return out;
    }
  }
  return 0;
}

namespace {

void check_world(const Model& m, int world) {
  if (world < 0 || world >= m.world_count())
    throw std::out_of_range("unknown world index " + std::to_string(world));
}

}  // namespace

bool forces(const Model& m, int world, const Formula& f) {
  check_world(m, world);
  return forcing_mask(m, f) >> world & 1u;
}

namespace {

std::uint32_t succedent_mask(const Model& m, const Succedent& d) {
  int n = m.world_count();
  std::uint32_t out = 0;  // the empty succedent is never forced
  for (const auto& f : d.formulas) out |= forcing_mask(m, f);
  for (const auto& blk : d.modal_blocks) {
    std::uint32_t inner = sequent_mask(m, blk);
    for (int w = 0; w < n; ++w)
      if ((m.acc[w] & ~inner) == 0) out |= 1u << w;
  }
  for (const auto& blk : d.imp_blocks) {
    std::uint32_t inner = sequent_mask(m, blk);
    for (int w = 0; w < n; ++w)
      if ((m.leq[w] & ~inner) == 0) out |= 1u << w;
  }
  return out;
}

}  // namespace

std::uint32_t sequent_mask(const Model& m, const Sequent& s) {
  std::uint32_t unforced_lhs = 0;
  for (const auto& f : s.ante()) unforced_lhs |= ~forcing_mask(m, f);
  return (unforced_lhs & m.full_mask()) | succedent_mask(m, s.succ());
}

bool forces_sequent(const Model& m, int world, const Sequent& s) {
  check_world(m, world);
  return sequent_mask(m, s) >> world & 1u;
}

bool forces_succedent(const Model& m, int world, const Succedent& d) {
  check_world(m, world);
  return succedent_mask(m, d) >> world & 1u;
}

bool valid_in_model(const Model& m, const Formula& f) {
  return forcing_mask(m, f) == m.full_mask();
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

ModelEnumerator::ModelEnumerator(int max_worlds, std::vector<std::string> atoms)
    : max_worlds_(max_worlds), atoms_(std::move(atoms)) {
  if (max_worlds_ < 1) throw std::invalid_argument("max_worlds must be >= 1");
  if (max_worlds_ > 5) throw std::invalid_argument("enumeration beyond 5 worlds is not supported");
  std::sort(atoms_.begin(), atoms_.end());
  atoms_.erase(std::unique(atoms_.begin(), atoms_.end()), atoms_.end());
  if (static_cast<std::size_t>(max_worlds_) * atoms_.size() > 62)
    throw std::invalid_argument("too many atoms for exhaustive enumeration");
}

bool ModelEnumerator::advance() {
  // Odometer over (n, leq, acc, val), val fastest. Callers fast-forward
  // whole sub-ranges by setting the lower counters to their maxima.
  if (fresh_) {
    fresh_ = false;
    return true;
  }
  std::uint64_t val_limit = 1ull << (static_cast<std::uint64_t>(n_) * atoms_.size());
  std::uint64_t rel_limit = 1ull << (static_cast<std::uint64_t>(n_) * n_);
  if (++val_ < val_limit) return true;
  val_ = 0;
  if (++acc_ < rel_limit) return true;
  acc_ = 0;
  if (++leq_ < rel_limit) return true;
  leq_ = 0;
  if (++n_ <= max_worlds_) return true;
  done_ = true;
  return false;
}

bool ModelEnumerator::leq_valid() const {
  int n = n_;
  auto rel = [n](std::uint64_t bits, int x, int y) {
    return bits >> (x * n + y) & 1u;
  };
  for (int x = 0; x < n; ++x)
    if (!rel(leq_, x, x)) return false;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (!rel(leq_, x, y)) continue;
      for (int z = 0; z < n; ++z)
        if (rel(leq_, y, z) && !rel(leq_, x, z)) return false;
    }
  return true;
}

bool ModelEnumerator::fc_valid() const {
  int n = n_;
  auto rel = [n](std::uint64_t bits, int x, int y) {
    return bits >> (x * n + y) & 1u;
  };
  for (int z = 0; z < n; ++z)
    for (int y = 0; y < n; ++y) {
      if (!rel(acc_, z, y)) continue;
      for (int x = 0; x < n; ++x) {
        if (!rel(leq_, z, x)) continue;
        bool ok = false;
        for (int t = 0; t < n && !ok; ++t)
          if (rel(acc_, x, t) && rel(leq_, y, t)) ok = true;
        if (!ok) return false;
      }
    }
  return true;
}

bool ModelEnumerator::val_valid() const {
  int n = n_;
  auto rel = [n](std::uint64_t bits, int x, int y) {
    return bits >> (x * n + y) & 1u;
  };
  // hereditary valuation: every atom extension is an up-set
  for (std::size_t a = 0; a < atoms_.size(); ++a) {
    for (int x = 0; x < n; ++x) {
      if (!(val_ >> (a * n + x) & 1u)) continue;
      for (int y = 0; y < n; ++y)
        if (rel(leq_, x, y) && !(val_ >> (a * n + y) & 1u)) return false;
    }
  }
  return true;
}

Model ModelEnumerator::build() const {
  Model m;
  int n = n_;
  for (int i = 0; i < n; ++i) m.worlds.push_back("w" + std::to_string(i));
  m.leq.assign(n, 0);
  m.acc.assign(n, 0);
  m.val.assign(n, {});
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (leq_ >> (x * n + y) & 1u) m.leq[x] |= 1u << y;
      if (acc_ >> (x * n + y) & 1u) m.acc[x] |= 1u << y;
    }
  for (int x = 0; x < n; ++x)
    for (std::size_t a = 0; a < atoms_.size(); ++a)
      if (val_ >> (a * n + x) & 1u) m.val[x].push_back(atoms_[a]);
  return m;
}

std::optional<Model> ModelEnumerator::next() {
  while (!done_) {
    if (!advance()) break;
    std::uint64_t val_limit = 1ull << (static_cast<std::uint64_t>(n_) * atoms_.size());
    std::uint64_t rel_limit = 1ull << (static_cast<std::uint64_t>(n_) * n_);
    if (!leq_valid()) {  // skip the whole (acc, val) block
      acc_ = rel_limit - 1;
      val_ = val_limit - 1;
      continue;
    }
    if (!fc_valid()) {  // skip the whole val block
      val_ = val_limit - 1;
      continue;
    }
    if (val_valid()) return build();
  }
  return std::nullopt;
}

std::optional<std::pair<Model, int>> find_countermodel_bruteforce(const Formula& f,
                                                                  int max_worlds) {
  ModelEnumerator en(max_worlds, atoms_of(f));
  while (auto m = en.next()) {
    std::uint32_t mask = forcing_mask(*m, f);
    std::uint32_t full = m->full_mask();
    if (mask != full) {
      for (int w = 0; w < m->world_count(); ++w)
        if (!(mask >> w & 1u)) return std::make_pair(std::move(*m), w);
    }
  }
  return std::nullopt;
}

}  // namespace fik
