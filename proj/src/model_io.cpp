#include "fik/model_io.hpp"

#include <algorithm>
#include <fstream>

namespace fik {

using nlohmann::json;

namespace {

int require_world(const Model& m, const std::string& name, const char* where) {
  int i = m.world_index(name);
  if (i < 0)
    throw std::runtime_error(std::string("model document: unknown world '") + name +
                             "' in " + where);
  return i;
}

}  // namespace

Model model_from_json(const json& doc, bool close_leq) {
  if (!doc.is_object()) throw std::runtime_error("model document: expected an object");
  Model m;
  for (const auto& w : doc.at("worlds")) m.worlds.push_back(w.get<std::string>());
  if (m.worlds.empty()) throw std::runtime_error("model document: empty world set");
  if (m.worlds.size() > 32) throw std::runtime_error("model document: more than 32 worlds");
  {
    auto sorted = m.worlds;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw std::runtime_error("model document: duplicate world name");
  }
  int n = m.world_count();
  m.leq.assign(n, 0);
  m.acc.assign(n, 0);
  m.val.assign(n, {});
  for (const auto& pair : doc.at("leq")) {
    int a = require_world(m, pair.at(0).get<std::string>(), "leq");
    int b = require_world(m, pair.at(1).get<std::string>(), "leq");
    m.leq[a] |= 1u << b;
  }
  for (const auto& pair : doc.at("r")) {
    int a = require_world(m, pair.at(0).get<std::string>(), "r");
    int b = require_world(m, pair.at(1).get<std::string>(), "r");
    m.acc[a] |= 1u << b;
  }
  if (doc.contains("val")) {
    for (auto it = doc.at("val").begin(); it != doc.at("val").end(); ++it) {
      int w = require_world(m, it.key(), "val");
      for (const auto& atom : it.value()) m.val[w].push_back(atom.get<std::string>());
      std::sort(m.val[w].begin(), m.val[w].end());
      m.val[w].erase(std::unique(m.val[w].begin(), m.val[w].end()), m.val[w].end());
    }
  }
  if (close_leq)
    for (int i = 0; i < n; ++i) m.leq[i] |= 1u << i;
  return m;
}

json model_to_json(const Model& m) {
  json doc;
  doc["worlds"] = m.worlds;
  json leq = json::array();
  json r = json::array();
  int n = m.world_count();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (m.leq[x] >> y & 1u) leq.push_back({m.worlds[x], m.worlds[y]});
      if (m.acc[x] >> y & 1u) r.push_back({m.worlds[x], m.worlds[y]});
    }
  doc["leq"] = std::move(leq);
  doc["r"] = std::move(r);
  json val = json::object();
  for (int x = 0; x < n; ++x)
    if (!m.val[x].empty()) val[m.worlds[x]] = m.val[x];
  doc["val"] = std::move(val);
  return doc;
}

Model load_model_file(const std::string& path, bool close_leq) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  json doc = json::parse(in);
  return model_from_json(doc, close_leq);
}

void save_model_file(const Model& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model file: " + path);
  out << model_to_json(m).dump(2) << "\n";
}

}  // namespace fik
