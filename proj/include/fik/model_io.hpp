#pragma once

#include <string>

#include <json.hpp>

#include "fik/kripke.hpp"

namespace fik {

/// Model document format:
///   {
///     "worlds": ["a", "b"],
///     "leq":    [["a","a"], ["a","b"], ["b","b"]],
///     "r":      [["a","b"]],
///     "val":    {"b": ["p"]}
///   }
/// Reflexive leq pairs may be omitted when close_leq is set, in which case
/// the reflexive closure is applied before any validation. Transitivity is
/// never repaired.
Model model_from_json(const nlohmann::json& doc, bool close_leq = false);
nlohmann::json model_to_json(const Model& m);

Model load_model_file(const std::string& path, bool close_leq = false);
void save_model_file(const Model& m, const std::string& path);

}  // namespace fik
