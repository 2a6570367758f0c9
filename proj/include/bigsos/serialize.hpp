#pragma once

#include <string>

#include <json.hpp>

#include "bigsos/engine.hpp"

namespace bigsos {

using Json = nlohmann::ordered_json;

/// PartialStream: null or {"label", "next"}; LTS: {label: [terms]};
/// weighted: {label: {term: weight}}. An infinite weight is the string "inf".
Json value_json(const BehaviourValue& v);
/// One-line rendering, e.g. `{a: [sigma(c)]}` or `1 -> ones` or `_`.
std::string value_text(const Value<std::string>& v);
std::string value_text(const BehaviourValue& v);

Json report_json(const ConvergenceReport& r);
Json model_json(const Model& m, const ConvergenceReport& r);
std::string model_text(const Model& m, const ConvergenceReport& r);
/// Graphviz rendering of an LTS model; throws Error for other kinds.
std::string model_dot(const Model& m);

Json tree_json(const UnfoldTree& t);
std::string tree_text(const UnfoldTree& t);

Json label_json(const Label& l);

}  // namespace bigsos
