#include <nlohmann/json.hpp>

#include "galign/error.hpp"
#include "galign/petri_net.hpp"

namespace galign {

using nlohmann::json;

namespace {

const json& require(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw Error(ErrorCode::MalformedDocument, key, "missing key");
  return *it;
}

std::string require_string(const json& v, const std::string& what) {
  if (!v.is_string()) throw Error(ErrorCode::MalformedDocument, what, "expected a string");
  return v.get<std::string>();
}

}  // namespace

PetriNet parse_net_json(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::MalformedDocument, "json", e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::MalformedDocument, "json", "expected an object");

  std::vector<std::string> places;
  const json& jplaces = require(doc, "places");
  if (!jplaces.is_array()) throw Error(ErrorCode::MalformedDocument, "places", "expected an array");
  for (const auto& p : jplaces) places.push_back(require_string(p, "places"));

  std::vector<Transition> transitions;
  const json& jtrans = require(doc, "transitions");
  if (!jtrans.is_array()) {
    throw Error(ErrorCode::MalformedDocument, "transitions", "expected an array");
  }
  for (const auto& t : jtrans) {
    if (!t.is_object()) throw Error(ErrorCode::MalformedDocument, "transitions", "expected objects");
    Transition tr;
    tr.id = require_string(require(t, "id"), "transitions.id");
    tr.label = t.contains("label") ? require_string(t["label"], tr.id) : tr.id;
    if (t.contains("visible")) {
      if (!t["visible"].is_boolean()) {
        throw Error(ErrorCode::MalformedDocument, tr.id, "'visible' must be a boolean");
      }
      tr.visible = t["visible"].get<bool>();
    } else {
      tr.visible = tr.label.rfind("INVISIBLE", 0) != 0;
    }
    transitions.push_back(std::move(tr));
  }

  std::vector<Arc> arcs;
  const json& jarcs = require(doc, "arcs");
  if (!jarcs.is_array()) throw Error(ErrorCode::MalformedDocument, "arcs", "expected an array");
  for (const auto& a : jarcs) {
    if (!a.is_array() || a.size() != 2) {
      throw Error(ErrorCode::MalformedDocument, "arcs", "each arc must be [source, target]");
    }
    arcs.emplace_back(require_string(a[0], "arcs"), require_string(a[1], "arcs"));
  }

  return PetriNet::build(std::move(places), std::move(transitions), std::move(arcs),
                         require_string(require(doc, "initial"), "initial"),
                         require_string(require(doc, "final"), "final"));
}

std::string render_net_json(const PetriNet& net) {
  json doc;
  doc["places"] = net.places();
  doc["transitions"] = json::array();
  for (const auto& t : net.transitions()) {
    doc["transitions"].push_back({{"id", t.id}, {"label", t.label}, {"visible", t.visible}});
  }
  doc["arcs"] = json::array();
  for (const auto& [src, dst] : net.arcs()) doc["arcs"].push_back({src, dst});
  doc["initial"] = net.initial_place();
  doc["final"] = net.final_place();
  return doc.dump(2);
}

}  // namespace galign
