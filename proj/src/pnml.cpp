// PNML loading on top of expat, collecting the elements this library
// understands and ignoring everything else.

#include <expat.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "galign/error.hpp"
#include "galign/petri_net.hpp"

namespace galign {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::optional<std::string> attribute(const XML_Char** atts, std::string_view name) {
  for (int i = 0; atts[i] != nullptr; i += 2) {
    if (name == atts[i]) return std::string(atts[i + 1]);
  }
  return std::nullopt;
}

// Strips a namespace prefix ("pnml:place" -> "place").
std::string_view local_name(const XML_Char* name) {
  std::string_view n(name);
  auto colon = n.rfind(':');
  return colon == std::string_view::npos ? n : n.substr(colon + 1);
}

struct PlaceRecord {
  std::string id;
  std::string marking_text;
  bool has_marking = false;
};

struct TransitionRecord {
  std::string id;
  std::string label;
  bool has_label = false;
  // Set when a toolspecific element states visibility explicitly.
  std::optional<bool> tagged_invisible;
};

struct ArcRecord {
  std::string id;
  std::string source;
  std::string target;
  std::string inscription;
};

struct FinalRecord {
  std::string place;
  std::string text;
};

class PnmlHandler {
 public:
  static void start(void* user, const XML_Char* name, const XML_Char** atts) {
    static_cast<PnmlHandler*>(user)->on_start(name, atts);
  }
  static void end(void* user, const XML_Char* name) {
    static_cast<PnmlHandler*>(user)->on_end(name);
  }
  static void chars(void* user, const XML_Char* s, int len) {
    static_cast<PnmlHandler*>(user)->text_.append(s, static_cast<std::size_t>(len));
  }

  std::vector<PlaceRecord> places;
  std::vector<TransitionRecord> transitions;
  std::vector<ArcRecord> arcs;
  std::vector<FinalRecord> finals;
  int net_count = 0;
  std::optional<Error> failure;

 private:
  bool inside(std::string_view tag) const {
    return std::find(stack_.begin(), stack_.end(), tag) != stack_.end();
  }

  void fail(ErrorCode code, std::string subject, std::string detail) {
    if (!failure) failure.emplace(code, std::move(subject), detail);
  }

  void on_start(const XML_Char* raw, const XML_Char** atts) {
    const std::string tag(local_name(raw));
    stack_.push_back(tag);
    text_.clear();
    if (failure) return;

    if (tag == "net") {
      ++net_count;
    } else if (tag == "place" && inside("finalmarkings")) {
      auto idref = attribute(atts, "idref");
      if (!idref) return fail(ErrorCode::MalformedDocument, "finalmarkings", "place without idref");
      finals.push_back({*idref, {}});
    } else if (tag == "place") {
      auto id = attribute(atts, "id");
      if (!id) return fail(ErrorCode::MalformedDocument, "place", "missing id attribute");
      places.push_back({*id, {}, false});
    } else if (tag == "transition") {
      auto id = attribute(atts, "id");
      if (!id) return fail(ErrorCode::MalformedDocument, "transition", "missing id attribute");
      transitions.push_back({*id, {}, false, std::nullopt});
    } else if (tag == "arc") {
      auto id = attribute(atts, "id");
      auto src = attribute(atts, "source");
      auto dst = attribute(atts, "target");
      if (!src || !dst) {
        return fail(ErrorCode::MalformedDocument, id.value_or("arc"),
                    "arc without source/target");
      }
      arcs.push_back({id.value_or(*src + "->" + *dst), *src, *dst, {}});
    } else if (tag == "toolspecific" && stack_.size() >= 2 &&
               stack_[stack_.size() - 2] == "transition") {
      auto activity = attribute(atts, "activity");
      if (activity) transitions.back().tagged_invisible = (*activity == "$invisible$");
    }
  }

  void on_end(const XML_Char* raw) {
    const std::string_view tag = local_name(raw);
    if (!failure && tag == "text") {
      // stack_: ..., owner, wrapper, text
      if (stack_.size() >= 3) {
        const std::string& wrapper = stack_[stack_.size() - 2];
        const std::string& owner = stack_[stack_.size() - 3];
        if (owner == "transition" && wrapper == "name") {
          transitions.back().label = trim(text_);
          transitions.back().has_label = true;
        } else if (owner == "place" && wrapper == "initialMarking" &&
                   !inside("finalmarkings")) {
          places.back().marking_text = trim(text_);
          places.back().has_marking = true;
        } else if (owner == "arc" && wrapper == "inscription") {
          arcs.back().inscription = trim(text_);
        } else if (wrapper == "place" && inside("finalmarkings")) {
          finals.back().text = trim(text_);
        }
      }
    }
    stack_.pop_back();
    text_.clear();
  }

  std::vector<std::string> stack_;
  std::string text_;
};

struct ParserDeleter {
  void operator()(XML_ParserStruct* p) const { XML_ParserFree(p); }
};

std::optional<long> parse_count(const std::string& text) {
  if (text.empty() || !std::all_of(text.begin(), text.end(), ::isdigit)) {
    return std::nullopt;
  }
  try {
    return std::stol(text);
  } catch (const std::out_of_range&) {
    return std::nullopt;
  }
}

}  // namespace

PetriNet parse_pnml(std::string_view document) {
  std::unique_ptr<XML_ParserStruct, ParserDeleter> parser(XML_ParserCreate(nullptr));
  PnmlHandler handler;
  XML_SetUserData(parser.get(), &handler);
  XML_SetElementHandler(parser.get(), &PnmlHandler::start, &PnmlHandler::end);
  XML_SetCharacterDataHandler(parser.get(), &PnmlHandler::chars);
  if (XML_Parse(parser.get(), document.data(), static_cast<int>(document.size()),
                XML_TRUE) == XML_STATUS_ERROR) {
    std::ostringstream where;
    where << "line " << XML_GetCurrentLineNumber(parser.get());
    throw Error(ErrorCode::MalformedDocument, where.str(),
                XML_ErrorString(XML_GetErrorCode(parser.get())));
  }
  if (handler.failure) throw *handler.failure;
  if (handler.net_count != 1) {
    throw Error(ErrorCode::MalformedDocument, "net",
                "expected exactly one <net>, found " + std::to_string(handler.net_count));
  }

  std::vector<std::string> places;
  std::vector<std::string> initial;
  for (const auto& p : handler.places) {
    places.push_back(p.id);
    if (!p.has_marking) continue;
    auto count = parse_count(p.marking_text);
    if (!count) {
      throw Error(ErrorCode::MalformedDocument, p.id,
                  "initial marking '" + p.marking_text + "' is not a count");
    }
    if (*count > 1) {
      throw Error(ErrorCode::InvariantViolation, p.id,
                  "initial marking must be a single token");
    }
    if (*count == 1) initial.push_back(p.id);
  }
  if (initial.size() != 1) {
    throw Error(ErrorCode::InvariantViolation,
                initial.empty() ? std::string("initialMarking") : initial[1],
                "expected exactly one initially marked place, found " +
                    std::to_string(initial.size()));
  }

  std::vector<Transition> transitions;
  for (const auto& t : handler.transitions) {
    std::string label = t.has_label ? t.label : t.id;
    bool visible = t.tagged_invisible ? !*t.tagged_invisible
                                      : label.rfind("INVISIBLE", 0) != 0;
    transitions.push_back({t.id, std::move(label), visible});
  }

  std::vector<Arc> arcs;
  for (const auto& a : handler.arcs) {
    if (!a.inscription.empty()) {
      auto weight = parse_count(a.inscription);
      if (!weight) {
        throw Error(ErrorCode::MalformedDocument, a.id,
                    "arc inscription '" + a.inscription + "' is not a count");
      }
      if (*weight != 1) {
        throw Error(ErrorCode::InvariantViolation, a.id, "arc weight must be 1");
      }
    }
    arcs.emplace_back(a.source, a.target);
  }

  std::string final_place;
  std::vector<std::string> declared_final;
  for (const auto& f : handler.finals) {
    auto count = parse_count(f.text);
    if (count && *count > 0) declared_final.push_back(f.place);
  }
  if (declared_final.size() > 1) {
    throw Error(ErrorCode::InvariantViolation, declared_final[1],
                "final marking must be a single place");
  }
  if (declared_final.size() == 1) {
    final_place = declared_final.front();
  } else {
    // Fall back to the unique sink place.
    std::vector<bool> has_out(places.size(), false);
    for (const auto& [src, _] : arcs) {
      auto it = std::find(places.begin(), places.end(), src);
      if (it != places.end()) has_out[static_cast<std::size_t>(it - places.begin())] = true;
    }
    std::vector<std::string> sinks;
    for (std::size_t i = 0; i < places.size(); ++i) {
      if (!has_out[i]) sinks.push_back(places[i]);
    }
    if (sinks.size() != 1) {
      throw Error(ErrorCode::InvariantViolation, sinks.empty() ? "net" : sinks[1],
                  "cannot determine a unique final place (" +
                      std::to_string(sinks.size()) + " sink places)");
    }
    final_place = sinks.front();
  }

  return PetriNet::build(std::move(places), std::move(transitions), std::move(arcs),
                         initial.front(), final_place);
}

PetriNet load_net_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, path, "cannot open net file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string content = buffer.str();
  const auto first = content.find_first_not_of(" \t\r\n\xEF\xBB\xBF");
  if (first != std::string::npos && content[first] == '{') return parse_net_json(content);
  return parse_pnml(content);
}

}  // namespace galign
