#include "galign/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>

#include "galign/error.hpp"

namespace galign {

// ---- appendix-style text ------------------------------------------------

namespace {

std::string bracketed(const Sequence& row) {
  std::string out = "[";
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i != 0) out += ", ";
    out += row[i];
  }
  out += "]";
  return out;
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::optional<Sequence> parse_row(std::string_view line, std::string_view prefix) {
  const std::string t = trim(line);
  if (t.rfind(prefix, 0) != 0) return std::nullopt;
  std::string_view rest = std::string_view(t).substr(prefix.size());
  const std::string body = trim(rest);
  if (body.size() < 2 || body.front() != '[' || body.back() != ']') return std::nullopt;
  Sequence out;
  const std::string inner = trim(std::string_view(body).substr(1, body.size() - 2));
  if (inner.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = inner.find(',', start);
    out.push_back(trim(std::string_view(inner).substr(start, comma - start)));
    if (out.back().empty()) return std::nullopt;
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

std::string render_alignment_text(const AlignedPair& pair, std::string_view label) {
  std::string out;
  if (!label.empty()) {
    out += label;
    out += '\n';
  }
  out += "student: " + bracketed(pair.s1) + "\n";
  out += "normative: " + bracketed(pair.s2) + "\n";
  return out;
}

std::vector<ParsedAlignment> parse_alignment_text(std::string_view text) {
  std::vector<std::string> lines;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) lines.push_back(line);

  std::vector<ParsedAlignment> out;
  std::string label;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string t = trim(lines[i]);
    if (t.empty()) continue;
    if (t.rfind("student:", 0) != 0) {
      label = t;
      continue;
    }
    auto s1 = parse_row(t, "student:");
    if (!s1) throw Error(ErrorCode::MalformedDocument, "line " + std::to_string(i + 1), "bad student row");
    if (i + 1 >= lines.size()) {
      throw Error(ErrorCode::MalformedDocument, "line " + std::to_string(i + 1), "missing normative row");
    }
    auto s2 = parse_row(lines[i + 1], "normative:");
    if (!s2) {
      throw Error(ErrorCode::MalformedDocument, "line " + std::to_string(i + 2), "bad normative row");
    }
    if (const std::string problem = check_pair(*s1, *s2); !problem.empty()) {
      throw Error(ErrorCode::MalformedDocument, "line " + std::to_string(i + 1), problem);
    }
    ParsedAlignment pa;
    pa.label = label;
    pa.pair.s1 = std::move(*s1);
    pa.pair.s2 = std::move(*s2);
    pa.pair.matches = count_matches(pa.pair.s1, pa.pair.s2);
    pa.pair.identity = pa.pair.s1.empty() ? 0.0 : identity(pa.pair.s1, pa.pair.s2);
    out.push_back(std::move(pa));
    label.clear();
    ++i;
  }
  return out;
}

// ---- charts -------------------------------------------------------------

std::string_view to_string(ChartKind kind) {
  switch (kind) {
    case ChartKind::IdentityDumbbell: return "identity_dumbbell";
    case ChartKind::DurationDumbbell: return "duration_dumbbell";
    case ChartKind::IdentityVsDuration: return "identity_vs_duration";
  }
  return "chart";
}

std::vector<ChartSpec> default_chart_specs(int stage_count, const std::string& dir) {
  std::vector<ChartSpec> specs;
  for (ChartKind kind : {ChartKind::IdentityDumbbell, ChartKind::DurationDumbbell,
                         ChartKind::IdentityVsDuration}) {
    for (int s = 0; s <= stage_count; ++s) {
      const std::string scope = s == 0 ? "whole" : "stage_" + std::to_string(s);
      const std::string name = std::string(to_string(kind)) + "_" + scope + ".svg";
      specs.push_back({kind, s, (std::filesystem::path(dir) / name).string()});
    }
  }
  return specs;
}

namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 400;
constexpr double kLeft = 64;
constexpr double kRight = 24;
constexpr double kTop = 40;
constexpr double kBottom = 56;
constexpr const char* kDark = "#000000";
constexpr const char* kLight = "#999999";

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

struct Axis {
  double lo = 0;
  double hi = 100;
  double step = 20;
};

// Duration axis from 0 to the next multiple of 5 minutes above the data.
Axis duration_axis(double max_value) {
  Axis a;
  a.hi = std::max(5.0, std::ceil(max_value / 5.0) * 5.0);
  a.step = a.hi <= 20 ? 5 : (a.hi <= 50 ? 10 : 20);
  return a;
}

double scale(double v, const Axis& a, double from, double to) {
  return from + (v - a.lo) / (a.hi - a.lo) * (to - from);
}

class SvgWriter {
 public:
  SvgWriter(std::string_view title) {
    out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(kWidth) << "\" height=\""
         << fmt(kHeight) << "\" viewBox=\"0 0 " << fmt(kWidth) << " " << fmt(kHeight) << "\">\n";
    out_ << "<defs>\n";
    for (auto [id, color] : {std::pair{"head-dark", kDark}, std::pair{"head-light", kLight}}) {
      out_ << "<marker id=\"" << id << "\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" "
           << "markerWidth=\"6\" markerHeight=\"6\" orient=\"auto-start-reverse\">"
           << "<path d=\"M 0 0 L 10 5 L 0 10 z\" fill=\"" << color << "\"/></marker>\n";
    }
    out_ << "</defs>\n";
    out_ << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    text(kWidth / 2, 24, title, "middle", "title");
  }

  void text(double x, double y, std::string_view s, const char* anchor, const char* cls,
            const char* transform = nullptr) {
    out_ << "<text class=\"" << cls << "\" x=\"" << fmt(x) << "\" y=\"" << fmt(y)
         << "\" text-anchor=\"" << anchor << "\" font-family=\"sans-serif\" font-size=\"12\"";
    if (transform != nullptr) out_ << " transform=\"" << transform << "\"";
    out_ << ">" << xml_escape(s) << "</text>\n";
  }

  void line(double x1, double y1, double x2, double y2, const std::string& cls,
            const char* color, const char* marker = nullptr, std::string_view subject = {}) {
    out_ << "<line class=\"" << cls << "\"";
    if (!subject.empty()) out_ << " data-subject=\"" << xml_escape(subject) << "\"";
    out_ << " x1=\"" << fmt(x1) << "\" y1=\"" << fmt(y1) << "\" x2=\"" << fmt(x2) << "\" y2=\""
         << fmt(y2) << "\" stroke=\"" << color << "\" stroke-width=\"1.5\"";
    if (marker != nullptr) out_ << " marker-end=\"url(#" << marker << ")\"";
    out_ << "/>\n";
  }

  void circle(double x, double y, const std::string& cls, const char* color,
              std::string_view subject) {
    out_ << "<circle class=\"" << cls << "\" data-subject=\"" << xml_escape(subject) << "\" cx=\""
         << fmt(x) << "\" cy=\"" << fmt(y) << "\" r=\"4\" fill=\"" << color << "\"/>\n";
  }

  void y_axis(const Axis& a, std::string_view label) {
    line(kLeft, kTop, kLeft, kHeight - kBottom, "axis", kDark);
    for (double v = a.lo; v <= a.hi + 1e-9; v += a.step) {
      const double y = scale(v, a, kHeight - kBottom, kTop);
      line(kLeft - 4, y, kLeft, y, "tick", kDark);
      text(kLeft - 8, y + 4, fmt_tick(v), "end", "tick-label");
    }
    const std::string rot = "rotate(-90 16 " + fmt((kTop + kHeight - kBottom) / 2) + ")";
    text(16, (kTop + kHeight - kBottom) / 2, label, "middle", "axis-label", rot.c_str());
  }

  void x_axis_numeric(const Axis& a, std::string_view label) {
    line(kLeft, kHeight - kBottom, kWidth - kRight, kHeight - kBottom, "axis", kDark);
    for (double v = a.lo; v <= a.hi + 1e-9; v += a.step) {
      const double x = scale(v, a, kLeft, kWidth - kRight);
      line(x, kHeight - kBottom, x, kHeight - kBottom + 4, "tick", kDark);
      text(x, kHeight - kBottom + 18, fmt_tick(v), "middle", "tick-label");
    }
    text((kLeft + kWidth - kRight) / 2, kHeight - 12, label, "middle", "axis-label");
  }

  void x_axis_categories(const std::vector<double>& xs, const std::vector<std::string>& names,
                         std::string_view label) {
    line(kLeft, kHeight - kBottom, kWidth - kRight, kHeight - kBottom, "axis", kDark);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      line(xs[i], kHeight - kBottom, xs[i], kHeight - kBottom + 4, "tick", kDark);
      text(xs[i], kHeight - kBottom + 18, names[i], "middle", "tick-label");
    }
    text((kLeft + kWidth - kRight) / 2, kHeight - 12, label, "middle", "axis-label");
  }

  std::string finish() {
    out_ << "</svg>\n";
    return out_.str();
  }

 private:
  static std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
  }

  std::ostringstream out_;
};

std::optional<double> identity_of(const CaseResult& r, int stage) {
  if (stage == 0) return r.whole_identity;
  for (const auto& st : r.per_stage) {
    if (st.stage == stage) return st.identity;
  }
  throw Error(ErrorCode::UnknownStage, std::to_string(stage));
}

std::optional<double> duration_of(const CaseResult& r, int stage) {
  if (stage == 0) return r.duration_min;
  for (const auto& st : r.per_stage) {
    if (st.stage == stage) return st.duration_min;
  }
  throw Error(ErrorCode::UnknownStage, std::to_string(stage));
}

std::string scope_title(int stage) {
  return stage == 0 ? "whole process" : "stage S" + std::to_string(stage);
}

struct RoundPair {
  const CaseResult* pre = nullptr;
  const CaseResult* post = nullptr;
};

std::string render_dumbbell(const std::vector<CaseResult>& results, const ChartSpec& spec) {
  const bool is_identity = spec.kind == ChartKind::IdentityDumbbell;
  std::map<std::string, RoundPair> by_subject;
  for (const auto& r : results) {
    if (!r.round) continue;
    auto& slot = by_subject[r.subject];
    (*r.round == Round::Pre ? slot.pre : slot.post) = &r;
  }
  std::vector<std::string> subjects;
  for (const auto& [subject, pair] : by_subject) {
    if (pair.pre == nullptr || pair.post == nullptr) {
      throw Error(ErrorCode::MissingRound, subject, "dumbbell charts need pre and post");
    }
    subjects.push_back(subject);
  }
  std::sort(subjects.begin(), subjects.end(), natural_less);

  auto value = [&](const CaseResult& r) {
    return is_identity ? identity_of(r, spec.stage) : duration_of(r, spec.stage);
  };
  Axis axis;
  if (!is_identity) {
    double max_value = 0;
    for (const auto& s : subjects) {
      for (const CaseResult* r : {by_subject[s].pre, by_subject[s].post}) {
        if (auto v = value(*r)) max_value = std::max(max_value, *v);
      }
    }
    axis = duration_axis(max_value);
  }

  const std::string title = std::string(is_identity ? "Identity" : "Duration") + " pre -> post, " +
                            scope_title(spec.stage);
  SvgWriter svg(title);
  svg.y_axis(axis, is_identity ? "identity [%]" : "duration [min]");
  std::vector<double> xs;
  const double span = kWidth - kRight - kLeft;
  for (std::size_t i = 0; i < subjects.size(); ++i) {
    xs.push_back(kLeft + span * (static_cast<double>(i) + 0.5) / static_cast<double>(subjects.size()));
  }
  svg.x_axis_categories(xs, subjects, "student");
  for (std::size_t i = 0; i < subjects.size(); ++i) {
    const RoundPair& pair = by_subject[subjects[i]];
    const auto before = value(*pair.pre);
    const auto after = value(*pair.post);
    if (!before || !after) continue;
    const bool improved = is_identity ? *after >= *before : *after <= *before;
    const double y0 = scale(*before, axis, kHeight - kBottom, kTop);
    const double y1 = scale(*after, axis, kHeight - kBottom, kTop);
    const char* color = improved ? kDark : kLight;
    svg.circle(xs[i], y0, improved ? "point pre improve" : "point pre decline", color, subjects[i]);
    svg.line(xs[i], y0, xs[i], y1, improved ? "arrow improve" : "arrow decline", color,
             improved ? "head-dark" : "head-light", subjects[i]);
  }
  return svg.finish();
}

std::string render_scatter(const std::vector<CaseResult>& results, const ChartSpec& spec) {
  double max_duration = 0;
  for (const auto& r : results) {
    if (auto d = duration_of(r, spec.stage)) max_duration = std::max(max_duration, *d);
  }
  const Axis x_axis = duration_axis(max_duration);
  const Axis y_axis;
  SvgWriter svg("Identity vs duration, " + scope_title(spec.stage));
  svg.y_axis(y_axis, "identity [%]");
  svg.x_axis_numeric(x_axis, "duration [min]");

  // Pre first so post points draw on top.
  for (Round round : {Round::Pre, Round::Post}) {
    std::vector<const CaseResult*> ordered;
    for (const auto& r : results) {
      if (r.round == round) ordered.push_back(&r);
    }
    std::sort(ordered.begin(), ordered.end(), [](const CaseResult* a, const CaseResult* b) {
      return natural_less(a->subject, b->subject);
    });
    for (const CaseResult* r : ordered) {
      const auto d = duration_of(*r, spec.stage);
      const auto id = identity_of(*r, spec.stage);
      if (!d || !id) continue;
      svg.circle(scale(*d, x_axis, kLeft, kWidth - kRight), scale(*id, y_axis, kHeight - kBottom, kTop),
                 round == Round::Pre ? "point pre" : "point post",
                 round == Round::Pre ? kLight : kDark, r->subject);
    }
  }
  return svg.finish();
}

}  // namespace

std::string render_chart(const std::vector<CaseResult>& results, const ChartSpec& spec) {
  if (spec.kind == ChartKind::IdentityVsDuration) return render_scatter(results, spec);
  return render_dumbbell(results, spec);
}

std::vector<std::string> emit_charts(const std::vector<CaseResult>& results,
                                     const std::vector<ChartSpec>& specs) {
  std::vector<std::string> written;
  for (const auto& spec : specs) {
    const std::string svg = render_chart(results, spec);
    const auto parent = std::filesystem::path(spec.path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    write_text_file(spec.path, svg);
    written.push_back(spec.path);
  }
  return written;
}

// ---- palette and colored alignments ------------------------------------

Palette default_palette() {
  return {{1, "#800080"}, {2, "#1f77b4"}, {3, "#2ca02c"},
          {4, "#ff7f0e"}, {5, "#d62728"}, {6, "#ffd700"}};
}

Palette parse_palette(std::string_view document) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(document);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::MalformedDocument, "palette", e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::MalformedDocument, "palette", "expected an object");
  Palette out;
  for (const auto& [key, value] : doc.items()) {
    std::string_view k = key;
    if (!k.empty() && (k.front() == 'S' || k.front() == 's')) k.remove_prefix(1);
    int stage = 0;
    try {
      stage = std::stoi(std::string(k));
    } catch (const std::exception&) {
      throw Error(ErrorCode::MalformedDocument, key, "palette keys are stage ids");
    }
    if (!value.is_string()) throw Error(ErrorCode::MalformedDocument, key, "color must be a string");
    out[stage] = value.get<std::string>();
  }
  return out;
}

Palette palette_from_environment() {
  const char* path = std::getenv("GUIDELINE_ALIGN_PALETTE");
  if (path == nullptr || *path == '\0') return default_palette();
  return parse_palette(read_text_file(path));
}

std::string render_alignment_svg(const AlignedPair& pair, std::string_view label,
                                 const StageMap& map, const Palette& palette) {
  constexpr double cell = 26;
  constexpr double label_width = 110;
  const double width = label_width + cell * static_cast<double>(pair.length()) + 10;
  const double height = 3 * cell + 20;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\""
      << fmt(height) << "\">\n";
  out << "<text class=\"label\" x=\"4\" y=\"16\" font-family=\"sans-serif\" font-size=\"12\">"
      << xml_escape(label) << "</text>\n";
  char id_text[64];
  std::snprintf(id_text, sizeof id_text, "identity %.0f%%", pair.identity);
  out << "<text class=\"identity\" x=\"4\" y=\"32\" font-family=\"sans-serif\" font-size=\"12\">"
      << id_text << "</text>\n";
  const Sequence* rows[] = {&pair.s1, &pair.s2};
  for (int r = 0; r < 2; ++r) {
    const double y = 40 + r * cell;
    for (std::size_t i = 0; i < rows[r]->size(); ++i) {
      const std::string& sym = (*rows[r])[i];
      const double x = label_width + cell * static_cast<double>(i);
      std::string fill = "#ffffff";
      if (sym != kGap) {
        auto it = palette.find(map.stage_of_abbreviation(sym));
        fill = it != palette.end() ? it->second : "#cccccc";
      }
      out << "<rect class=\"cell\" x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\""
          << fmt(cell - 2) << "\" height=\"" << fmt(cell - 2) << "\" fill=\"" << xml_escape(fill)
          << "\"/>\n";
      out << "<text x=\"" << fmt(x + (cell - 2) / 2) << "\" y=\"" << fmt(y + 16)
          << "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"11\">"
          << xml_escape(sym) << "</text>\n";
    }
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace galign
