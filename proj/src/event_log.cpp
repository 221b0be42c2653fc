#include "galign/event_log.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "galign/csv.hpp"
#include "galign/error.hpp"

namespace galign {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool read_int(std::string_view text, std::size_t& pos, std::size_t digits, int& out) {
  if (pos + digits > text.size()) return false;
  int value = 0;
  for (std::size_t i = 0; i < digits; ++i) {
    char c = text[pos + i];
    if (c < '0' || c > '9') return false;
    value = value * 10 + (c - '0');
  }
  pos += digits;
  out = value;
  return true;
}

bool expect(std::string_view text, std::size_t& pos, char c) {
  if (pos >= text.size() || text[pos] != c) return false;
  ++pos;
  return true;
}

bool all_blank(const std::vector<std::string>& row) {
  return std::all_of(row.begin(), row.end(),
                     [](const std::string& f) { return trim(f).empty(); });
}

}  // namespace

std::optional<TimePoint> parse_timestamp(std::string_view raw) {
  using namespace std::chrono;
  const std::string owned = trim(raw);
  std::string_view text = owned;
  std::size_t pos = 0;
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
  if (!read_int(text, pos, 4, y) || !expect(text, pos, '-') || !read_int(text, pos, 2, mo) ||
      !expect(text, pos, '-') || !read_int(text, pos, 2, d)) {
    return std::nullopt;
  }
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  milliseconds frac{0};
  minutes offset{0};
  if (pos < text.size()) {
    if (text[pos] != 'T' && text[pos] != ' ') return std::nullopt;
    ++pos;
    if (!read_int(text, pos, 2, h) || !expect(text, pos, ':') || !read_int(text, pos, 2, mi)) {
      return std::nullopt;
    }
    if (pos < text.size() && text[pos] == ':') {
      ++pos;
      if (!read_int(text, pos, 2, s)) return std::nullopt;
      if (pos < text.size() && (text[pos] == '.' || text[pos] == ',')) {
        ++pos;
        int scale = 100;
        int ms = 0;
        std::size_t n = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
          if (scale > 0) {
            ms += (text[pos] - '0') * scale;
            scale /= 10;
          }
          ++pos;
          ++n;
        }
        if (n == 0) return std::nullopt;
        frac = milliseconds{ms};
      }
    }
    if (h > 23 || mi > 59 || s > 60) return std::nullopt;
    if (pos < text.size()) {
      if (text[pos] == 'Z') {
        ++pos;
      } else if (text[pos] == '+' || text[pos] == '-') {
        const int sign = text[pos] == '-' ? -1 : 1;
        ++pos;
        int oh = 0, om = 0;
        if (!read_int(text, pos, 2, oh)) return std::nullopt;
        if (pos < text.size() && text[pos] == ':') ++pos;
        if (pos < text.size() && !read_int(text, pos, 2, om)) return std::nullopt;
        offset = minutes{sign * (oh * 60 + om)};
      } else {
        return std::nullopt;
      }
    }
    if (pos != text.size()) return std::nullopt;
  }
  return TimePoint{sys_days{ymd} + hours{h} + minutes{mi} + seconds{s} + frac - offset};
}

std::string format_timestamp(TimePoint t) {
  using namespace std::chrono;
  const auto day_point = floor<days>(t);
  const year_month_day ymd{day_point};
  const hh_mm_ss<milliseconds> tod{t - day_point};
  char buf[32];
  const long long ms = tod.subseconds().count();
  int n = std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lld",
                        static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                        static_cast<unsigned>(ymd.day()),
                        static_cast<long long>(tod.hours().count()),
                        static_cast<long long>(tod.minutes().count()),
                        static_cast<long long>(tod.seconds().count()));
  std::string out(buf, static_cast<std::size_t>(n));
  if (ms != 0) {
    std::snprintf(buf, sizeof buf, ".%03lld", ms);
    out += buf;
  }
  return out;
}

std::string_view to_string(Round r) { return r == Round::Pre ? "pre" : "post"; }

std::optional<Round> parse_round(std::string_view text) {
  const std::string v = lower(trim(text));
  if (v == "pre") return Round::Pre;
  if (v == "post") return Round::Post;
  return std::nullopt;
}

std::vector<std::string> Trace::activities() const {
  std::vector<std::string> out;
  out.reserve(events.size());
  for (const auto& e : events) out.push_back(e.activity);
  return out;
}

std::set<std::string> EventLog::alphabet() const {
  std::set<std::string> out;
  for (const auto& t : traces) {
    for (const auto& e : t.events) out.insert(e.activity);
  }
  return out;
}

std::vector<std::vector<std::string>> EventLog::sequences() const {
  std::vector<std::vector<std::string>> out;
  out.reserve(traces.size());
  for (const auto& t : traces) out.push_back(t.activities());
  return out;
}

EventLog log_from_sequences(const std::vector<std::vector<std::string>>& sequences,
                            const std::string& case_prefix) {
  EventLog log;
  for (std::size_t i = 0; i < sequences.size(); ++i) {
    Trace t;
    t.case_id = case_prefix + std::to_string(i);
    for (const auto& a : sequences[i]) t.events.push_back({a, std::nullopt, std::nullopt});
    log.traces.push_back(std::move(t));
  }
  return log;
}

// ---- stage map ----------------------------------------------------------

StageMap StageMap::build(const std::vector<Row>& rows) {
  StageMap map;
  std::map<int, std::string> names;
  for (const auto& row : rows) {
    if (row.stage < 1) {
      throw Error(ErrorCode::InvalidArgument, row.activity, "stage id must be >= 1");
    }
    if (map.entries_.count(row.activity) != 0) {
      throw Error(ErrorCode::DuplicateActivity, row.activity);
    }
    if (!map.abbreviation_stage_.emplace(row.abbreviation, row.stage).second) {
      throw Error(ErrorCode::DuplicateAbbreviation, row.abbreviation);
    }
    if (row.abbreviation.empty() || row.abbreviation == "-") {
      throw Error(ErrorCode::InvalidArgument, row.activity, "abbreviation must be non-empty and not '-'");
    }
    map.entries_.emplace(row.activity, StageEntry{row.stage, row.abbreviation});
    map.order_.push_back(row.activity);
    if (!row.stage_name.empty()) names.emplace(row.stage, row.stage_name);
    map.stage_count_ = std::max(map.stage_count_, row.stage);
  }
  std::set<int> used;
  for (const auto& [_, e] : map.entries_) used.insert(e.stage);
  for (int s = 1; s <= map.stage_count_; ++s) {
    if (used.count(s) == 0) {
      throw Error(ErrorCode::InvalidArgument, "S" + std::to_string(s),
                  "stage ids must be contiguous from 1");
    }
  }
  map.stage_names_.assign(static_cast<std::size_t>(map.stage_count_), {});
  for (const auto& [s, name] : names) map.stage_names_[static_cast<std::size_t>(s - 1)] = name;
  return map;
}

const StageEntry* StageMap::find(const std::string& activity) const {
  auto it = entries_.find(activity);
  return it == entries_.end() ? nullptr : &it->second;
}

const std::string& StageMap::stage_name(int stage) const {
  static const std::string empty;
  if (!has_stage(stage)) return empty;
  return stage_names_[static_cast<std::size_t>(stage - 1)];
}

int StageMap::stage_of_abbreviation(const std::string& abbreviation) const {
  auto it = abbreviation_stage_.find(abbreviation);
  return it == abbreviation_stage_.end() ? 0 : it->second;
}

namespace {

// Maps canonical column names onto header positions.
struct Header {
  std::unordered_map<std::string, std::size_t> index;

  std::optional<std::size_t> column(const std::string& name) const {
    auto it = index.find(name);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }
};

Header read_header(const std::vector<std::string>& row,
                   const std::map<std::string, std::string>& aliases) {
  std::unordered_map<std::string, std::size_t> by_name;
  for (std::size_t i = 0; i < row.size(); ++i) by_name.emplace(trim(row[i]), i);
  Header h;
  for (const auto& [name, i] : by_name) h.index.emplace(name, i);
  for (const auto& [canonical, actual] : aliases) {
    auto it = by_name.find(actual);
    if (it != by_name.end()) h.index[canonical] = it->second;
  }
  return h;
}

std::string field(const std::vector<std::string>& row, std::optional<std::size_t> col) {
  if (!col || *col >= row.size()) return {};
  return trim(row[*col]);
}

int parse_stage_id(const std::string& text) {
  std::string_view v = text;
  if (!v.empty() && (v.front() == 'S' || v.front() == 's')) v.remove_prefix(1);
  int out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty()) return 0;
  return out;
}

}  // namespace

StageMap load_stage_map(std::string_view document) {
  auto rows = csv::parse(document);
  if (rows.empty()) throw Error(ErrorCode::EmptyLog, "stage map", "no header");
  Header h = read_header(rows.front(), {});
  auto ca = h.column("activity");
  auto cs = h.column("stage");
  auto cb = h.column("abbreviation");
  auto cn = h.column("stage_name");
  if (!ca || !cs || !cb) {
    throw Error(ErrorCode::MalformedRow, "1", "expected columns activity,stage,abbreviation");
  }
  std::vector<StageMap::Row> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (all_blank(rows[r])) continue;
    StageMap::Row row;
    row.activity = field(rows[r], ca);
    row.abbreviation = field(rows[r], cb);
    row.stage_name = field(rows[r], cn);
    row.stage = parse_stage_id(field(rows[r], cs));
    if (row.activity.empty() || row.stage == 0) {
      throw Error(ErrorCode::MalformedRow, std::to_string(r + 1), "bad activity or stage");
    }
    out.push_back(std::move(row));
  }
  return StageMap::build(out);
}

std::map<std::string, std::string> load_resource_map(std::string_view document) {
  auto rows = csv::parse(document);
  if (rows.empty()) throw Error(ErrorCode::EmptyLog, "resource map", "no header");
  Header h = read_header(rows.front(), {});
  auto cr = h.column("resource");
  auto cs = h.column("student");
  if (!cr || !cs) throw Error(ErrorCode::MalformedRow, "1", "expected columns resource,student");
  std::map<std::string, std::string> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (all_blank(rows[r])) continue;
    std::string resource = field(rows[r], cr);
    std::string student = field(rows[r], cs);
    if (resource.empty() || student.empty()) {
      throw Error(ErrorCode::MalformedRow, std::to_string(r + 1), "empty resource or student");
    }
    out[resource] = student;
  }
  return out;
}

std::map<std::string, std::string> load_column_map(std::string_view document) {
  auto rows = csv::parse(document);
  if (rows.empty()) return {};
  Header h = read_header(rows.front(), {});
  auto cc = h.column("column");
  auto ch = h.column("header");
  if (!cc || !ch) throw Error(ErrorCode::MalformedRow, "1", "expected columns column,header");
  std::map<std::string, std::string> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (all_blank(rows[r])) continue;
    out[field(rows[r], cc)] = field(rows[r], ch);
  }
  return out;
}

// ---- event log CSV ------------------------------------------------------

EventLog load_log_csv(std::string_view document, const LogCsvOptions& options) {
  auto rows = csv::parse(document);
  if (rows.empty()) throw Error(ErrorCode::EmptyLog, "log", "no header");
  Header h = read_header(rows.front(), options.columns);
  const auto c_case = h.column("case_id");
  const auto c_resource = h.column("resource");
  const auto c_round = h.column("round");
  const auto c_activity = h.column("activity");
  const auto c_start = h.column("start");
  const auto c_end = h.column("end");
  if (!c_activity) throw Error(ErrorCode::MalformedRow, "1", "missing 'activity' column");
  if (!c_case && !c_resource) {
    throw Error(ErrorCode::MalformedRow, "1", "need a 'case_id' or 'resource' column");
  }

  struct Pending {
    Trace trace;
    std::vector<std::size_t> input_order;
  };
  std::vector<Pending> cases;
  std::map<std::string, std::size_t> case_lookup;

  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (all_blank(row)) continue;
    const std::string where = std::to_string(r + 1);
    Event ev;
    ev.activity = field(row, c_activity);
    if (ev.activity.empty()) throw Error(ErrorCode::MalformedRow, where, "missing activity");
    for (auto [col, slot] : {std::pair{c_start, &ev.start}, std::pair{c_end, &ev.end}}) {
      const std::string text = field(row, col);
      if (text.empty()) continue;
      *slot = parse_timestamp(text);
      if (!*slot) throw Error(ErrorCode::MalformedRow, where, "bad timestamp '" + text + "'");
    }
    if (ev.start && ev.end && *ev.end < *ev.start) {
      throw Error(ErrorCode::MalformedRow, where, "end precedes start");
    }

    const std::string resource = field(row, c_resource);
    const std::string round_text = field(row, c_round);
    std::optional<Round> round;
    if (!round_text.empty()) {
      round = parse_round(round_text);
      if (!round) throw Error(ErrorCode::MalformedRow, where, "bad round '" + round_text + "'");
    }
    const std::string raw_case = field(row, c_case);

    std::string key;
    std::string case_id;
    if (!resource.empty()) {
      key = "r\x1f" + resource + "\x1f" + round_text;
      auto mapped = options.resource_to_student.find(resource);
      const std::string& who =
          mapped != options.resource_to_student.end() ? mapped->second : resource;
      case_id = round ? who + "_" + std::string(to_string(*round)) : who;
    } else {
      if (raw_case.empty()) throw Error(ErrorCode::MalformedRow, where, "no case_id or resource");
      key = "c\x1f" + raw_case;
      case_id = raw_case;
    }

    auto [it, inserted] = case_lookup.emplace(key, cases.size());
    if (inserted) {
      Pending p;
      p.trace.case_id = case_id;
      p.trace.resource = resource;
      p.trace.round = round;
      cases.push_back(std::move(p));
    }
    cases[it->second].trace.events.push_back(std::move(ev));
  }
  if (cases.empty()) throw Error(ErrorCode::EmptyLog, "log", "no events");

  EventLog log;
  for (auto& p : cases) {
    auto& events = p.trace.events;
    const bool all_started =
        std::all_of(events.begin(), events.end(), [](const Event& e) { return e.start.has_value(); });
    if (all_started) {
      std::stable_sort(events.begin(), events.end(),
                       [](const Event& a, const Event& b) { return *a.start < *b.start; });
    }
    log.traces.push_back(std::move(p.trace));
  }
  return log;
}

std::string write_log_csv(const EventLog& log) {
  std::string out = csv::format_row({"case_id", "resource", "round", "activity", "start", "end"});
  for (const auto& t : log.traces) {
    const std::string round = t.round ? std::string(to_string(*t.round)) : std::string();
    for (const auto& e : t.events) {
      out += csv::format_row({t.case_id, t.resource, round, e.activity,
                              e.start ? format_timestamp(*e.start) : std::string(),
                              e.end ? format_timestamp(*e.end) : std::string()});
    }
  }
  return out;
}

// ---- transformations ----------------------------------------------------

std::vector<std::string> abbreviate(std::span<const std::string> activities,
                                    const StageMap& map) {
  std::vector<std::string> out;
  out.reserve(activities.size());
  for (std::size_t i = 0; i < activities.size(); ++i) {
    const StageEntry* e = map.find(activities[i]);
    if (e == nullptr) {
      throw Error(ErrorCode::UnknownActivity, activities[i], "at position " + std::to_string(i));
    }
    out.push_back(e->abbreviation);
  }
  return out;
}

std::vector<std::string> abbreviate(const Trace& trace, const StageMap& map) {
  const auto acts = trace.activities();
  return abbreviate(acts, map);
}

Trace stage_slice(const Trace& trace, const StageMap& map, int stage) {
  if (!map.has_stage(stage)) throw Error(ErrorCode::UnknownStage, std::to_string(stage));
  Trace out;
  out.case_id = trace.case_id;
  out.resource = trace.resource;
  out.round = trace.round;
  std::optional<std::size_t> first;
  std::size_t last = 0;
  for (std::size_t i = 0; i < trace.events.size(); ++i) {
    const StageEntry* e = map.find(trace.events[i].activity);
    if (e != nullptr && e->stage == stage) {
      if (!first) first = i;
      last = i;
    }
  }
  if (!first) {
    out.stage_missing = true;
    return out;
  }
  out.events.assign(trace.events.begin() + static_cast<std::ptrdiff_t>(*first),
                    trace.events.begin() + static_cast<std::ptrdiff_t>(last + 1));
  return out;
}

EventLog stage_log(const EventLog& log, const StageMap& map, int stage) {
  if (!map.has_stage(stage)) throw Error(ErrorCode::UnknownStage, std::to_string(stage));
  EventLog out;
  out.traces.reserve(log.traces.size());
  for (const auto& t : log.traces) out.traces.push_back(stage_slice(t, map, stage));
  return out;
}

double duration(const Trace& trace) {
  if (trace.events.empty()) throw Error(ErrorCode::MissingTimestamp, trace.case_id, "empty trace");
  const auto& first = trace.events.front();
  const auto& last = trace.events.back();
  if (!first.start) throw Error(ErrorCode::MissingTimestamp, trace.case_id, "first event has no start");
  if (!last.end) throw Error(ErrorCode::MissingTimestamp, trace.case_id, "last event has no end");
  const std::chrono::duration<double, std::ratio<60>> minutes = *last.end - *first.start;
  return std::max(0.0, minutes.count());
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, path, "cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, path, "cannot open file for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::Io, path, "write failed");
}

}  // namespace galign
