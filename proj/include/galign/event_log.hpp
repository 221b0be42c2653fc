#pragma once

#include <chrono>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace galign {

using TimePoint = std::chrono::sys_time<std::chrono::milliseconds>;

// ISO 8601 date-time: "YYYY-MM-DD", "YYYY-MM-DDTHH:MM[:SS[.fff]]" with an
// optional "Z" or "+HH:MM" suffix; a space may replace the "T".
std::optional<TimePoint> parse_timestamp(std::string_view text);
std::string format_timestamp(TimePoint t);

struct Event {
  std::string activity;
  std::optional<TimePoint> start;
  std::optional<TimePoint> end;

  bool operator==(const Event&) const = default;
};

enum class Round { Pre, Post };

std::string_view to_string(Round r);
std::optional<Round> parse_round(std::string_view text);

struct Trace {
  std::string case_id;
  std::string resource;
  std::optional<Round> round;
  std::vector<Event> events;
  // Set by stage_log when the trace contains no activity of the stage.
  bool stage_missing = false;

  std::vector<std::string> activities() const;
  std::size_t size() const { return events.size(); }
  bool operator==(const Trace&) const = default;
};

// Ordered multiset of traces.
struct EventLog {
  std::vector<Trace> traces;

  std::size_t n_seq() const { return traces.size(); }
  std::set<std::string> alphabet() const;
  std::size_t n_act() const { return alphabet().size(); }
  std::vector<std::vector<std::string>> sequences() const;
};

// Builds an untimed log from plain activity sequences, case ids "<prefix><i>".
EventLog log_from_sequences(const std::vector<std::vector<std::string>>& sequences,
                            const std::string& case_prefix = "case_");

struct StageEntry {
  int stage = 0;  // 1-based
  std::string abbreviation;

  bool operator==(const StageEntry&) const = default;
};

// activity -> (stage, abbreviation). Stage ids are exactly 1..m.
class StageMap {
 public:
  struct Row {
    std::string activity;
    int stage = 0;
    std::string abbreviation;
    std::string stage_name;
  };

  static StageMap build(const std::vector<Row>& rows);

  int stage_count() const { return stage_count_; }
  std::size_t size() const { return entries_.size(); }
  const StageEntry* find(const std::string& activity) const;
  const std::map<std::string, StageEntry>& entries() const { return entries_; }
  // Empty when the source did not name the stage.
  const std::string& stage_name(int stage) const;
  bool has_stage(int stage) const { return stage >= 1 && stage <= stage_count_; }
  // Stage of an abbreviation, or 0 when unknown.
  int stage_of_abbreviation(const std::string& abbreviation) const;
  // Activity names in declaration order.
  const std::vector<std::string>& activities() const { return order_; }

 private:
  std::map<std::string, StageEntry> entries_;
  std::map<std::string, int> abbreviation_stage_;
  std::vector<std::string> order_;
  std::vector<std::string> stage_names_;
  int stage_count_ = 0;
};

struct LogCsvOptions {
  // Canonical column name -> header used in the file (e.g. "activity" ->
  // "ACTIVITY"). Canonical names: case_id, resource, round, activity, start,
  // end.
  std::map<std::string, std::string> columns;
  // RESOURCE code -> student reference; when non-empty, case ids become
  // "<student>_<round>".
  std::map<std::string, std::string> resource_to_student;
};

// Parses the `case_id,resource,round,activity,start,end` log format. Rows
// are grouped by (resource, round), or by case_id when resource is empty.
EventLog load_log_csv(std::string_view document, const LogCsvOptions& options = {});
std::string write_log_csv(const EventLog& log);

// `resource,student`
std::map<std::string, std::string> load_resource_map(std::string_view document);
// `activity,stage,abbreviation[,stage_name]`; stage may be "3" or "S3".
StageMap load_stage_map(std::string_view document);
// `column,header` pairs for LogCsvOptions::columns.
std::map<std::string, std::string> load_column_map(std::string_view document);

std::vector<std::string> abbreviate(std::span<const std::string> activities,
                                    const StageMap& map);
std::vector<std::string> abbreviate(const Trace& trace, const StageMap& map);

// Per trace, the contiguous slice from the first to the last activity of
// `stage`, inclusive. Traces without such activity become empty and are
// flagged stage_missing.
EventLog stage_log(const EventLog& log, const StageMap& map, int stage);
Trace stage_slice(const Trace& trace, const StageMap& map, int stage);

// Minutes from the first event's start to the last event's end.
double duration(const Trace& trace);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

}  // namespace galign
