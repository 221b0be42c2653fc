#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "galign/alignment.hpp"
#include "galign/event_log.hpp"

namespace galign {

struct StageResult {
  int stage = 0;
  double identity = 0.0;
  std::optional<BestMatch> best;  // normative_index refers to the full normative log
  std::optional<double> duration_min;
  bool stage_missing = false;
};

struct CaseResult {
  std::string case_id;
  // Case id without its "_<round>" suffix; pre/post cases of one student
  // share it.
  std::string subject;
  std::string resource;
  std::optional<Round> round;
  double whole_identity = 0.0;
  BestMatch whole_best;
  std::optional<double> duration_min;
  std::vector<StageResult> per_stage;  // stages 1..m in order
};

// Maximum identity and duration of every student trace against the
// normative log, for the whole process and for every stage slice.
// Activities are compared through their stage-map abbreviations.
std::vector<CaseResult> conformance_report(const EventLog& student_log, const EventLog& norm_log,
                                           const StageMap& map, const ScoreParams& p = {});

struct RoundSummary {
  std::size_t cases = 0;
  std::optional<double> mean_identity;
  std::optional<double> mean_duration;
  std::vector<std::optional<double>> stage_identity;  // index stage-1
  std::vector<std::optional<double>> stage_duration;
};

// Positive means better: identity up, duration down.
struct Improvement {
  std::string subject;
  double identity = 0.0;
  std::optional<double> duration;
  std::vector<double> stage_identity;
  std::vector<std::optional<double>> stage_duration;
};

struct SummaryStats {
  int stage_count = 0;
  RoundSummary pre;
  RoundSummary post;
  std::vector<Improvement> improvements;  // subjects with both rounds, natural order
  std::vector<std::string> missing_round;  // subjects lacking pre or post
  // post.mean_identity - pre.mean_identity
  std::optional<double> mean_identity_improvement;
};

// Unweighted means per round and stage. Independent of input order.
SummaryStats summarize(const std::vector<CaseResult>& results);

// Natural ordering for subject labels ("2" < "10").
bool natural_less(const std::string& a, const std::string& b);

std::string report_to_json(const std::vector<CaseResult>& results, const SummaryStats& stats,
                           const StageMap& map, const ScoreParams& p);
// Reads the "cases" array written by report_to_json.
std::vector<CaseResult> report_from_json(const std::string& document);

// metric,round,scope,value
std::string summary_csv(const SummaryStats& stats);

}  // namespace galign
