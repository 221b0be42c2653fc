#include "galign/analysis.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>
#include <nlohmann/json.hpp>
#include <numeric>
#include <set>

#include "galign/csv.hpp"
#include "galign/error.hpp"

namespace galign {

using nlohmann::json;

namespace {

std::string subject_of(const std::string& case_id, std::optional<Round> round) {
  if (!round) return case_id;
  const std::string suffix = "_" + std::string(to_string(*round));
  if (case_id.size() > suffix.size() &&
      case_id.compare(case_id.size() - suffix.size(), suffix.size(), suffix) == 0) {
    return case_id.substr(0, case_id.size() - suffix.size());
  }
  return case_id;
}

std::optional<double> try_duration(const Trace& t) {
  if (t.events.empty() || !t.events.front().start || !t.events.back().end) return std::nullopt;
  return duration(t);
}

// Distinct non-empty normative sequences with the first index that
// produced each.
struct NormativeSet {
  std::vector<Sequence> sequences;
  std::vector<std::size_t> origin;
};

NormativeSet distinct(const std::vector<Sequence>& all) {
  NormativeSet out;
  std::set<Sequence> seen;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (all[i].empty() || !seen.insert(all[i]).second) continue;
    out.sequences.push_back(all[i]);
    out.origin.push_back(i);
  }
  return out;
}

}  // namespace

std::vector<CaseResult> conformance_report(const EventLog& student_log, const EventLog& norm_log,
                                           const StageMap& map, const ScoreParams& p) {
  if (student_log.traces.empty()) throw Error(ErrorCode::EmptyLog, "student log");
  if (norm_log.traces.empty()) throw Error(ErrorCode::EmptyNormativeLog, "normative log");
  p.validate();

  std::vector<Sequence> norm_whole;
  norm_whole.reserve(norm_log.traces.size());
  for (const auto& t : norm_log.traces) {
    try {
      norm_whole.push_back(abbreviate(t, map));
    } catch (const Error& e) {
      throw Error(e.code(), e.subject(), "normative case " + t.case_id + ": " + e.what());
    }
  }

  const int m = map.stage_count();
  std::vector<NormativeSet> norm_stage;
  for (int s = 1; s <= m; ++s) {
    std::vector<Sequence> slices;
    slices.reserve(norm_log.traces.size());
    for (const auto& t : norm_log.traces) slices.push_back(abbreviate(stage_slice(t, map, s), map));
    norm_stage.push_back(distinct(slices));
  }

  std::vector<CaseResult> results;
  results.reserve(student_log.traces.size());
  for (const auto& trace : student_log.traces) {
    CaseResult r;
    r.case_id = trace.case_id;
    r.subject = subject_of(trace.case_id, trace.round);
    r.resource = trace.resource;
    r.round = trace.round;
    try {
      const Sequence seq = abbreviate(trace, map);
      r.whole_best = best_match(seq, norm_whole, p);
      r.whole_identity = r.whole_best.aligned.identity;
      r.duration_min = try_duration(trace);

      for (int s = 1; s <= m; ++s) {
        StageResult sr;
        sr.stage = s;
        const Trace slice = stage_slice(trace, map, s);
        if (slice.stage_missing) {
          sr.stage_missing = true;
          r.per_stage.push_back(std::move(sr));
          continue;
        }
        const NormativeSet& ns = norm_stage[static_cast<std::size_t>(s - 1)];
        if (ns.sequences.empty()) {
          throw Error(ErrorCode::EmptyNormativeLog, "S" + std::to_string(s),
                      "no normative trace reaches this stage");
        }
        BestMatch best = best_match(abbreviate(slice, map), ns.sequences, p);
        best.normative_index = ns.origin[best.normative_index];
        sr.identity = best.aligned.identity;
        sr.best = std::move(best);
        sr.duration_min = try_duration(slice);
        r.per_stage.push_back(std::move(sr));
      }
    } catch (const Error& e) {
      throw Error(e.code(), e.subject(), "case " + trace.case_id + ": " + e.what());
    }
    results.push_back(std::move(r));
  }
  return results;
}

bool natural_less(const std::string& a, const std::string& b) {
  auto is_num = [](const std::string& s) {
    return !s.empty() && s.size() < 18 &&
           std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
  };
  if (is_num(a) && is_num(b)) {
    const long long x = std::stoll(a), y = std::stoll(b);
    if (x != y) return x < y;
  }
  return a < b;
}

namespace {

// Sum in sorted order so the mean does not depend on input order.
std::optional<double> mean(std::vector<double> values) {
  if (values.empty()) return std::nullopt;
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

RoundSummary summarize_round(const std::vector<const CaseResult*>& cases, int stages) {
  RoundSummary out;
  out.cases = cases.size();
  std::vector<double> ids, durs;
  std::vector<std::vector<double>> sid(static_cast<std::size_t>(stages));
  std::vector<std::vector<double>> sdur(static_cast<std::size_t>(stages));
  for (const CaseResult* c : cases) {
    ids.push_back(c->whole_identity);
    if (c->duration_min) durs.push_back(*c->duration_min);
    for (const auto& st : c->per_stage) {
      const auto k = static_cast<std::size_t>(st.stage - 1);
      sid[k].push_back(st.identity);
      if (st.duration_min) sdur[k].push_back(*st.duration_min);
    }
  }
  out.mean_identity = mean(ids);
  out.mean_duration = mean(durs);
  for (int s = 0; s < stages; ++s) {
    out.stage_identity.push_back(mean(sid[static_cast<std::size_t>(s)]));
    out.stage_duration.push_back(mean(sdur[static_cast<std::size_t>(s)]));
  }
  return out;
}

}  // namespace

SummaryStats summarize(const std::vector<CaseResult>& results) {
  if (results.empty()) throw Error(ErrorCode::InvalidArgument, "summarize", "no results");
  SummaryStats stats;
  for (const auto& r : results) {
    for (const auto& st : r.per_stage) stats.stage_count = std::max(stats.stage_count, st.stage);
  }

  std::vector<const CaseResult*> pre, post;
  std::map<std::string, std::pair<const CaseResult*, const CaseResult*>> by_subject;
  for (const auto& r : results) {
    if (!r.round) continue;
    auto& slot = by_subject[r.subject];
    if (*r.round == Round::Pre) {
      pre.push_back(&r);
      slot.first = &r;
    } else {
      post.push_back(&r);
      slot.second = &r;
    }
  }
  stats.pre = summarize_round(pre, stats.stage_count);
  stats.post = summarize_round(post, stats.stage_count);
  if (stats.pre.mean_identity && stats.post.mean_identity) {
    stats.mean_identity_improvement = *stats.post.mean_identity - *stats.pre.mean_identity;
  }

  std::vector<std::string> subjects;
  for (const auto& [subject, _] : by_subject) subjects.push_back(subject);
  std::sort(subjects.begin(), subjects.end(), natural_less);
  for (const auto& subject : subjects) {
    const auto& [a, b] = by_subject[subject];
    if (a == nullptr || b == nullptr) {
      stats.missing_round.push_back(subject);
      continue;
    }
    Improvement imp;
    imp.subject = subject;
    imp.identity = b->whole_identity - a->whole_identity;
    if (a->duration_min && b->duration_min) imp.duration = *a->duration_min - *b->duration_min;
    imp.stage_identity.assign(static_cast<std::size_t>(stats.stage_count), 0.0);
    imp.stage_duration.assign(static_cast<std::size_t>(stats.stage_count), std::nullopt);
    for (std::size_t k = 0; k < a->per_stage.size() && k < b->per_stage.size(); ++k) {
      const auto& sa = a->per_stage[k];
      const auto& sb = b->per_stage[k];
      imp.stage_identity[k] = sb.identity - sa.identity;
      if (sa.duration_min && sb.duration_min) {
        imp.stage_duration[k] = *sa.duration_min - *sb.duration_min;
      }
    }
    stats.improvements.push_back(std::move(imp));
  }
  return stats;
}

// ---- serialization ------------------------------------------------------

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json best_to_json(const BestMatch& b) {
  return {{"normative_index", b.normative_index},
          {"score", b.aligned.score},
          {"identity", b.aligned.identity},
          {"matches", b.aligned.matches},
          {"s1", b.aligned.s1},
          {"s2", b.aligned.s2}};
}

BestMatch best_from_json(const json& j) {
  BestMatch b;
  b.normative_index = j.at("normative_index").get<std::size_t>();
  b.aligned.score = j.at("score").get<double>();
  b.aligned.identity = j.at("identity").get<double>();
  b.aligned.matches = j.at("matches").get<std::size_t>();
  b.aligned.s1 = j.at("s1").get<Sequence>();
  b.aligned.s2 = j.at("s2").get<Sequence>();
  return b;
}

std::optional<double> read_optional(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<double>();
}

json round_to_json(const RoundSummary& r) {
  json stages = json::array();
  for (std::size_t k = 0; k < r.stage_identity.size(); ++k) {
    stages.push_back({{"stage", k + 1},
                      {"mean_identity", optional_number(r.stage_identity[k])},
                      {"mean_duration_min", optional_number(r.stage_duration[k])}});
  }
  return {{"cases", r.cases},
          {"mean_identity", optional_number(r.mean_identity)},
          {"mean_duration_min", optional_number(r.mean_duration)},
          {"stages", stages}};
}

std::string number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

std::string report_to_json(const std::vector<CaseResult>& results, const SummaryStats& stats,
                           const StageMap& map, const ScoreParams& p) {
  json doc;
  doc["params"] = {{"match", p.match}, {"gap", p.gap}, {"mismatch", p.mismatch}};
  json stages = json::array();
  for (int s = 1; s <= map.stage_count(); ++s) {
    stages.push_back({{"stage", s}, {"name", map.stage_name(s)}});
  }
  doc["stages"] = stages;

  json cases = json::array();
  for (const auto& r : results) {
    json c;
    c["case_id"] = r.case_id;
    c["subject"] = r.subject;
    c["resource"] = r.resource;
    c["round"] = r.round ? json(std::string(to_string(*r.round))) : json(nullptr);
    c["whole_identity"] = r.whole_identity;
    c["duration_min"] = optional_number(r.duration_min);
    c["whole_best"] = best_to_json(r.whole_best);
    json per_stage = json::array();
    for (const auto& st : r.per_stage) {
      per_stage.push_back({{"stage", st.stage},
                           {"identity", st.identity},
                           {"stage_missing", st.stage_missing},
                           {"duration_min", optional_number(st.duration_min)},
                           {"best", st.best ? best_to_json(*st.best) : json(nullptr)}});
    }
    c["per_stage"] = per_stage;
    cases.push_back(std::move(c));
  }
  doc["cases"] = cases;

  json improvements = json::array();
  for (const auto& imp : stats.improvements) {
    json st_id = json::array(), st_dur = json::array();
    for (double d : imp.stage_identity) st_id.push_back(d);
    for (const auto& d : imp.stage_duration) st_dur.push_back(optional_number(d));
    improvements.push_back({{"subject", imp.subject},
                            {"identity", imp.identity},
                            {"duration_min", optional_number(imp.duration)},
                            {"stage_identity", st_id},
                            {"stage_duration_min", st_dur}});
  }
  doc["summary"] = {{"pre", round_to_json(stats.pre)},
                    {"post", round_to_json(stats.post)},
                    {"mean_identity_improvement", optional_number(stats.mean_identity_improvement)},
                    {"improvements", improvements},
                    {"missing_round", stats.missing_round}};
  return doc.dump(2) + "\n";
}

std::vector<CaseResult> report_from_json(const std::string& document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::MalformedDocument, "report", e.what());
  }
  std::vector<CaseResult> out;
  try {
    for (const auto& c : doc.at("cases")) {
      CaseResult r;
      r.case_id = c.at("case_id").get<std::string>();
      r.subject = c.at("subject").get<std::string>();
      r.resource = c.value("resource", std::string());
      if (!c.at("round").is_null()) r.round = parse_round(c.at("round").get<std::string>());
      r.whole_identity = c.at("whole_identity").get<double>();
      r.duration_min = read_optional(c, "duration_min");
      r.whole_best = best_from_json(c.at("whole_best"));
      for (const auto& s : c.at("per_stage")) {
        StageResult sr;
        sr.stage = s.at("stage").get<int>();
        sr.identity = s.at("identity").get<double>();
        sr.stage_missing = s.at("stage_missing").get<bool>();
        sr.duration_min = read_optional(s, "duration_min");
        if (!s.at("best").is_null()) sr.best = best_from_json(s.at("best"));
        r.per_stage.push_back(std::move(sr));
      }
      out.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedDocument, "report", e.what());
  }
  return out;
}

std::string summary_csv(const SummaryStats& stats) {
  std::string out = csv::format_row({"metric", "round", "scope", "value"});
  auto row = [&](const char* metric, const char* round, const std::string& scope,
                 const std::optional<double>& v) {
    out += csv::format_row({metric, round, scope, v ? number(*v) : std::string()});
  };
  for (auto [name, r] : {std::pair{"pre", &stats.pre}, std::pair{"post", &stats.post}}) {
    row("mean_identity", name, "whole", r->mean_identity);
    row("mean_duration_min", name, "whole", r->mean_duration);
    for (std::size_t k = 0; k < r->stage_identity.size(); ++k) {
      const std::string scope = "S" + std::to_string(k + 1);
      row("mean_identity", name, scope, r->stage_identity[k]);
      row("mean_duration_min", name, scope, r->stage_duration[k]);
    }
  }
  row("mean_identity_improvement", "post-pre", "whole", stats.mean_identity_improvement);
  return out;
}

}  // namespace galign
