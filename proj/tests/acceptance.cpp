// Acceptance suite. Prints one PASS/FAIL/SKIP line per criterion and exits
// non-zero when any criterion fails.
//
// Criterion 7 needs the original guideline net and recorded log. Point
// GALIGN_CCC19_DIR at a directory holding net.pnml (or net.json) and
// log.csv; columns.csv and resources.csv there are used when present,
// otherwise data/ccc19/resources.csv. GALIGN_SEED overrides the seed (42).

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "galign/alignment.hpp"
#include "galign/analysis.hpp"
#include "galign/error.hpp"
#include "galign/event_log.hpp"
#include "galign/petri_net.hpp"
#include "galign/simulator.hpp"
#include "nets.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace galign;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  enum Kind { Pass, Fail, Skip } kind = Pass;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, double limit_ms, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {Outcome::Fail, std::string("exception: ") + e.what()};
  }
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  if (out.kind == Outcome::Pass && limit_ms > 0 && ms > limit_ms) {
    out = {Outcome::Fail, "runtime " + std::to_string(ms) + " ms exceeds " + std::to_string(limit_ms) + " ms"};
  }
  const char* tag = out.kind == Outcome::Pass ? "PASS" : out.kind == Outcome::Fail ? "FAIL" : "SKIP";
  if (out.kind == Outcome::Fail) ++failures;
  std::printf("[%s] %d %s (%.3f ms)%s%s\n", tag, id, name.c_str(), ms, out.detail.empty() ? "" : ": ",
              out.detail.c_str());
  std::fflush(stdout);
}

void info(const std::string& text) { std::printf("       info: %s\n", text.c_str()); }

Outcome check(bool ok, const std::string& detail) { return {ok ? Outcome::Pass : Outcome::Fail, detail}; }

std::string fmt(double v, int digits = 2) {
  std::ostringstream ss;
  ss.setf(std::ios::fixed);
  ss.precision(digits);
  ss << v;
  return ss.str();
}

Outcome worked_example() {
  const auto r = align(chars("HEAHEE"), chars("PAHE"));
  const bool ok = r.identity == 50.0 && r.score == -3.0 && strip_gaps(r.s1) == chars("HEAHEE") &&
                  strip_gaps(r.s2) == chars("PAHE");
  std::string s1, s2;
  for (auto& x : r.s1) s1 += x;
  for (auto& x : r.s2) s2 += x;
  return check(ok, s1 + " / " + s2 + ", score " + fmt(r.score, 0) + ", identity " + fmt(r.identity) + "%");
}

Outcome student_one_post(const std::vector<support::PrintedPair>& pairs) {
  for (const auto& p : pairs) {
    if (p.label != "1_post") continue;
    const double id = identity(p.s1, p.s2);
    return check(p.s1.size() == 31 && std::fabs(id - 74.0) <= 1.0,
                 std::to_string(p.s1.size()) + " positions, identity " + fmt(id) + "%");
  }
  return {Outcome::Fail, "pair 1_post missing from fixture"};
}

Outcome appendix_corpus(const std::vector<support::PrintedPair>& pairs) {
  if (pairs.size() != 20) return {Outcome::Fail, std::to_string(pairs.size()) + " pairs in fixture"};
  for (const auto& p : pairs) {
    if (const auto problem = check_pair(p.s1, p.s2); !problem.empty()) return {Outcome::Fail, p.label + ": " + problem};
    const double score = alignment_score(p.s1, p.s2, {});
    if (score != oracle::hand_score(p.s1, p.s2, {})) return {Outcome::Fail, p.label + ": score mismatch"};
    const double id = identity(p.s1, p.s2);
    if (id < 0 || id > 100) return {Outcome::Fail, p.label + ": identity out of range"};
    for (const auto* row : {&p.s1, &p.s2}) {
      const auto stripped = strip_gaps(*row);
      for (const auto& x : stripped) {
        if (x == kGap || x.empty()) return {Outcome::Fail, p.label + ": gap survives stripping"};
      }
      if (stripped.size() + static_cast<std::size_t>(std::count(row->begin(), row->end(), std::string(kGap))) !=
          row->size()) {
        return {Outcome::Fail, p.label + ": strip length"};
      }
    }
  }
  return {Outcome::Pass, "20 pairs"};
}

Outcome brute_force_equivalence() {
  std::mt19937_64 rng(1000);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t alphabet = 1 + rng() % 5;
    auto make = [&] {
      Sequence s(rng() % 8);
      for (auto& x : s) x = std::string(1, static_cast<char>('a' + rng() % alphabet));
      return s;
    };
    const Sequence a = make();
    const Sequence b = make();
    const double fast = align(a, b).score;
    const double slow = oracle::brute_align(a, b, {}).best_score;
    if (fast != slow) return {Outcome::Fail, "pair " + std::to_string(trial) + " differs"};
  }
  return {Outcome::Pass, "1000 pairs"};
}

Outcome doctor_visit() {
  const StageMap map = StageMap::build({{"a", 1, "a", ""}, {"b", 1, "b", ""}, {"c", 1, "c", ""}, {"d", 1, "d", ""},
                                        {"e", 2, "e", ""}, {"f", 2, "f", ""}, {"g", 2, "g", ""}});
  const EventLog log = log_from_sequences({{"a", "b", "c", "e", "g"}, {"b", "c", "f", "g"}, {"a", "c", "d", "e", "f", "g"}});
  using L = std::vector<std::vector<std::string>>;
  const bool s1 = stage_log(log, map, 1).sequences() == L{{"a", "b", "c"}, {"b", "c"}, {"a", "c", "d"}};
  const bool s2 = stage_log(log, map, 2).sequences() == L{{"e", "g"}, {"f", "g"}, {"e", "f", "g"}};
  return check(s1 && s2, std::string("S1 ") + (s1 ? "ok" : "wrong") + ", S2 " + (s2 ? "ok" : "wrong"));
}

Outcome simulator_validity() {
  std::size_t kept_total = 0;
  for (const auto& named : nets::suite()) {
    if (named.net.place_count() > 8) return {Outcome::Fail, named.name + " has more than 8 places"};
    SimConfig cfg;
    cfg.n_runs = 1000;
    cfg.max_activities = 14;
    cfg.seed = 20240611;
    cfg.final_activity = named.final_activity;
    omp_set_num_threads(4);
    const auto first = simulate_log(named.net, cfg);
    omp_set_num_threads(3);
    const auto second = simulate_log(named.net, cfg);
    const auto serial = simulate_log_serial(named.net, cfg);
    const std::string bytes = write_log_csv(first.kept);
    if (write_log_csv(second.kept) != bytes || first.raw_runs != second.raw_runs) {
      return {Outcome::Fail, named.name + ": repeated runs differ"};
    }
    if (write_log_csv(serial.kept) != bytes || serial.raw_runs != first.raw_runs) {
      return {Outcome::Fail, named.name + ": serial and parallel differ"};
    }
    const auto all = oracle::complete_sequences(oracle::raw(named.net), cfg.max_activities);
    for (const auto& s : first.kept.sequences()) {
      if (!replay(named.net, s)) return {Outcome::Fail, named.name + ": kept sequence does not replay"};
      if (all.count(s) == 0) return {Outcome::Fail, named.name + ": kept sequence not in enumeration"};
    }
    kept_total += first.kept.n_seq();
  }
  return {Outcome::Pass, std::to_string(nets::suite().size()) + " nets, " + std::to_string(kept_total) +
                             " kept sequences, 4 and 3 threads vs serial"};
}

Outcome ccc19() {
  const char* dir_env = std::getenv("GALIGN_CCC19_DIR");
  if (dir_env == nullptr || *dir_env == '\0') {
    return {Outcome::Skip, "GALIGN_CCC19_DIR not set; the guideline net and recorded log are not distributed"};
  }
  const fs::path dir = dir_env;
  fs::path net_path = dir / "net.pnml";
  if (!fs::exists(net_path)) net_path = dir / "net.json";
  if (!fs::exists(net_path) || !fs::exists(dir / "log.csv")) {
    return {Outcome::Skip, "net.pnml/net.json or log.csv missing in " + dir.string()};
  }
  std::uint64_t seed = 42;
  if (const char* s = std::getenv("GALIGN_SEED")) seed = std::stoull(s);

  std::vector<std::string> problems;
  auto expect = [&](bool ok, const std::string& what) {
    info(std::string(ok ? "ok   " : "FAIL ") + what);
    if (!ok) problems.push_back(what);
  };

  const PetriNet net = load_net_file(net_path.string());
  SimConfig cfg;
  cfg.seed = seed;
  const auto sim = simulate_log(net, cfg);
  const auto kept = sim.kept.n_seq();
  expect(kept >= 250 && kept <= 350, "unique kept sequences " + std::to_string(kept) + " in [250, 350]");

  LogCsvOptions opts;
  const fs::path resources = fs::exists(dir / "resources.csv") ? dir / "resources.csv"
                                                                : fs::path(support::source_path("data/ccc19/resources.csv"));
  opts.resource_to_student = load_resource_map(read_text_file(resources.string()));
  if (fs::exists(dir / "columns.csv")) opts.columns = load_column_map(read_text_file((dir / "columns.csv").string()));
  const EventLog log = load_log_csv(read_text_file((dir / "log.csv").string()), opts);
  std::size_t lo = SIZE_MAX, hi = 0;
  for (const auto& t : log.traces) {
    lo = std::min(lo, t.size());
    hi = std::max(hi, t.size());
  }
  expect(log.n_seq() == 20 && lo == 26 && hi == 59,
         std::to_string(log.n_seq()) + " traces, lengths " + std::to_string(lo) + "-" + std::to_string(hi));

  const StageMap map = load_stage_map(read_text_file(support::source_path("data/ccc19/stages.csv")));
  const auto results = conformance_report(log, sim.kept, map);
  const auto stats = summarize(results);
  const double pre_d = stats.pre.mean_duration.value_or(-1);
  const double post_d = stats.post.mean_duration.value_or(-1);
  expect(std::fabs(pre_d - 17.7) <= 0.1 && std::fabs(post_d - 13.5) <= 0.1,
         "mean durations " + fmt(pre_d) + " / " + fmt(post_d) + " min");
  const double s6 = stats.post.stage_identity.size() >= 6 ? stats.post.stage_identity[5].value_or(-1) : -1;
  const double s3 = stats.post.stage_identity.size() >= 3 ? stats.post.stage_identity[2].value_or(-1) : -1;
  expect(std::fabs(s6 - 87.2) <= 1.0, "post S6 mean identity " + fmt(s6) + "%");
  expect(std::fabs(s3 - 32.5) <= 1.0, "post S3 mean identity " + fmt(s3) + "%");
  const double imp = stats.mean_identity_improvement.value_or(-100);
  expect(std::fabs(imp - 10.0) <= 2.0, "mean identity improvement " + fmt(imp) + " pts");
  for (const auto& r : results) {
    if (r.case_id == "1_post") expect(std::fabs(r.whole_identity - 74.0) <= 1.0, "1_post identity " + fmt(r.whole_identity) + "%");
  }
  if (problems.empty()) return {Outcome::Pass, "seed " + std::to_string(seed)};
  return {Outcome::Fail, std::to_string(problems.size()) + " sub-checks failed"};
}

// Checks that need only the printed appendix; reported for information.
void appendix_information() {
  LogCsvOptions opts;
  opts.resource_to_student = load_resource_map(support::slurp(support::source_path("data/ccc19/resources.csv")));
  const EventLog students = load_log_csv(support::slurp(support::fixture("appendix_students.csv")), opts);
  const EventLog norm = load_log_csv(support::slurp(support::fixture("appendix_normative.csv")));
  const StageMap map = load_stage_map(support::slurp(support::source_path("data/ccc19/stages.csv")));
  std::size_t lo = SIZE_MAX, hi = 0;
  for (const auto& t : students.traces) {
    lo = std::min(lo, t.size());
    hi = std::max(hi, t.size());
  }
  info("appendix student traces: " + std::to_string(students.n_seq()) + ", lengths " + std::to_string(lo) + "-" +
       std::to_string(hi));
  const auto stats = summarize(conformance_report(students, norm, map));
  info("appendix whole-process mean identity pre " + fmt(*stats.pre.mean_identity) + "%, post " +
       fmt(*stats.post.mean_identity) + "%, improvement " + fmt(*stats.mean_identity_improvement) + " pts");
}

}  // namespace

int main() {
  const auto pairs = support::appendix_pairs();
  report(1, "worked alignment example HEAHEE vs PAHE", 1.0, worked_example);
  report(2, "student 1 post identity 74% +-1", 1.0, [&] { return student_one_post(pairs); });
  report(3, "appendix golden corpus invariants", 100.0, [&] { return appendix_corpus(pairs); });
  report(4, "brute-force oracle equivalence", 30000.0, brute_force_equivalence);
  report(5, "doctor-visit stage extraction", 0.0, doctor_visit);
  report(6, "simulator validity and determinism", 10000.0, simulator_validity);
  report(7, "guideline net and recorded log reproduction", 60000.0, ccc19);
  try {
    appendix_information();
  } catch (const std::exception& e) {
    info(std::string("appendix information unavailable: ") + e.what());
  }
  std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
