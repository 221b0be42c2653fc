#include <gtest/gtest.h>

#include <omp.h>

#include <set>

#include "galign/error.hpp"
#include "galign/simulator.hpp"
#include "nets.hpp"
#include "oracles.hpp"

using namespace galign;

namespace {

std::set<std::vector<std::string>> kept_set(const SimResult& r) {
  const auto seqs = r.kept.sequences();
  return {seqs.begin(), seqs.end()};
}

}  // namespace

TEST(RunStream, Reproducible) {
  RunStream a(42, 7);
  RunStream b(42, 7);
  RunStream c(42, 8);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    EXPECT_EQ(x, b.next());
    differs = differs || x != c.next();
  }
  EXPECT_TRUE(differs);
}

TEST(RunStream, KnownSplitMixOutput) {
  // Reference values of SplitMix64 seeded with 0.
  RunStream s(std::uint64_t{0});
  EXPECT_EQ(s.next(), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(s.next(), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(s.next(), 0x06c45d188009454fULL);
}

TEST(RunStream, BelowIsInRangeAndRoughlyUniform) {
  RunStream s(1, 0);
  std::vector<int> counts(3, 0);
  for (int i = 0; i < 30000; ++i) {
    const auto v = s.below(3);
    ASSERT_LT(v, 3u);
    ++counts[v];
  }
  for (int c : counts) EXPECT_NEAR(c, 10000, 500);
}

TEST(SimulateRun, LinearNet) {
  const auto net = nets::linear();
  for (std::uint64_t seed : {0ULL, 1ULL, 99ULL}) {
    RunStream rng(seed, 0);
    const auto run = simulate_run(net, 65, rng);
    EXPECT_EQ(run.labels, (std::vector<std::string>{"a", "b", "c"}));
    EXPECT_TRUE(run.complete());
  }
  RunStream rng(3, 0);
  const auto cut = simulate_run(net, 2, rng);
  EXPECT_EQ(cut.labels, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(cut.outcome, RunOutcome::Truncated);
}

TEST(SimulateRun, Deadlock) {
  const auto net = nets::deadlock();
  bool saw_deadlock = false;
  for (std::uint64_t i = 0; i < 50; ++i) {
    RunStream rng(5, i);
    const auto run = simulate_run(net, 10, rng);
    if (run.labels == std::vector<std::string>{"b"}) {
      EXPECT_EQ(run.outcome, RunOutcome::Deadlocked);
      saw_deadlock = true;
    } else {
      EXPECT_EQ(run.labels, (std::vector<std::string>{"a", "c"}));
      EXPECT_TRUE(run.complete());
    }
  }
  EXPECT_TRUE(saw_deadlock);
}

TEST(SimulateRun, ChoiceFrequencies) {
  const auto net = nets::choice();
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 12345ULL}) {
    int b = 0;
    for (std::uint64_t i = 0; i < 1000; ++i) {
      RunStream rng(seed, i);
      const auto run = simulate_run(net, 65, rng);
      if (run.labels[1] == "b") ++b;
    }
    EXPECT_GE(b, 440) << seed;
    EXPECT_LE(b, 560) << seed;
  }
}

TEST(Postprocess, Examples) {
  SimConfig cfg;
  cfg.final_activity = "b";
  {
    const std::vector<RunResult> raw = {{{"a", "INVISIBLE x", "b"}, RunOutcome::Completed}};
    const auto r = postprocess(raw, cfg);
    EXPECT_EQ(r.log.sequences(), (std::vector<std::vector<std::string>>{{"a", "b"}}));
    EXPECT_EQ(r.log.traces[0].case_id, "sim_0");
  }
  {
    const std::vector<RunResult> raw = {{{"a", "b"}, RunOutcome::Truncated}};
    const auto r = postprocess(raw, cfg);
    EXPECT_EQ(r.log.n_seq(), 0u);
    EXPECT_EQ(r.stats.discarded_truncated, 1u);
  }
  {
    const std::vector<RunResult> raw = {{{"a", "b"}, RunOutcome::Completed}, {{"a", "b"}, RunOutcome::Completed}};
    const auto r = postprocess(raw, cfg);
    EXPECT_EQ(r.log.sequences(), (std::vector<std::vector<std::string>>{{"a", "b"}}));
    EXPECT_EQ(r.stats.duplicates_removed, 1u);
    cfg.deduplicate = false;
    EXPECT_EQ(postprocess(raw, cfg).log.n_seq(), 2u);
    cfg.deduplicate = true;
  }
  {
    // Last visible label decides; a trailing invisible label is ignored.
    const std::vector<RunResult> raw = {{{"a", "c"}, RunOutcome::Completed},
                                        {{"a", "b", "INVISIBLE y"}, RunOutcome::Completed},
                                        {{"a", "b"}, RunOutcome::Deadlocked}};
    const auto r = postprocess(raw, cfg);
    EXPECT_EQ(r.log.sequences(), (std::vector<std::vector<std::string>>{{"a", "b"}}));
    EXPECT_EQ(r.log.traces[0].case_id, "sim_1");
    EXPECT_EQ(r.stats.discarded_final_mismatch, 1u);
    EXPECT_EQ(r.stats.discarded_deadlocked, 1u);
  }
  {
    cfg.drop_invisible = false;
    const std::vector<RunResult> raw = {{{"a", "INVISIBLE x", "b"}, RunOutcome::Completed}};
    EXPECT_EQ(postprocess(raw, cfg).log.sequences()[0].size(), 3u);
  }
}

TEST(SimConfig, Validation) {
  SimConfig cfg;
  cfg.n_runs = 0;
  EXPECT_THROW(simulate_log(nets::linear(), cfg), Error);
  cfg.n_runs = 1;
  cfg.max_activities = 0;
  EXPECT_THROW(simulate_log_serial(nets::linear(), cfg), Error);
}

TEST(SimulateLog, LinearKeepsOne) {
  SimConfig cfg;
  cfg.n_runs = 10;
  cfg.final_activity = "c";
  cfg.seed = 8;
  const auto r = simulate_log(nets::linear(), cfg);
  EXPECT_EQ(r.kept.n_seq(), 1u);
  EXPECT_EQ(r.stats.duplicates_removed, 9u);
  EXPECT_EQ(r.raw_runs.size(), 10u);
}

TEST(SimulateLog, KeptIsSubsetOfEnumeration) {
  for (const auto& named : nets::suite()) {
    SCOPED_TRACE(named.name);
    SimConfig cfg;
    cfg.n_runs = 500;
    cfg.max_activities = 12;
    cfg.seed = 2024;
    cfg.final_activity = named.final_activity;
    const auto r = simulate_log(named.net, cfg);
    const auto all = oracle::complete_sequences(oracle::raw(named.net), cfg.max_activities);
    ASSERT_LE(all.size(), 100u);
    for (const auto& s : r.kept.sequences()) {
      EXPECT_TRUE(all.count(s)) << s.size();
      EXPECT_GE(s.size(), 1u);
      EXPECT_LE(s.size(), cfg.max_activities);
      if (!cfg.final_activity.empty()) EXPECT_EQ(s.back(), cfg.final_activity);
      EXPECT_TRUE(replay(named.net, s));
      for (const auto& label : s) EXPECT_EQ(label.rfind("INVISIBLE", 0), std::string::npos);
    }
  }
}

TEST(SimulateLog, EnumeratesEveryVariantOfSmallNets) {
  SimConfig cfg;
  cfg.n_runs = 400;
  cfg.seed = 1;
  cfg.final_activity = "";
  const auto r = simulate_log(nets::two_choice(), cfg);
  EXPECT_EQ(kept_set(r), oracle::complete_sequences(oracle::raw(nets::two_choice()), 65));
}

TEST(SimulateLog, DeterministicAcrossThreadCounts) {
  for (const auto& named : nets::suite()) {
    SCOPED_TRACE(named.name);
    SimConfig cfg;
    cfg.n_runs = 2000;
    cfg.max_activities = 30;
    cfg.seed = 77;
    cfg.final_activity = named.final_activity;
    const auto serial = simulate_log_serial(named.net, cfg);
    for (int threads : {1, 2, 4, 7}) {
      omp_set_num_threads(threads);
      const auto par = simulate_log(named.net, cfg);
      EXPECT_EQ(par.raw_runs, serial.raw_runs);
      EXPECT_EQ(par.kept.sequences(), serial.kept.sequences());
      EXPECT_EQ(write_log_csv(par.kept), write_log_csv(serial.kept));
      EXPECT_EQ(par.stats, serial.stats);
    }
  }
}

TEST(SimulateLog, CoverageIsMonotone) {
  SimConfig cfg;
  cfg.seed = 3;
  cfg.max_activities = 20;
  cfg.final_activity = "Check catheter position";
  const auto net = nets::mini_guideline();
  std::set<std::vector<std::string>> previous;
  for (std::size_t n : {10u, 50u, 200u, 1000u}) {
    cfg.n_runs = n;
    const auto now = kept_set(simulate_log(net, cfg));
    for (const auto& s : previous) EXPECT_TRUE(now.count(s));
    EXPECT_GE(now.size(), previous.size());
    previous = now;
  }
}

TEST(SimulateLog, MiniGuidelineFiltersAbandonedRuns) {
  SimConfig cfg;
  cfg.seed = 10;
  cfg.n_runs = 300;
  const auto r = simulate_log(nets::mini_guideline(), cfg);
  EXPECT_GT(r.stats.discarded_final_mismatch, 0u);
  EXPECT_GT(r.kept.n_seq(), 0u);
  EXPECT_EQ(r.stats.completed + r.stats.discarded_truncated + r.stats.discarded_deadlocked, cfg.n_runs);
  EXPECT_EQ(r.stats.completed, r.stats.discarded_final_mismatch + r.stats.duplicates_removed + r.kept.n_seq());
}
