#include "galign/simulator.hpp"

#include <set>
#include <unordered_set>

#include "galign/error.hpp"

namespace galign {

std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

RunStream::RunStream(std::uint64_t seed, std::uint64_t run_index)
    : state_(seed ^ splitmix64_mix(run_index + 1)) {}

std::uint64_t RunStream::next() {
  state_ += 0x9e3779b97f4a7c15ULL;
  return splitmix64_mix(state_);
}

std::uint64_t RunStream::below(std::uint64_t bound) {
  // Rejects the lowest (2^64 mod bound) outputs so the modulo is unbiased.
  const std::uint64_t threshold = (0 - bound) % bound;
  while (true) {
    const std::uint64_t r = next();
    if (r >= threshold) return r % bound;
  }
}

void SimConfig::validate() const {
  if (n_runs < 1) throw Error(ErrorCode::InvalidArgument, "n_runs", "must be >= 1");
  if (max_activities < 1) throw Error(ErrorCode::InvalidArgument, "max_activities", "must be >= 1");
}

RunResult simulate_run(const PetriNet& net, std::size_t max_activities, RunStream& rng) {
  RunResult run;
  DenseMarking marking = net.dense_initial();
  std::vector<std::size_t> candidates;
  while (true) {
    net.enabled_into(marking, candidates);
    if (candidates.empty()) {
      run.outcome = RunOutcome::Deadlocked;
      return run;
    }
    const std::size_t t = candidates[rng.below(candidates.size())];
    net.fire_in_place(marking, t);
    run.labels.push_back(net.transitions()[t].label);
    if (net.is_final(marking)) {
      run.outcome = RunOutcome::Completed;
      return run;
    }
    if (run.labels.size() >= max_activities) {
      run.outcome = RunOutcome::Truncated;
      return run;
    }
  }
}

namespace {

std::vector<RunResult> raw_runs_serial(const PetriNet& net, const SimConfig& cfg) {
  std::vector<RunResult> runs(cfg.n_runs);
  for (std::size_t i = 0; i < cfg.n_runs; ++i) {
    RunStream rng(cfg.seed, i);
    runs[i] = simulate_run(net, cfg.max_activities, rng);
  }
  return runs;
}

std::vector<RunResult> raw_runs_parallel(const PetriNet& net, const SimConfig& cfg) {
  std::vector<RunResult> runs(cfg.n_runs);
  const auto n = static_cast<std::int64_t>(cfg.n_runs);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < n; ++i) {
    RunStream rng(cfg.seed, static_cast<std::uint64_t>(i));
    runs[static_cast<std::size_t>(i)] = simulate_run(net, cfg.max_activities, rng);
  }
  return runs;
}

struct SequenceHash {
  std::size_t operator()(const std::vector<std::string>& s) const noexcept {
    std::size_t h = s.size();
    for (const auto& a : s) {
      h ^= std::hash<std::string>{}(a) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

}  // namespace

PostprocessResult postprocess(const std::vector<RunResult>& raw, const SimConfig& cfg,
                              const PetriNet* net) {
  std::set<std::string> invisible;
  if (net != nullptr) {
    std::set<std::string> visible;
    for (const auto& t : net->transitions()) (t.visible ? visible : invisible).insert(t.label);
    for (const auto& v : visible) invisible.erase(v);
  }
  auto is_invisible = [&](const std::string& label) {
    if (net != nullptr) return invisible.count(label) != 0;
    return label.rfind("INVISIBLE", 0) == 0;
  };

  PostprocessResult out;
  std::unordered_set<std::vector<std::string>, SequenceHash> seen;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const RunResult& run = raw[i];
    if (run.outcome == RunOutcome::Truncated) {
      ++out.stats.discarded_truncated;
      continue;
    }
    if (run.outcome == RunOutcome::Deadlocked) {
      ++out.stats.discarded_deadlocked;
      continue;
    }
    ++out.stats.completed;

    std::vector<std::string> visible_labels;
    for (const auto& label : run.labels) {
      if (!is_invisible(label)) visible_labels.push_back(label);
    }
    if (visible_labels.empty() ||
        (!cfg.final_activity.empty() && visible_labels.back() != cfg.final_activity)) {
      ++out.stats.discarded_final_mismatch;
      continue;
    }
    const std::vector<std::string>& kept = cfg.drop_invisible ? visible_labels : run.labels;
    if (cfg.deduplicate && !seen.insert(kept).second) {
      ++out.stats.duplicates_removed;
      continue;
    }
    Trace trace;
    trace.case_id = "sim_" + std::to_string(i);
    for (const auto& label : kept) trace.events.push_back({label, std::nullopt, std::nullopt});
    out.log.traces.push_back(std::move(trace));
  }
  return out;
}

SimResult simulate_log_serial(const PetriNet& net, const SimConfig& cfg) {
  cfg.validate();
  SimResult result;
  result.raw_runs = raw_runs_serial(net, cfg);
  auto post = postprocess(result.raw_runs, cfg, &net);
  result.kept = std::move(post.log);
  result.stats = post.stats;
  return result;
}

SimResult simulate_log(const PetriNet& net, const SimConfig& cfg) {
  cfg.validate();
  SimResult result;
  result.raw_runs = raw_runs_parallel(net, cfg);
  auto post = postprocess(result.raw_runs, cfg, &net);
  result.kept = std::move(post.log);
  result.stats = post.stats;
  return result;
}

}  // namespace galign
