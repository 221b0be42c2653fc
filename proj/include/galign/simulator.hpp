#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "galign/event_log.hpp"
#include "galign/petri_net.hpp"

namespace galign {

// Deterministic per-run random stream.
//
// Run i of a simulation with seed s draws from SplitMix64 started at
//   state = s ^ mix(i + 1)
// where mix is the SplitMix64 output function. Bounded draws use rejection
// followed by modulo, so a stream produces the same choices on every
// platform and independently of how runs are scheduled.
class RunStream {
 public:
  RunStream(std::uint64_t seed, std::uint64_t run_index);
  explicit RunStream(std::uint64_t state) : state_(state) {}

  std::uint64_t next();
  // Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::uint64_t state_;
};

std::uint64_t splitmix64_mix(std::uint64_t z);

enum class RunOutcome { Completed, Truncated, Deadlocked };

struct RunResult {
  std::vector<std::string> labels;  // visible and invisible, in firing order
  RunOutcome outcome = RunOutcome::Deadlocked;

  bool complete() const { return outcome == RunOutcome::Completed; }
  bool operator==(const RunResult&) const = default;
};

struct SimConfig {
  std::size_t n_runs = 1000;
  std::size_t max_activities = 65;
  std::uint64_t seed = 0;
  // Empty disables the final-activity filter.
  std::string final_activity = "Check catheter position";
  bool drop_invisible = true;
  bool deduplicate = true;

  void validate() const;
};

struct SimStats {
  std::size_t completed = 0;
  std::size_t discarded_truncated = 0;
  std::size_t discarded_deadlocked = 0;
  std::size_t discarded_final_mismatch = 0;
  std::size_t duplicates_removed = 0;

  bool operator==(const SimStats&) const = default;
};

struct SimResult {
  std::vector<RunResult> raw_runs;
  // Post-processed normative log. Case ids are "sim_<run index>" of the run
  // that first produced each kept sequence.
  EventLog kept;
  SimStats stats;
};

// Fires uniformly chosen enabled transitions until the final marking is
// reached, `max_activities` labels have been recorded, or nothing is enabled.
RunResult simulate_run(const PetriNet& net, std::size_t max_activities, RunStream& rng);

// Raw runs are computed in parallel (OpenMP); output is identical to
// simulate_log_serial for every thread count.
SimResult simulate_log(const PetriNet& net, const SimConfig& cfg);
SimResult simulate_log_serial(const PetriNet& net, const SimConfig& cfg);

struct PostprocessResult {
  EventLog log;
  SimStats stats;
};

// Keeps complete runs ending in cfg.final_activity, strips invisible labels
// and removes duplicates per cfg. Visibility is decided by `net` when given,
// otherwise by the "INVISIBLE" label prefix.
PostprocessResult postprocess(const std::vector<RunResult>& raw, const SimConfig& cfg,
                              const PetriNet* net = nullptr);

}  // namespace galign
