// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <random>

#include "galign/alignment.hpp"
#include "galign/petri_net.hpp"
#include "galign/simulator.hpp"

namespace {

using galign::Sequence;

// Guideline-sized workload: ~300 normative sequences of length 30-65 over a
// 29-symbol alphabet.
std::vector<Sequence> normative_log(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Sequence> out(n);
  for (auto& s : out) {
    s.resize(30 + rng() % 36);
    for (auto& x : s) x = "a" + std::to_string(rng() % 29);
  }
  return out;
}

// A chain of `stages` choice blocks, each with an invisible loop back.
galign::PetriNet looping_chain(int stages) {
  std::vector<std::string> places;
  std::vector<galign::Transition> ts;
  std::vector<galign::Arc> arcs;
  for (int i = 0; i <= stages; ++i) places.push_back("p" + std::to_string(i));
  for (int i = 0; i < stages; ++i) {
    const std::string from = "p" + std::to_string(i);
    const std::string to = "p" + std::to_string(i + 1);
    for (char branch : {'x', 'y'}) {
      const std::string id = std::string(1, branch) + std::to_string(i);
      ts.push_back({id, id, true});
      arcs.push_back({from, id});
      arcs.push_back({id, to});
    }
    if (i > 0 && i + 1 < stages) {
      const std::string back = "back" + std::to_string(i);
      ts.push_back({back, "INVISIBLE " + back, false});
      arcs.push_back({to, back});
      arcs.push_back({back, from});
    }
  }
  return galign::PetriNet::build(places, ts, arcs, "p0", "p" + std::to_string(stages));
}

void BM_BestMatchSerial(benchmark::State& state) {
  const auto norm = normative_log(static_cast<std::size_t>(state.range(0)), 1);
  const auto student = normative_log(1, 2).front();
  for (auto _ : state) benchmark::DoNotOptimize(galign::best_match_serial(student, norm));
}

void BM_BestMatchParallel(benchmark::State& state) {
  const auto norm = normative_log(static_cast<std::size_t>(state.range(0)), 1);
  const auto student = normative_log(1, 2).front();
  for (auto _ : state) benchmark::DoNotOptimize(galign::best_match(student, norm));
}

galign::SimConfig sim_config(std::int64_t runs) {
  galign::SimConfig cfg;
  cfg.n_runs = static_cast<std::size_t>(runs);
  cfg.seed = 42;
  cfg.final_activity.clear();
  return cfg;
}

void BM_SimulateSerial(benchmark::State& state) {
  const auto net = looping_chain(20);
  const auto cfg = sim_config(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(galign::simulate_log_serial(net, cfg));
}

void BM_SimulateParallel(benchmark::State& state) {
  const auto net = looping_chain(20);
  const auto cfg = sim_config(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(galign::simulate_log(net, cfg));
}

}  // namespace

BENCHMARK(BM_BestMatchSerial)->Arg(100)->Arg(315)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BestMatchParallel)->Arg(100)->Arg(315)->Arg(1000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SimulateSerial)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulateParallel)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
