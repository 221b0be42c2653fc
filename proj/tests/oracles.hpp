#pragma once

// Independent reference implementations used as test oracles. None of them
// call into the library kernels they check.

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "galign/alignment.hpp"
#include "galign/petri_net.hpp"

namespace oracle {

using Seq = std::vector<std::string>;

// Result of enumerating every gapped alignment of two sequences.
struct BruteAlignment {
  double best_score = 0.0;
  std::size_t optimal_count = 0;
  // The optimal alignment whose step string, read from the end, is
  // lexicographically smallest with diagonal < up < left.
  Seq s1;
  Seq s2;
};

// Exhaustive enumeration (no memoisation), exponential in the lengths.
BruteAlignment brute_align(const Seq& a, const Seq& b, const galign::ScoreParams& p);

// Sum of pairwise scores with the default flat scheme, written out by hand.
double hand_score(const Seq& s1, const Seq& s2, const galign::ScoreParams& p);

// Marking as place -> count, computed from the raw arc list only.
using Tokens = std::map<std::string, int>;

struct RawNet {
  std::vector<std::string> places;
  std::vector<galign::Transition> transitions;
  std::vector<galign::Arc> arcs;
  std::string initial;
  std::string final_place;
};

std::vector<std::string> raw_enabled(const RawNet& net, const Tokens& m);
Tokens raw_fire(const RawNet& net, const Tokens& m, const std::string& t);

// Every reachable marking (bounded by `cap` states) with its enabled set.
std::map<Tokens, std::vector<std::string>> reachable(const RawNet& net, std::size_t cap);

// Visible projections of every firing sequence of at most `max_fired`
// transitions that ends in the final marking (one token on the final place
// and nothing else).
std::set<Seq> complete_sequences(const RawNet& net, std::size_t max_fired);

RawNet raw(const galign::PetriNet& net);

}  // namespace oracle
