#pragma once

// Small hand-built nets shared by the unit tests and the acceptance binary.

#include <string>
#include <vector>

#include "galign/petri_net.hpp"

namespace nets {

using galign::PetriNet;
using galign::Transition;

inline Transition vis(std::string id, std::string label) { return {std::move(id), std::move(label), true}; }
inline Transition vis(const std::string& id) { return {id, id, true}; }
inline Transition inv(const std::string& id) { return {id, "INVISIBLE " + id, false}; }

// p0 -a-> p1 -b-> p2 -c-> p3
inline PetriNet linear() {
  return PetriNet::build({"p0", "p1", "p2", "p3"}, {vis("a"), vis("b"), vis("c")},
                         {{"p0", "a"}, {"a", "p1"}, {"p1", "b"}, {"b", "p2"}, {"p2", "c"}, {"c", "p3"}},
                         "p0", "p3");
}

// a, then b or c
inline PetriNet choice() {
  return PetriNet::build({"p0", "p1", "p2"}, {vis("a"), vis("b"), vis("c")},
                         {{"p0", "a"}, {"a", "p1"}, {"p1", "b"}, {"b", "p2"}, {"p1", "c"}, {"c", "p2"}},
                         "p0", "p2");
}

// a, (b | c), (d | e)
inline PetriNet two_choice() {
  return PetriNet::build(
      {"p0", "p1", "p2", "p3"}, {vis("a"), vis("b"), vis("c"), vis("d"), vis("e")},
      {{"p0", "a"}, {"a", "p1"}, {"p1", "b"}, {"b", "p2"}, {"p1", "c"}, {"c", "p2"},
       {"p2", "d"}, {"d", "p3"}, {"p2", "e"}, {"e", "p3"}},
      "p0", "p3");
}

// a, b, then an invisible loop back before b or exit through c
inline PetriNet loop() {
  return PetriNet::build({"p0", "p1", "p2", "p3"}, {vis("a"), vis("b"), inv("retry"), vis("c")},
                         {{"p0", "a"}, {"a", "p1"}, {"p1", "b"}, {"b", "p2"}, {"p2", "retry"},
                          {"retry", "p1"}, {"p2", "c"}, {"c", "p3"}},
                         "p0", "p3");
}

// a forks into b || c, joined by d
inline PetriNet parallel() {
  return PetriNet::build({"p0", "p1", "p2", "p3", "p4", "p5"}, {vis("a"), vis("b"), vis("c"), vis("d")},
                         {{"p0", "a"}, {"a", "p1"}, {"a", "p2"}, {"p1", "b"}, {"b", "p3"},
                          {"p2", "c"}, {"c", "p4"}, {"p3", "d"}, {"p4", "d"}, {"d", "p5"}},
                         "p0", "p5");
}

// Either a then c (completes) or b into a dead end.
inline PetriNet deadlock() {
  return PetriNet::build({"p0", "p1", "p2", "p3"}, {vis("a"), vis("b"), vis("c")},
                         {{"p0", "a"}, {"a", "p1"}, {"p0", "b"}, {"b", "p2"}, {"p1", "c"}, {"c", "p3"}},
                         "p0", "p3");
}

// A miniature insertion guideline: preparation, optional skip, a puncture
// loop with an invisible retry, ending in "Check catheter position" or in an
// abandoned branch that must be filtered.
inline PetriNet mini_guideline() {
  return PetriNet::build(
      {"p0", "p1", "p2", "p3", "p4", "p5", "p6", "p7"},
      {vis("t1", "Prepare Implements"), vis("t2", "Hand washing"), inv("skip"),
       vis("t3", "Anesthetize"), vis("t4", "Puncture"), inv("retry"), vis("t5", "Blood return"),
       vis("t6", "Check catheter position"), vis("t7", "Abandon"), inv("giveup")},
      {{"p0", "t1"}, {"t1", "p1"}, {"p1", "t2"}, {"t2", "p2"}, {"p1", "skip"}, {"skip", "p2"},
       {"p2", "t3"}, {"t3", "p3"}, {"p3", "t4"}, {"t4", "p4"}, {"p4", "retry"}, {"retry", "p3"},
       {"p4", "t5"}, {"t5", "p5"}, {"p5", "t6"}, {"t6", "p7"}, {"p4", "t7"}, {"t7", "p6"},
       {"p6", "giveup"}, {"giveup", "p7"}},
      "p0", "p7");
}

struct Named {
  std::string name;
  PetriNet net;
  std::string final_activity;
};

inline std::vector<Named> suite() {
  return {{"linear", linear(), "c"},     {"choice", choice(), ""},
          {"two_choice", two_choice(), "d"}, {"loop", loop(), "c"},
          {"parallel", parallel(), "d"}, {"deadlock", deadlock(), "c"},
          {"mini_guideline", mini_guideline(), "Check catheter position"}};
}

}  // namespace nets
