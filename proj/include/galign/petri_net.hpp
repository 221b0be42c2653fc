#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace galign {

struct Transition {
  std::string id;
  std::string label;
  bool visible = true;

  bool operator==(const Transition&) const = default;
};

// Directed arc, either place -> transition or transition -> place.
using Arc = std::pair<std::string, std::string>;

// Token count per place. Zero entries are never stored, so two markings with
// the same tokens compare equal regardless of how they were built.
class Marking {
 public:
  Marking() = default;
  Marking(std::initializer_list<std::pair<const std::string, std::uint32_t>> init);

  std::uint32_t tokens(const std::string& place) const;
  void set(const std::string& place, std::uint32_t count);
  std::uint64_t total() const;
  const std::map<std::string, std::uint32_t>& entries() const { return tokens_; }

  bool operator==(const Marking&) const = default;

 private:
  std::map<std::string, std::uint32_t> tokens_;
};

// Dense marking indexed by PetriNet place index; used by the simulation and
// replay kernels.
using DenseMarking = std::vector<std::uint32_t>;

// Ordinary (unit-weight) Petri net with a single initial token and a
// designated final place. Immutable once built; build() enforces all
// structural invariants and throws Error(InvariantViolation) naming the
// offending element.
class PetriNet {
 public:
  static PetriNet build(std::vector<std::string> places,
                        std::vector<Transition> transitions,
                        std::vector<Arc> arcs, std::string initial_place,
                        std::string final_place);

  const std::vector<std::string>& places() const { return places_; }
  const std::vector<Transition>& transitions() const { return transitions_; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  const std::string& initial_place() const { return places_[initial_]; }
  const std::string& final_place() const { return places_[final_]; }
  Marking initial_marking() const;
  Marking final_marking() const;

  std::size_t place_count() const { return places_.size(); }
  std::size_t transition_count() const { return transitions_.size(); }
  std::optional<std::size_t> place_index(std::string_view id) const;
  std::optional<std::size_t> transition_index(std::string_view id) const;
  std::span<const std::size_t> inputs(std::size_t t) const { return inputs_[t]; }
  std::span<const std::size_t> outputs(std::size_t t) const { return outputs_[t]; }

  // Transition indices sorted by transition id.
  std::span<const std::size_t> id_order() const { return id_order_; }

  DenseMarking dense_initial() const;
  bool is_final(std::span<const std::uint32_t> m) const;
  DenseMarking to_dense(const Marking& m) const;
  Marking from_dense(std::span<const std::uint32_t> m) const;

  // Appends the enabled transition indices, in id order, to `out` (cleared
  // first).
  void enabled_into(std::span<const std::uint32_t> m,
                    std::vector<std::size_t>& out) const;
  bool is_enabled(std::span<const std::uint32_t> m, std::size_t t) const;
  // Fires in place. Caller guarantees t is enabled.
  void fire_in_place(DenseMarking& m, std::size_t t) const;

  // Structural equality: same place set, transitions, arc set and
  // initial/final places irrespective of declaration order.
  friend bool operator==(const PetriNet& a, const PetriNet& b);

 private:
  PetriNet() = default;

  std::vector<std::string> places_;
  std::vector<Transition> transitions_;
  std::vector<Arc> arcs_;
  std::size_t initial_ = 0;
  std::size_t final_ = 0;

  std::unordered_map<std::string, std::size_t> place_lookup_;
  std::unordered_map<std::string, std::size_t> transition_lookup_;
  std::vector<std::vector<std::size_t>> inputs_;
  std::vector<std::vector<std::size_t>> outputs_;
  std::vector<std::size_t> id_order_;
};

// PNML subset: net, page, place (+initialMarking), transition (+name,
// toolspecific invisibility), arc (+inscription), finalmarkings.
PetriNet parse_pnml(std::string_view document);

// {"places":[..], "transitions":[{"id","label","visible"}],
//  "arcs":[[src,dst]], "initial":"..", "final":".."}
PetriNet parse_net_json(std::string_view document);
std::string render_net_json(const PetriNet& net);

PetriNet load_net_file(const std::string& path);

// Enabled transition ids, sorted by id.
std::vector<std::string> enabled(const PetriNet& net, const Marking& m);

Marking fire(const PetriNet& net, const Marking& m, const std::string& transition_id);

// Places where the token can choose between several transitions.
std::vector<std::string> decision_places(const PetriNet& net);

struct ReplayOptions {
  std::size_t state_cap = 100'000;
};

// True iff some firing sequence from the initial marking projects onto
// `activities` (visible labels only) and ends with exactly one token on the
// final place. Invisible transitions interleave freely.
bool replay(const PetriNet& net, std::span<const std::string> activities,
            const ReplayOptions& options = {});

}  // namespace galign
