#include "galign/petri_net.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <unordered_set>

#include "galign/error.hpp"

namespace galign {

Marking::Marking(
    std::initializer_list<std::pair<const std::string, std::uint32_t>> init) {
  for (const auto& [place, count] : init) set(place, count);
}

std::uint32_t Marking::tokens(const std::string& place) const {
  auto it = tokens_.find(place);
  return it == tokens_.end() ? 0 : it->second;
}

void Marking::set(const std::string& place, std::uint32_t count) {
  if (count == 0) {
    tokens_.erase(place);
  } else {
    tokens_[place] = count;
  }
}

std::uint64_t Marking::total() const {
  std::uint64_t sum = 0;
  for (const auto& [_, count] : tokens_) sum += count;
  return sum;
}

PetriNet PetriNet::build(std::vector<std::string> places,
                         std::vector<Transition> transitions,
                         std::vector<Arc> arcs, std::string initial_place,
                         std::string final_place) {
  PetriNet net;
  for (std::size_t i = 0; i < places.size(); ++i) {
    if (places[i].empty()) {
      throw Error(ErrorCode::InvariantViolation, "", "place with empty id");
    }
    if (!net.place_lookup_.emplace(places[i], i).second) {
      throw Error(ErrorCode::InvariantViolation, places[i], "duplicate place id");
    }
  }
  std::unordered_set<std::string> visible_labels;
  for (std::size_t i = 0; i < transitions.size(); ++i) {
    const auto& t = transitions[i];
    if (t.id.empty()) {
      throw Error(ErrorCode::InvariantViolation, "", "transition with empty id");
    }
    if (net.place_lookup_.count(t.id) != 0 ||
        !net.transition_lookup_.emplace(t.id, i).second) {
      throw Error(ErrorCode::InvariantViolation, t.id, "duplicate node id");
    }
    if (t.visible && !visible_labels.insert(t.label).second) {
      throw Error(ErrorCode::InvariantViolation, t.id,
                  "duplicate visible label '" + t.label + "'");
    }
  }

  net.inputs_.resize(transitions.size());
  net.outputs_.resize(transitions.size());
  std::vector<std::size_t> place_in(places.size(), 0);
  std::vector<std::size_t> place_out(places.size(), 0);
  std::set<Arc> seen;
  for (const auto& arc : arcs) {
    const auto& [src, dst] = arc;
    auto sp = net.place_lookup_.find(src);
    auto st = net.transition_lookup_.find(src);
    auto dp = net.place_lookup_.find(dst);
    auto dt = net.transition_lookup_.find(dst);
    if (sp == net.place_lookup_.end() && st == net.transition_lookup_.end()) {
      throw Error(ErrorCode::InvariantViolation, src, "arc endpoint does not exist");
    }
    if (dp == net.place_lookup_.end() && dt == net.transition_lookup_.end()) {
      throw Error(ErrorCode::InvariantViolation, dst, "arc endpoint does not exist");
    }
    if (!seen.insert(arc).second) {
      throw Error(ErrorCode::InvariantViolation, src + "->" + dst,
                  "parallel arcs (weight > 1) are not supported");
    }
    if (sp != net.place_lookup_.end() && dt != net.transition_lookup_.end()) {
      net.inputs_[dt->second].push_back(sp->second);
      ++place_out[sp->second];
    } else if (st != net.transition_lookup_.end() &&
               dp != net.place_lookup_.end()) {
      net.outputs_[st->second].push_back(dp->second);
      ++place_in[dp->second];
    } else {
      throw Error(ErrorCode::InvariantViolation, src + "->" + dst,
                  "arc must connect a place and a transition");
    }
  }

  auto ip = net.place_lookup_.find(initial_place);
  if (ip == net.place_lookup_.end()) {
    throw Error(ErrorCode::InvariantViolation, initial_place,
                "initial place does not exist");
  }
  if (place_in[ip->second] != 0) {
    throw Error(ErrorCode::InvariantViolation, initial_place,
                "initial place has incoming arcs");
  }
  auto fp = net.place_lookup_.find(final_place);
  if (fp == net.place_lookup_.end()) {
    throw Error(ErrorCode::InvariantViolation, final_place,
                "final place does not exist");
  }
  if (place_out[fp->second] != 0) {
    throw Error(ErrorCode::InvariantViolation, final_place,
                "final place has outgoing arcs");
  }
  net.initial_ = ip->second;
  net.final_ = fp->second;

  net.id_order_.resize(transitions.size());
  std::iota(net.id_order_.begin(), net.id_order_.end(), std::size_t{0});
  std::sort(net.id_order_.begin(), net.id_order_.end(),
            [&](std::size_t a, std::size_t b) {
              return transitions[a].id < transitions[b].id;
            });

  net.places_ = std::move(places);
  net.transitions_ = std::move(transitions);
  net.arcs_ = std::move(arcs);
  return net;
}

Marking PetriNet::initial_marking() const { return Marking{{places_[initial_], 1}}; }

Marking PetriNet::final_marking() const { return Marking{{places_[final_], 1}}; }

std::optional<std::size_t> PetriNet::place_index(std::string_view id) const {
  auto it = place_lookup_.find(std::string(id));
  if (it == place_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> PetriNet::transition_index(std::string_view id) const {
  auto it = transition_lookup_.find(std::string(id));
  if (it == transition_lookup_.end()) return std::nullopt;
  return it->second;
}

DenseMarking PetriNet::dense_initial() const {
  DenseMarking m(places_.size(), 0);
  m[initial_] = 1;
  return m;
}

bool PetriNet::is_final(std::span<const std::uint32_t> m) const {
  for (std::size_t p = 0; p < m.size(); ++p) {
    if (m[p] != (p == final_ ? 1u : 0u)) return false;
  }
  return true;
}

DenseMarking PetriNet::to_dense(const Marking& m) const {
  DenseMarking dense(places_.size(), 0);
  for (const auto& [place, count] : m.entries()) {
    auto idx = place_index(place);
    if (!idx) throw Error(ErrorCode::UnknownPlace, place);
    dense[*idx] = count;
  }
  return dense;
}

Marking PetriNet::from_dense(std::span<const std::uint32_t> m) const {
  Marking out;
  for (std::size_t p = 0; p < m.size(); ++p) out.set(places_[p], m[p]);
  return out;
}

bool PetriNet::is_enabled(std::span<const std::uint32_t> m, std::size_t t) const {
  return std::all_of(inputs_[t].begin(), inputs_[t].end(),
                     [&](std::size_t p) { return m[p] > 0; });
}

void PetriNet::enabled_into(std::span<const std::uint32_t> m,
                            std::vector<std::size_t>& out) const {
  out.clear();
  for (std::size_t t : id_order_) {
    if (is_enabled(m, t)) out.push_back(t);
  }
}

void PetriNet::fire_in_place(DenseMarking& m, std::size_t t) const {
  for (std::size_t p : inputs_[t]) --m[p];
  for (std::size_t p : outputs_[t]) ++m[p];
}

bool operator==(const PetriNet& a, const PetriNet& b) {
  auto sorted = [](auto v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  auto by_id = [](std::vector<Transition> v) {
    std::sort(v.begin(), v.end(),
              [](const Transition& x, const Transition& y) { return x.id < y.id; });
    return v;
  };
  return sorted(a.places_) == sorted(b.places_) &&
         by_id(a.transitions_) == by_id(b.transitions_) &&
         sorted(a.arcs_) == sorted(b.arcs_) &&
         a.initial_place() == b.initial_place() &&
         a.final_place() == b.final_place();
}

std::vector<std::string> enabled(const PetriNet& net, const Marking& m) {
  const DenseMarking dense = net.to_dense(m);
  std::vector<std::size_t> idx;
  net.enabled_into(dense, idx);
  std::vector<std::string> ids;
  ids.reserve(idx.size());
  for (std::size_t t : idx) ids.push_back(net.transitions()[t].id);
  return ids;
}

Marking fire(const PetriNet& net, const Marking& m, const std::string& transition_id) {
  auto t = net.transition_index(transition_id);
  if (!t) throw Error(ErrorCode::NotEnabled, transition_id, "no such transition");
  DenseMarking dense = net.to_dense(m);
  if (!net.is_enabled(dense, *t)) throw Error(ErrorCode::NotEnabled, transition_id);
  net.fire_in_place(dense, *t);
  return net.from_dense(dense);
}

std::vector<std::string> decision_places(const PetriNet& net) {
  std::vector<std::size_t> fanout(net.place_count(), 0);
  for (std::size_t t = 0; t < net.transition_count(); ++t) {
    for (std::size_t p : net.inputs(t)) ++fanout[p];
  }
  std::vector<std::string> out;
  for (std::size_t p = 0; p < net.place_count(); ++p) {
    if (fanout[p] > 1) out.push_back(net.places()[p]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

struct ReplayState {
  DenseMarking marking;
  std::size_t position;

  bool operator==(const ReplayState&) const = default;
};

struct ReplayStateHash {
  std::size_t operator()(const ReplayState& s) const noexcept {
    std::size_t h = std::hash<std::size_t>{}(s.position);
    for (std::uint32_t c : s.marking) {
      h ^= std::hash<std::uint32_t>{}(c) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

}  // namespace

bool replay(const PetriNet& net, std::span<const std::string> activities,
            const ReplayOptions& options) {
  std::unordered_set<ReplayState, ReplayStateHash> visited;
  std::deque<ReplayState> frontier;
  ReplayState start{net.dense_initial(), 0};
  visited.insert(start);
  frontier.push_back(std::move(start));
  std::vector<std::size_t> candidates;

  while (!frontier.empty()) {
    ReplayState state = std::move(frontier.front());
    frontier.pop_front();
    if (state.position == activities.size() && net.is_final(state.marking)) {
      return true;
    }
    net.enabled_into(state.marking, candidates);
    for (std::size_t t : candidates) {
      const Transition& tr = net.transitions()[t];
      std::size_t next_pos = state.position;
      if (tr.visible) {
        if (state.position == activities.size() ||
            tr.label != activities[state.position]) {
          continue;
        }
        ++next_pos;
      }
      ReplayState next{state.marking, next_pos};
      net.fire_in_place(next.marking, t);
      if (visited.insert(next).second) {
        if (visited.size() > options.state_cap) {
          throw Error(ErrorCode::StateCapExceeded, std::to_string(options.state_cap),
                      "replay search exhausted its budget");
        }
        frontier.push_back(std::move(next));
      }
    }
  }
  return false;
}

}  // namespace galign
