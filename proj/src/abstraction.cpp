#include "opaq/abstraction.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace opaq {

namespace {

// x =e=> y for e in alphabet, plus x =eps=> y encoded with kTau.
struct Saturated {
  std::vector<std::uint32_t> begin;
  std::vector<std::pair<EventId, StateId>> moves;  // sorted per state
};

Saturated saturate(const Automaton& a) {
  const auto n = a.num_states();
  std::vector<StateSet> closure(n);
  for (StateId x = 0; x < n; ++x) closure[x] = ur(a, {x});
  Saturated sat;
  sat.begin.reserve(n + 1);
  sat.begin.push_back(0);
  std::vector<bool> mark(n, false);
  std::vector<StateId> touched;
  for (StateId x = 0; x < n; ++x) {
    std::size_t first = sat.moves.size();
    for (StateId y : closure[x]) sat.moves.emplace_back(kTau, y);
    // group observable successors of the closure by event
    std::map<EventId, StateSet> post;
    for (StateId y : closure[x])
      for (const Transition& t : a.out(y))
        if (t.event != kTau) post[t.event].push_back(t.dst);
    for (auto& [e, dsts] : post) {
      for (StateId d : dsts)
        for (StateId z : closure[d])
          if (!mark[z]) {
            mark[z] = true;
            touched.push_back(z);
          }
      std::sort(touched.begin(), touched.end());
      for (StateId z : touched) {
        sat.moves.emplace_back(e, z);
        mark[z] = false;
      }
      touched.clear();
    }
    std::sort(sat.moves.begin() + first, sat.moves.end());
    sat.begin.push_back(static_cast<std::uint32_t>(sat.moves.size()));
  }
  return sat;
}

struct VecHash {
  std::size_t operator()(const std::vector<std::uint64_t>& v) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto x : v) h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
  }
};

}  // namespace

Partition weak_bisimulation(const Automaton& a, const std::vector<std::uint32_t>& initial_labels) {
  const auto n = a.num_states();
  if (initial_labels.size() != n) throw InputError("weak_bisimulation: label count mismatch");
  if (n == 0) return Partition{};
  Saturated sat = saturate(a);
  Partition initial = Partition::from_labels(initial_labels);
  std::vector<std::uint32_t> label(n);
  for (StateId x = 0; x < n; ++x) label[x] = initial.block_of(x);
  std::size_t count = initial.size();

  std::vector<std::uint64_t> sig;
  while (true) {
    std::unordered_map<std::vector<std::uint64_t>, std::uint32_t, VecHash> ids;
    std::vector<std::uint32_t> next(n);
    for (StateId x = 0; x < n; ++x) {
      sig.clear();
      sig.push_back(label[x]);
      std::size_t mark = sig.size();
      for (auto i = sat.begin[x]; i < sat.begin[x + 1]; ++i) {
        auto [e, y] = sat.moves[i];
        sig.push_back((std::uint64_t(e) << 32) | label[y]);
      }
      std::sort(sig.begin() + mark, sig.end());
      sig.erase(std::unique(sig.begin() + mark, sig.end()), sig.end());
      auto [it, fresh] = ids.try_emplace(sig, static_cast<std::uint32_t>(ids.size()));
      next[x] = it->second;
    }
    bool stable = ids.size() == count;
    label = std::move(next);
    count = ids.size();
    if (stable) break;
  }
  return Partition::from_labels(label);
}

Partition opaque_observation_equivalence(const Automaton& a) {
  std::vector<std::uint32_t> init(a.num_states());
  for (StateId x = 0; x < a.num_states(); ++x)
    init[x] = (a.state(x).secret ? 1u : 0u) | (a.state(x).marked ? 2u : 0u);
  return weak_bisimulation(a, init);
}

Partition marking_observation_equivalence(const Automaton& a) {
  std::vector<std::uint32_t> init(a.num_states());
  for (StateId x = 0; x < a.num_states(); ++x) init[x] = a.state(x).marked ? 1u : 0u;
  return weak_bisimulation(a, init);
}

Automaton abstract_component(const Automaton& a) {
  return remove_tau_selfloops(quotient(a, opaque_observation_equivalence(a)));
}

}  // namespace opaq
