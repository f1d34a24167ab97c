#include "opaq/fsa.hpp"

#include <algorithm>
#include <deque>

namespace opaq {

StateSet ur(const Automaton& a, const StateSet& b) {
  std::vector<bool> seen(a.num_states(), false);
  std::vector<StateId> stack;
  for (StateId s : b) {
    if (s >= a.num_states()) throw InputError("ur: state id out of range");
    if (!seen[s]) {
      seen[s] = true;
      stack.push_back(s);
    }
  }
  StateSet out = stack;
  while (!stack.empty()) {
    StateId x = stack.back();
    stack.pop_back();
    for (const Transition& t : a.out(x, kTau)) {
      if (!seen[t.dst]) {
        seen[t.dst] = true;
        stack.push_back(t.dst);
        out.push_back(t.dst);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

StateSet weak_successors(const Automaton& a, const StateSet& closed_sources, EventId e) {
  StateSet next;
  for (StateId x : closed_sources)
    for (const Transition& t : a.out(x, e)) next.push_back(t.dst);
  std::sort(next.begin(), next.end());
  next.erase(std::unique(next.begin(), next.end()), next.end());
  return ur(a, next);
}

StateSet weak_step(const Automaton& a, const StateSet& sources, const Trace& s) {
  StateSet cur = ur(a, sources);
  for (EventId e : s) {
    if (e == kTau) throw InputError("weak_step: trace must not contain tau");
    if (!a.has_event(e)) throw InputError("weak_step: unknown event '" + label(e) + "'");
    cur = weak_successors(a, cur, e);
  }
  return cur;
}

Trace project(const Trace& t) {
  Trace r;
  for (EventId e : t)
    if (e != kTau) r.push_back(e);
  return r;
}

namespace {

template <class Map>
Automaton relabel(const Automaton& a, Map map) {
  AutomatonBuilder b(a.name());
  for (const StateInfo& s : a.states()) b.add_state(s);
  for (EventId e : a.alphabet()) b.add_event(map(e));
  for (const Transition& t : a.transitions())
    b.add_transition(t.src, t.event == kTau ? kTau : map(t.event), t.dst);
  b.set_origin_kind(a.origin_kind());
  if (a.origin_kind() != OriginKind::None)
    for (StateId s = 0; s < a.num_states(); ++s)
      b.set_origin(s, {a.origin(s).begin(), a.origin(s).end()});
  return std::move(b).build();
}

}  // namespace

Automaton rename_forward(const Automaton& a) {
  return relabel(a, [](EventId e) { return EventTable::global().forward(e); });
}

Automaton rename_reverse(const Automaton& a) {
  return relabel(a, [](EventId e) { return EventTable::global().reverse(e); });
}

Automaton reverse(const Automaton& a) {
  AutomatonBuilder b(a.name());
  for (const StateInfo& s : a.states()) {
    StateInfo r = s;
    r.initial = true;
    b.add_state(std::move(r));
  }
  b.add_events(a.alphabet());
  for (const Transition& t : a.transitions()) b.add_transition(t.dst, t.event, t.src);
  return std::move(b).build();
}

Partition Partition::from_blocks(std::vector<StateSet> blocks, std::size_t num_states) {
  Partition p;
  p.block_of_.assign(num_states, UINT32_MAX);
  for (auto& blk : blocks) {
    if (blk.empty()) throw InputError("partition has an empty block");
    std::sort(blk.begin(), blk.end());
  }
  std::sort(blocks.begin(), blocks.end());
  for (std::uint32_t i = 0; i < blocks.size(); ++i) {
    for (StateId s : blocks[i]) {
      if (s >= num_states) throw InputError("partition refers to an undeclared state");
      if (p.block_of_[s] != UINT32_MAX) throw InputError("partition blocks are not disjoint");
      p.block_of_[s] = i;
    }
  }
  if (std::find(p.block_of_.begin(), p.block_of_.end(), UINT32_MAX) != p.block_of_.end())
    throw InputError("partition does not cover all states");
  p.blocks_ = std::move(blocks);
  return p;
}

Partition Partition::from_labels(const std::vector<std::uint32_t>& labels) {
  std::vector<StateSet> blocks;
  // First occurrence order of labels is increasing in smallest member, so blocks come out sorted.
  std::vector<std::int64_t> map;
  for (StateId s = 0; s < labels.size(); ++s) {
    auto l = labels[s];
    if (l >= map.size()) map.resize(l + 1, -1);
    if (map[l] < 0) {
      map[l] = static_cast<std::int64_t>(blocks.size());
      blocks.emplace_back();
    }
    blocks[map[l]].push_back(s);
  }
  Partition p;
  p.block_of_.resize(labels.size());
  for (std::uint32_t i = 0; i < blocks.size(); ++i)
    for (StateId s : blocks[i]) p.block_of_[s] = i;
  p.blocks_ = std::move(blocks);
  return p;
}

Partition Partition::identity(std::size_t num_states) {
  std::vector<std::uint32_t> labels(num_states);
  for (std::uint32_t i = 0; i < num_states; ++i) labels[i] = i;
  return from_labels(labels);
}

Automaton quotient(const Automaton& a, const Partition& p) {
  if (p.blocks().empty() && a.num_states() != 0) throw InputError("quotient: empty partition");
  std::size_t covered = 0;
  for (const auto& blk : p.blocks()) covered += blk.size();
  if (covered != a.num_states()) throw InputError("quotient: partition does not cover the states");
  AutomatonBuilder b(a.name());
  b.set_origin_kind(OriginKind::Members);
  for (const auto& blk : p.blocks()) {
    StateInfo info;
    info.name = blk.size() == 1 ? a.state(blk[0]).name : "[" + a.state(blk[0]).name + "]";
    for (StateId s : blk) {
      info.initial |= a.state(s).initial;
      info.marked |= a.state(s).marked;
      info.secret |= a.state(s).secret;
    }
    StateId q = b.add_state(std::move(info));
    b.set_origin(q, blk);
  }
  b.add_events(a.alphabet());
  for (const Transition& t : a.transitions())
    b.add_transition(p.block_of(t.src), t.event, p.block_of(t.dst));
  return std::move(b).build();
}

Automaton remove_tau_selfloops(const Automaton& a) {
  AutomatonBuilder b(a.name());
  b.set_origin_kind(a.origin_kind());
  for (StateId s = 0; s < a.num_states(); ++s) {
    b.add_state(a.state(s));
    if (a.origin_kind() != OriginKind::None) b.set_origin(s, {a.origin(s).begin(), a.origin(s).end()});
  }
  b.add_events(a.alphabet());
  for (const Transition& t : a.transitions())
    if (!(t.event == kTau && t.src == t.dst)) b.add_transition(t.src, t.event, t.dst);
  return std::move(b).build();
}

Automaton hide(const Automaton& a, const std::vector<EventId>& events) {
  std::vector<EventId> hidden = events;
  std::sort(hidden.begin(), hidden.end());
  auto is_hidden = [&](EventId e) { return std::binary_search(hidden.begin(), hidden.end(), e); };
  AutomatonBuilder b(a.name());
  b.set_origin_kind(a.origin_kind());
  for (StateId s = 0; s < a.num_states(); ++s) {
    b.add_state(a.state(s));
    if (a.origin_kind() != OriginKind::None) b.set_origin(s, {a.origin(s).begin(), a.origin(s).end()});
  }
  for (EventId e : a.alphabet())
    if (!is_hidden(e)) b.add_event(e);
  for (const Transition& t : a.transitions())
    b.add_transition(t.src, is_hidden(t.event) ? kTau : t.event, t.dst);
  return std::move(b).build();
}

std::vector<bool> reachable(const Automaton& a) {
  std::vector<bool> seen(a.num_states(), false);
  std::vector<StateId> stack;
  for (StateId s : a.initial_states()) {
    seen[s] = true;
    stack.push_back(s);
  }
  while (!stack.empty()) {
    StateId x = stack.back();
    stack.pop_back();
    for (const Transition& t : a.out(x))
      if (!seen[t.dst]) {
        seen[t.dst] = true;
        stack.push_back(t.dst);
      }
  }
  return seen;
}

std::vector<bool> coreachable(const Automaton& a) {
  const auto n = a.num_states();
  std::vector<std::uint32_t> in_begin(n + 1, 0);
  for (const Transition& t : a.transitions()) ++in_begin[t.dst + 1];
  for (std::size_t i = 0; i < n; ++i) in_begin[i + 1] += in_begin[i];
  std::vector<StateId> preds(a.num_transitions());
  std::vector<std::uint32_t> fill(in_begin.begin(), in_begin.end() - 1);
  for (const Transition& t : a.transitions()) preds[fill[t.dst]++] = t.src;
  std::vector<bool> seen(n, false);
  std::vector<StateId> stack;
  for (StateId s : a.marked_states()) {
    seen[s] = true;
    stack.push_back(s);
  }
  while (!stack.empty()) {
    StateId x = stack.back();
    stack.pop_back();
    for (auto i = in_begin[x]; i < in_begin[x + 1]; ++i)
      if (!seen[preds[i]]) {
        seen[preds[i]] = true;
        stack.push_back(preds[i]);
      }
  }
  return seen;
}

}  // namespace opaq

namespace opaq {

std::vector<EventId> canonical_events(const Automaton& a) {
  std::vector<EventId> es(a.alphabet().begin(), a.alphabet().end());
  std::sort(es.begin(), es.end(), event_less);
  es.insert(es.begin(), kTau);
  return es;
}

}  // namespace opaq
