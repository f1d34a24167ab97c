#include "opaq/nonblocking.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "opaq/abstraction.hpp"

namespace opaq {

std::optional<std::size_t> psi_blame(const Trace& t) {
  for (auto it = t.rbegin(); it != t.rend(); ++it) {
    const EventInfo& info = EventTable::global().info(*it);
    if (info.kind == EventKind::Psi) {
      if (info.psi_index == 0) return std::nullopt;
      return info.psi_index - 1;
    }
  }
  return std::nullopt;
}

NonblockingResult check_nonblocking(const Automaton& a) {
  NonblockingResult r;
  r.max_intermediate_states = a.num_states();
  std::vector<bool> co = coreachable(a);
  auto path = shortest_path(a, [&](StateId x) { return !co[x]; });
  if (path) {
    r.nonblocking = false;
    Counterexample cex;
    cex.trace = path->trace;
    if (a.origin_kind() == OriginKind::Tuple) {
      auto o = a.origin(path->end);
      cex.end_state.assign(o.begin(), o.end());
    } else {
      cex.end_state = {path->end};
    }
    cex.end_description = a.state(path->end).name;
    cex.component_blame = psi_blame(cex.trace);
    r.counterexample = std::move(cex);
  }
  return r;
}

namespace {

struct Node {
  Automaton aut;                       // visible alphabet, abstracted
  std::vector<std::size_t> children;   // empty for leaves
  std::size_t leaf = 0;                // component index of a leaf
  Automaton product;                   // children composed, before hiding
  std::vector<EventId> hidden;         // sorted
  std::vector<std::uint32_t> class_of; // product state -> aut state
};

Node abstract_node(Automaton product, std::vector<EventId> hidden, std::vector<std::size_t> children,
                   std::size_t id) {
  Node n;
  std::sort(hidden.begin(), hidden.end());
  Automaton h = hide(product, hidden);
  Partition p = marking_observation_equivalence(h);
  n.aut = remove_tau_selfloops(quotient(h, p)).renamed("n" + std::to_string(id));
  n.class_of.resize(product.num_states());
  for (StateId s = 0; s < product.num_states(); ++s) n.class_of[s] = p.block_of(s);
  n.children = std::move(children);
  n.product = std::move(product);
  n.hidden = std::move(hidden);
  return n;
}

struct Candidate {
  double score;
  std::size_t a, b;
  bool operator>(const Candidate& o) const {
    return std::tie(score, a, b) > std::tie(o.score, o.a, o.b);
  }
};

std::size_t shared_count(const Automaton& a, const Automaton& b) {
  std::size_t n = 0;
  auto x = a.alphabet(), y = b.alphabet();
  for (std::size_t i = 0, j = 0; i < x.size() && j < y.size();) {
    if (x[i] < y[j]) ++i;
    else if (y[j] < x[i]) ++j;
    else { ++n; ++i; ++j; }
  }
  return n;
}

// A concrete path in a node's product whose visible projection is `vis` and whose end lies in
// class `target`. Hidden events and tau move freely.
std::vector<Transition> concrete_path(const Node& n, const Trace& vis, StateId target) {
  const Automaton& p = n.product;
  const std::size_t len = vis.size();
  const std::size_t width = len + 1;
  auto is_hidden = [&](EventId e) {
    return e == kTau || std::binary_search(n.hidden.begin(), n.hidden.end(), e);
  };
  const auto events = canonical_events(p);
  std::unordered_map<std::uint64_t, std::pair<std::uint64_t, Transition>> parent;
  std::vector<std::uint64_t> queue;
  for (StateId s : p.initial_states()) {
    std::uint64_t k = std::uint64_t(s) * width;
    if (parent.try_emplace(k, UINT64_MAX, Transition{}).second) queue.push_back(k);
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    std::uint64_t k = queue[head];
    auto s = static_cast<StateId>(k / width);
    std::size_t idx = k % width;
    if (idx == len && n.class_of[s] == target) {
      std::vector<Transition> path;
      for (std::uint64_t c = k; parent.at(c).first != UINT64_MAX; c = parent.at(c).first)
        path.push_back(parent.at(c).second);
      std::reverse(path.begin(), path.end());
      return path;
    }
    for (EventId e : events) {
      std::size_t next_idx;
      if (is_hidden(e)) next_idx = idx;
      else if (idx < len && vis[idx] == e) next_idx = idx + 1;
      else continue;
      for (const Transition& t : p.out(s, e)) {
        std::uint64_t nk = std::uint64_t(t.dst) * width + next_idx;
        if (parent.try_emplace(nk, k, t).second) queue.push_back(nk);
      }
    }
  }
  throw std::logic_error("counterexample expansion failed: abstraction is not a weak bisimulation");
}

}  // namespace

NonblockingResult check_nonblocking_compositional(const std::vector<Automaton>& components,
                                                  const CompositionalOptions& opts) {
  if (components.empty()) throw InputError("check_nonblocking_compositional: no components");
  NonblockingResult result;
  std::vector<Node> nodes;
  std::vector<bool> alive;
  std::unordered_map<EventId, std::size_t> event_count;
  std::unordered_map<EventId, std::vector<std::size_t>> event_nodes;
  std::set<std::pair<std::size_t, std::size_t>> by_size;
  std::priority_queue<Candidate, std::vector<Candidate>, std::greater<>> heap;

  for (const Automaton& c : components)
    for (EventId e : c.alphabet()) ++event_count[e];

  auto register_node = [&](std::size_t id) {
    alive.resize(nodes.size(), false);
    alive[id] = true;
    const Automaton& a = nodes[id].aut;
    by_size.emplace(a.num_states(), id);
    std::vector<std::size_t> partners;
    for (EventId e : a.alphabet()) {
      auto& list = event_nodes[e];
      std::erase_if(list, [&](std::size_t x) { return !alive[x]; });
      if (event_count[e] <= opts.max_event_fanout)
        for (std::size_t x : list) partners.push_back(x);
      list.push_back(id);
    }
    std::sort(partners.begin(), partners.end());
    partners.erase(std::unique(partners.begin(), partners.end()), partners.end());
    for (std::size_t x : partners) {
      const Automaton& b = nodes[x].aut;
      double score = double(a.num_states()) * double(b.num_states()) /
                     double(std::max<std::size_t>(1, shared_count(a, b)));
      heap.push({score, std::min(x, id), std::max(x, id)});
    }
  };
  auto retire = [&](std::size_t id) {
    alive[id] = false;
    by_size.erase({nodes[id].aut.num_states(), id});
    for (EventId e : nodes[id].aut.alphabet()) --event_count[e];
  };

  // Leaves, each followed by a unary hide-and-abstract step.
  for (std::size_t i = 0; i < components.size(); ++i) {
    Node leaf;
    leaf.aut = components[i];
    leaf.leaf = i;
    result.max_intermediate_states = std::max(result.max_intermediate_states, leaf.aut.num_states());
    nodes.push_back(std::move(leaf));
    alive.push_back(false);
  }
  for (std::size_t i = 0; i < components.size(); ++i) {
    std::vector<EventId> hidden;
    for (EventId e : components[i].alphabet())
      if (event_count[e] == 1) hidden.push_back(e);
    std::size_t id = nodes.size();
    nodes.push_back(abstract_node(components[i], std::move(hidden), {i}, id));
    register_node(id);
  }

  while (by_size.size() > 1) {
    std::size_t a = 0, b = 0;
    bool found = false;
    while (!heap.empty()) {
      Candidate c = heap.top();
      heap.pop();
      if (alive[c.a] && alive[c.b]) {
        a = c.a;
        b = c.b;
        found = true;
        break;
      }
    }
    if (!found) {
      auto it = by_size.begin();
      a = it->second;
      b = std::next(it)->second;
    }
    retire(a);
    retire(b);
    SyncOptions so;
    so.names = false;
    Automaton product = sync(nodes[a].aut.without_origin(), nodes[b].aut.without_origin(),
                             SecretMode::Or, so);
    ++result.compositions;
    result.max_intermediate_states = std::max(result.max_intermediate_states, product.num_states());
    std::vector<EventId> hidden;
    for (EventId e : product.alphabet())
      if (event_count[e] == 0) hidden.push_back(e);
    std::size_t id = nodes.size();
    Node n = abstract_node(std::move(product), std::move(hidden), {a, b}, id);
    for (EventId e : n.aut.alphabet()) ++event_count[e];
    nodes.push_back(std::move(n));
    register_node(id);
  }

  const std::size_t root = by_size.begin()->second;
  NonblockingResult final_check = check_nonblocking(nodes[root].aut);
  if (final_check.nonblocking) return result;
  result.nonblocking = false;

  // Expand the abstract counterexample top-down, then merge traces bottom-up.
  struct Job {
    std::size_t node;
    Trace vis;
    StateId target;
  };
  std::vector<Job> order;
  order.push_back({root, project(final_check.counterexample->trace),
                   final_check.counterexample->end_state.front()});
  std::unordered_map<std::size_t, Trace> visible_path;  // node -> non-tau product events
  std::vector<StateId> end_tuple(components.size(), 0);
  for (std::size_t i = 0; i < order.size(); ++i) {
    Job job = order[i];
    const Node& n = nodes[job.node];
    if (n.children.empty()) {
      end_tuple[n.leaf] = job.target;
      continue;
    }
    std::vector<Transition> path = concrete_path(n, job.vis, job.target);
    Trace events;
    for (const Transition& t : path)
      if (t.event != kTau) events.push_back(t.event);
    StateId end = path.empty() ? 0 : path.back().dst;
    if (path.empty()) {
      // The target class contains an initial product state.
      for (StateId s : n.product.initial_states())
        if (n.class_of[s] == job.target) {
          end = s;
          break;
        }
    }
    for (std::size_t c = 0; c < n.children.size(); ++c) {
      const Automaton& child = nodes[n.children[c]].aut;
      StateId child_end = n.children.size() == 1 ? end : n.product.origin(end)[c];
      order.push_back({n.children[c], project_trace(events, child.alphabet()), child_end});
    }
    visible_path.emplace(job.node, std::move(events));
  }
  std::unordered_map<std::size_t, Trace> full;
  for (std::size_t i = order.size(); i-- > 0;) {
    const Job& job = order[i];
    const Node& n = nodes[job.node];
    if (n.children.empty()) {
      full.emplace(job.node, job.vis);
      continue;
    }
    const Trace& events = visible_path.at(job.node);
    std::vector<std::size_t> pos(n.children.size(), 0);
    Trace merged;
    auto flush_internal = [&](std::size_t c) {
      const Trace& fc = full.at(n.children[c]);
      const Automaton& child = nodes[n.children[c]].aut;
      while (pos[c] < fc.size() && !child.has_event(fc[pos[c]])) merged.push_back(fc[pos[c]++]);
    };
    for (EventId e : events) {
      for (std::size_t c = 0; c < n.children.size(); ++c) {
        const Automaton& child = nodes[n.children[c]].aut;
        if (!child.has_event(e)) continue;
        flush_internal(c);
        ++pos[c];  // the child's own occurrence of e
      }
      merged.push_back(e);
    }
    for (std::size_t c = 0; c < n.children.size(); ++c) flush_internal(c);
    full.emplace(job.node, std::move(merged));
  }

  Counterexample cex;
  cex.trace = full.at(root);
  cex.end_state = end_tuple;
  std::string desc = "(";
  for (std::size_t i = 0; i < components.size(); ++i) {
    if (i) desc += ',';
    desc += components[i].state(end_tuple[i]).name;
  }
  cex.end_description = desc + ")";
  cex.component_blame = psi_blame(cex.trace);
  result.counterexample = std::move(cex);
  return result;
}

namespace {

using Tuple = std::vector<StateId>;

struct TupleHash {
  std::size_t operator()(const Tuple& t) const noexcept { return StateSetHash{}(t); }
};

// Forward estimate of the synchronous product after an observable trace, by tuple-set simulation.
std::vector<Tuple> forward_estimate(const ModularSystem& sys, const Trace& trace, std::size_t budget) {
  const std::size_t n = sys.components.size();
  std::unordered_set<Tuple, TupleHash> current;
  auto close = [&](std::unordered_set<Tuple, TupleHash>& set) {
    std::vector<Tuple> stack(set.begin(), set.end());
    while (!stack.empty()) {
      Tuple t = std::move(stack.back());
      stack.pop_back();
      for (std::size_t j = 0; j < n; ++j)
        for (const Transition& tr : sys.components[j].out(t[j], kTau)) {
          Tuple u = t;
          u[j] = tr.dst;
          if (set.insert(u).second) {
            if (set.size() > budget) throw BudgetExceeded("forward estimate exceeds budget");
            stack.push_back(std::move(u));
          }
        }
    }
  };
  // All combinations of initial states.
  std::vector<Tuple> init{{}};
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Tuple> next;
    for (const Tuple& t : init)
      for (StateId s : sys.components[j].initial_states()) {
        Tuple u = t;
        u.push_back(s);
        next.push_back(std::move(u));
        if (next.size() > budget) throw BudgetExceeded("forward estimate exceeds budget");
      }
    init = std::move(next);
  }
  current.insert(init.begin(), init.end());
  close(current);
  for (EventId e : trace) {
    std::unordered_set<Tuple, TupleHash> next;
    for (const Tuple& t : current) {
      std::vector<Tuple> partial{t};
      for (std::size_t j = 0; j < n && !partial.empty(); ++j) {
        if (!sys.components[j].has_event(e)) continue;
        std::vector<Tuple> moved;
        for (const Tuple& p : partial)
          for (const Transition& tr : sys.components[j].out(p[j], e)) {
            Tuple u = p;
            u[j] = tr.dst;
            moved.push_back(std::move(u));
          }
        partial = std::move(moved);
      }
      for (Tuple& p : partial) {
        next.insert(std::move(p));
        if (next.size() > budget) throw BudgetExceeded("forward estimate exceeds budget");
      }
    }
    close(next);
    current = std::move(next);
  }
  return {current.begin(), current.end()};
}

StateSet expand_members(const Partition& classes, const StateSet& abstract_states) {
  StateSet out;
  for (StateId s : abstract_states)
    for (StateId m : classes.blocks().at(s)) out.push_back(m);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

Diagnosis diagnose_overapprox(const ModularSystem& sys, const PsiSystem& psi,
                              const Counterexample& cex, std::size_t state_budget) {
  if (psi.property.kind != Property::Kind::KStep)
    throw InputError("diagnose_overapprox: counterexample must come from a two-way psi-system");
  const std::size_t n = sys.components.size();
  if (psi.components.size() != n) throw InputError("diagnose_overapprox: system/psi-system size mismatch");
  if (cex.trace.empty() || !is_psi(cex.trace.back()))
    throw InputError("malformed counterexample: trace must end with a psi event");

  // Replay everything but the final psi event in each component.
  std::vector<StateId> state(n);
  for (std::size_t j = 0; j < n; ++j) {
    const Automaton& a = psi.components[j].psi.automaton;
    state[j] = a.initial_states().front();
    for (std::size_t i = 0; i + 1 < cex.trace.size(); ++i) {
      EventId e = cex.trace[i];
      if (e == kTau) throw InputError("malformed counterexample: tau in a two-way trace");
      if (!a.has_event(e)) continue;
      auto out = a.out(state[j], e);
      if (out.size() != 1)
        throw InputError("malformed counterexample: event '" + label(e) + "' not enabled in component " +
                         std::to_string(j));
      state[j] = out.front().dst;
    }
  }
  EventId last = cex.trace.back();
  std::vector<bool> blamed(n, false);
  if (auto b = psi_blame(cex.trace); b && EventTable::global().info(last).psi_index != 0) {
    if (*b >= n) throw InputError("malformed counterexample: psi index out of range");
    blamed[*b] = true;
  } else {
    std::fill(blamed.begin(), blamed.end(), true);
  }
  std::vector<StateSet> allowed(n);
  for (std::size_t j = 0; j < n; ++j) {
    const PsiComponent& c = psi.components[j];
    const auto* h = std::get_if<TwoWayObserver>(&c.observer);
    if (!h) throw InputError("diagnose_overapprox: component without two-way observer");
    if (state[j] >= h->automaton.num_states())
      throw InputError("malformed counterexample: component " + std::to_string(j) + " is already blocked");
    if (blamed[j] && !std::binary_search(c.psi.psi_states.begin(), c.psi.psi_states.end(), state[j]))
      throw InputError("malformed counterexample: blamed component is not in a psi-state");
    allowed[j] = expand_members(c.classes, blamed[j] ? h->intersection(state[j]) : h->reverse[state[j]]);
  }

  std::vector<Tuple> estimate;
  try {
    estimate = forward_estimate(sys, decode_forward(cex.trace), state_budget);
  } catch (const BudgetExceeded&) {
    return Diagnosis::Unknown;
  }
  bool candidate = std::any_of(estimate.begin(), estimate.end(), [&](const Tuple& t) {
    for (std::size_t j = 0; j < n; ++j)
      if (!std::binary_search(allowed[j].begin(), allowed[j].end(), t[j])) return false;
    return true;
  });
  if (!candidate) return Diagnosis::OverApproximation;
  try {
    SyncOptions so;
    so.max_states = state_budget;
    so.names = false;
    Automaton mono = sync_all(sys, so);
    if (oracle_kstep(mono, psi.property.k).status == Status::NotOpaque)
      return Diagnosis::GenuineViolationConfirmed;
  } catch (const BudgetExceeded&) {
  }
  return Diagnosis::Unknown;
}

}  // namespace opaq
