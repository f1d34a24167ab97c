#include "opaq/io.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>

namespace opaq {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& field, const std::string& msg) {
  throw InputError(where + ": " + field + ": " + msg);
}

const json& require(const json& j, const char* key, const std::string& where, const std::string& ctx) {
  if (!j.is_object() || !j.contains(key)) fail(where, ctx + key, "missing field");
  return j.at(key);
}

std::string require_string(const json& j, const std::string& where, const std::string& field) {
  if (!j.is_string()) fail(where, field, "expected a string");
  return j.get<std::string>();
}

bool optional_bool(const json& j, const char* key, const std::string& where, const std::string& ctx) {
  if (!j.contains(key)) return false;
  if (!j.at(key).is_boolean()) fail(where, ctx + key, "expected a boolean");
  return j.at(key).get<bool>();
}

}  // namespace

EventId parse_event_label(std::string_view l, bool allow_reserved) {
  if (!is_reserved_label(l)) return event(l);
  if (!allow_reserved) throw InputError("event label '" + std::string(l) + "' is reserved");
  if (l == "__psi") return EventTable::global().psi(0);
  if (l.starts_with("__psi_")) {
    std::string idx(l.substr(6));
    if (idx.empty() || idx.find_first_not_of("0123456789") != std::string::npos)
      throw InputError("malformed psi label '" + std::string(l) + "'");
    return EventTable::global().psi(static_cast<std::uint32_t>(std::stoul(idx)));
  }
  const std::string_view eps = "ε";
  if (l.size() > 2 && l.front() == '(' && l.back() == ')') {
    std::string_view inner = l.substr(1, l.size() - 2);
    if (inner.ends_with(std::string(",") + std::string(eps)))
      return EventTable::global().forward(event(inner.substr(0, inner.size() - eps.size() - 1)));
    if (inner.starts_with(std::string(eps) + ","))
      return EventTable::global().reverse(event(inner.substr(eps.size() + 1)));
  }
  throw InputError("malformed reserved event label '" + std::string(l) + "'");
}

Automaton model_from_json(const json& j, const std::string& where, bool allow_reserved) {
  if (!j.is_object()) fail(where, "<root>", "expected an object");
  std::string name;
  if (j.contains("name")) name = require_string(j.at("name"), where, "name");
  std::string tau_label = "tau";
  if (j.contains("tau_label")) tau_label = require_string(j.at("tau_label"), where, "tau_label");
  AutomatonBuilder b(name);

  const json& alphabet = require(j, "alphabet", where, "");
  if (!alphabet.is_array()) fail(where, "alphabet", "expected an array");
  std::unordered_map<std::string, EventId> events;
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    std::string field = "alphabet[" + std::to_string(i) + "]";
    std::string l = require_string(alphabet[i], where, field);
    if (l == tau_label) fail(where, field, "the unobservable event '" + l + "' cannot be declared");
    if (events.count(l)) fail(where, field, "duplicate event '" + l + "'");
    try {
      events.emplace(l, parse_event_label(l, allow_reserved));
    } catch (const InputError& e) {
      fail(where, field, e.what());
    }
    b.add_event(events.at(l));
  }

  const json& states = require(j, "states", where, "");
  if (!states.is_array()) fail(where, "states", "expected an array");
  std::unordered_map<std::string, StateId> ids;
  for (std::size_t i = 0; i < states.size(); ++i) {
    std::string ctx = "states[" + std::to_string(i) + "].";
    const json& s = states[i];
    if (!s.is_object()) fail(where, "states[" + std::to_string(i) + "]", "expected an object");
    std::string sname = require_string(require(s, "name", where, ctx), where, ctx + "name");
    if (ids.count(sname)) fail(where, ctx + "name", "duplicate state name '" + sname + "'");
    ids.emplace(sname, b.add_state(sname, optional_bool(s, "initial", where, ctx),
                                   optional_bool(s, "marked", where, ctx),
                                   optional_bool(s, "secret", where, ctx)));
  }

  const json& trans = require(j, "transitions", where, "");
  if (!trans.is_array()) fail(where, "transitions", "expected an array");
  for (std::size_t i = 0; i < trans.size(); ++i) {
    std::string field = "transitions[" + std::to_string(i) + "]";
    const json& t = trans[i];
    if (!t.is_array() || t.size() != 3) fail(where, field, "expected [src, event, dst]");
    std::string src = require_string(t[0], where, field + "[0]");
    std::string ev = require_string(t[1], where, field + "[1]");
    std::string dst = require_string(t[2], where, field + "[2]");
    if (!ids.count(src)) fail(where, field + "[0]", "unknown state '" + src + "'");
    if (!ids.count(dst)) fail(where, field + "[2]", "unknown state '" + dst + "'");
    EventId e = kTau;
    if (ev != tau_label) {
      auto it = events.find(ev);
      if (it == events.end()) fail(where, field + "[1]", "event '" + ev + "' is not in the alphabet");
      e = it->second;
    }
    b.add_transition(ids.at(src), e, ids.at(dst));
  }
  try {
    return std::move(b).build();
  } catch (const InputError& e) {
    fail(where, "<model>", e.what());
  }
}

json model_to_json(const Automaton& a) {
  std::string tau_label = "tau";
  auto taken = [&](const std::string& l) {
    for (EventId e : a.alphabet())
      if (label(e) == l) return true;
    return false;
  };
  while (taken(tau_label)) tau_label = "_" + tau_label;
  json j;
  j["name"] = a.name();
  std::vector<EventId> alphabet(a.alphabet().begin(), a.alphabet().end());
  std::sort(alphabet.begin(), alphabet.end(), event_less);
  j["alphabet"] = json::array();
  for (EventId e : alphabet) j["alphabet"].push_back(label(e));
  j["tau_label"] = tau_label;
  j["states"] = json::array();
  for (const StateInfo& s : a.states())
    j["states"].push_back(
        {{"name", s.name}, {"initial", s.initial}, {"marked", s.marked}, {"secret", s.secret}});
  std::vector<Transition> ts(a.transitions().begin(), a.transitions().end());
  std::sort(ts.begin(), ts.end(), [](const Transition& x, const Transition& y) {
    if (x.src != y.src) return x.src < y.src;
    if (x.event != y.event) return x.event == kTau || (y.event != kTau && event_less(x.event, y.event));
    return x.dst < y.dst;
  });
  j["transitions"] = json::array();
  for (const Transition& t : ts)
    j["transitions"].push_back(
        {a.state(t.src).name, t.event == kTau ? tau_label : label(t.event), a.state(t.dst).name});
  return j;
}

json read_json_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw InputError(p.string() + ": cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(p.string() + ": invalid JSON: " + e.what());
  }
}

Automaton load_model(const std::filesystem::path& p, bool allow_reserved) {
  json j = read_json_file(p);
  if (j.is_object() && !j.contains("name")) j["name"] = p.stem().string();
  return model_from_json(j, p.string(), allow_reserved);
}

ModularSystem system_from_json(const json& j, const std::string& where,
                               const std::filesystem::path& base_dir, bool allow_reserved) {
  if (!j.is_object()) fail(where, "<root>", "expected an object");
  ModularSystem sys;
  if (j.contains("mode")) {
    try {
      sys.mode = parse_mode(require_string(j.at("mode"), where, "mode"));
    } catch (const InputError& e) {
      fail(where, "mode", e.what());
    }
  }
  const json& comps = require(j, "components", where, "");
  if (!comps.is_array() || comps.empty()) fail(where, "components", "expected a non-empty array");
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const json& c = comps[i];
    if (c.is_string()) {
      sys.components.push_back(load_model(base_dir / c.get<std::string>(), allow_reserved));
    } else {
      json m = c;
      if (m.is_object() && !m.contains("name")) m["name"] = "G" + std::to_string(i + 1);
      sys.components.push_back(
          model_from_json(m, where + ": components[" + std::to_string(i) + "]", allow_reserved));
    }
  }
  return sys;
}

json system_to_json(const ModularSystem& sys) {
  json j;
  j["mode"] = to_string(sys.mode);
  j["components"] = json::array();
  for (const Automaton& c : sys.components) j["components"].push_back(model_to_json(c));
  return j;
}

ModularSystem load_system(const std::filesystem::path& p, bool allow_reserved) {
  return system_from_json(read_json_file(p), p.string(), p.parent_path(), allow_reserved);
}

namespace {

std::string quote(const std::string& s) {
  std::string r = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') r += '\\';
    r += c;
  }
  return r + "\"";
}

}  // namespace

std::string to_dot(const Automaton& a) {
  std::ostringstream os;
  os << "digraph " << quote(a.name().empty() ? "G" : a.name()) << " {\n";
  os << "  rankdir=LR;\n  node [shape=circle];\n";
  for (StateId s = 0; s < a.num_states(); ++s) {
    const StateInfo& i = a.state(s);
    os << "  q" << s << " [label=" << quote(i.name);
    if (i.secret) os << ", shape=doublecircle";
    if (i.marked) os << ", style=filled, fillcolor=lightgrey";
    os << "];\n";
    if (i.initial) {
      os << "  init" << s << " [shape=point];\n  init" << s << " -> q" << s << ";\n";
    }
  }
  for (const Transition& t : a.transitions())
    os << "  q" << t.src << " -> q" << t.dst << " [label=" << quote(display_label(t.event)) << "];\n";
  os << "}\n";
  return os.str();
}

}  // namespace opaq
