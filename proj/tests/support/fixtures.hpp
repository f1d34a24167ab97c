#pragma once

#include <string>

#include "opaq/io.hpp"

namespace opaq::testing {

inline std::filesystem::path fixture_path(const std::string& name) {
  return std::filesystem::path(OPAQ_FIXTURE_DIR) / name;
}

inline Automaton fixture(const std::string& name) { return load_model(fixture_path(name)); }
inline ModularSystem fixture_system(const std::string& name) {
  return load_system(fixture_path(name));
}

// Same structure with the named states secret and every other state non-secret.
inline Automaton with_secrets(const Automaton& a, const std::vector<std::string>& names) {
  std::vector<StateInfo> infos(a.states().begin(), a.states().end());
  for (auto& i : infos) i.secret = false;
  for (const auto& n : names) infos.at(*a.find_state(n)).secret = true;
  return a.with_flags(infos);
}

inline StateSet states_named(const Automaton& a, const std::vector<std::string>& names) {
  StateSet r;
  for (const auto& n : names) r.push_back(*a.find_state(n));
  std::sort(r.begin(), r.end());
  return r;
}

inline std::vector<std::string> names_of(const Automaton& a, const StateSet& s) {
  std::vector<std::string> r;
  for (StateId x : s) r.push_back(a.state(x).name);
  std::sort(r.begin(), r.end());
  return r;
}

inline Trace trace_of(std::initializer_list<const char*> labels) {
  Trace t;
  for (const char* l : labels) t.push_back(parse_event_label(l, true));
  return t;
}

}  // namespace opaq::testing
