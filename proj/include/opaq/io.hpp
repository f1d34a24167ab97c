#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "opaq/compose.hpp"

namespace opaq {

// Model schema:
//   {"name": str?, "alphabet": [str], "tau_label": str?, "states": [{"name", "initial",
//    "marked", "secret"}], "transitions": [[src, event, dst]]}
// Reserved labels (psi events, pair events) are only accepted with allow_reserved.
// Errors are InputError naming `where` and the offending field.
Automaton model_from_json(const nlohmann::json& j, const std::string& where,
                          bool allow_reserved = false);
nlohmann::json model_to_json(const Automaton& a);

// System schema: {"mode": "or"|"and", "components": [path-or-inline-model]}.
// Paths are relative to the system file.
ModularSystem system_from_json(const nlohmann::json& j, const std::string& where,
                               const std::filesystem::path& base_dir, bool allow_reserved = false);
nlohmann::json system_to_json(const ModularSystem& sys);

nlohmann::json read_json_file(const std::filesystem::path& p);
Automaton load_model(const std::filesystem::path& p, bool allow_reserved = false);
ModularSystem load_system(const std::filesystem::path& p, bool allow_reserved = false);

EventId parse_event_label(std::string_view l, bool allow_reserved);

// Graphviz: secret states double circles, marked states shaded.
std::string to_dot(const Automaton& a);

}  // namespace opaq
