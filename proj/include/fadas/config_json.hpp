// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "fadas/core.hpp"

namespace fadas {

// JSON config schema, version 1. Parsing is strict: unknown keys and type
// mismatches raise ConfigError. Serialization is canonical (fixed key order,
// 2-space indent), so serialize(parse(s)) is a normal form.
SimConfig parse_config(const std::string& json_text);
SimConfig load_config_file(const std::string& path);
std::string serialize_config(const SimConfig& cfg);

// Applies one `path.to.key=value` override onto a config (used by the CLI's
// --set). Value is parsed as JSON when possible, else taken as a string.
SimConfig apply_override(const SimConfig& cfg, const std::string& assignment);

// Loads the scripted-runtime side file (a bare JSON map client_id -> array of
// durations) into cfg.scripted.runtimes.
void load_scripted_runtimes(SimConfig& cfg);

}  // namespace fadas
