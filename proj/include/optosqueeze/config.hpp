#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "optosqueeze/model.hpp"

namespace optosqueeze {

/// Keys accepted in a config file, in canonical order.
const std::vector<std::string>& config_keys();

/// Sets one key on si. Throws ConfigError for unknown keys or bad values.
void apply_setting(SIInput& si, const std::string& key, const std::string& value);

/// Parses `key = value` lines; `#` starts a comment. Later lines override
/// earlier ones. Missing keys keep the SIInput defaults.
SIInput parse_config(std::istream& in, const std::string& source = "<config>");
SIInput load_config(const std::string& path);

/// Canonical `key = value` lines for every key, suitable for writing back out.
std::vector<std::string> describe_config(const SIInput& si);

/// Shortest text that reads back to the same double.
std::string format_value(double v);

}  // namespace optosqueeze
