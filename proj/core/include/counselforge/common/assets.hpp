#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace counselforge::assets {

// Text assets (prompt templates, default rules) compiled into the library.
// Names are paths relative to the assets/ directory, e.g. "prompts/persona.txt".

std::optional<std::string_view> find(std::string_view name);

/// Throws ConfigError when `name` is not bundled.
std::string_view get(std::string_view name);

std::vector<std::string> names();

}  // namespace counselforge::assets
